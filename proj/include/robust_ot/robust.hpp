// Copyright 2026 The robust_ot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef ROBUST_OT_ROBUST_HPP_
#define ROBUST_OT_ROBUST_HPP_

#include <optional>
#include <vector>

#include "robust_ot/measures.hpp"

namespace robust_ot {

enum class UpdateRule { kAveraged, kDirect, kSubgradient };

struct RobustParams {
  double rho1 = 0.0;
  double rho2 = 0.0;
  int max_outer_iter = 500;
  double rel_tol = 1e-7;
  UpdateRule update_rule = UpdateRule::kAveraged;
  // Optional starting weights (scaled convention). Used by rho sweeps so a
  // larger radius starts from the optimum of a smaller one.
  std::optional<std::vector<double>> initial_wx;
  std::optional<std::vector<double>> initial_wy;
};

struct RobustSolution {
  double value = 0.0;
  WeightVector w_x;
  WeightVector w_y;
  std::vector<CouplingEntry> coupling;
  std::vector<double> trace;  // best objective after each outer iteration
  double lower_bound = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Robust OT
//
//   min_{w_x, w_y} OT(w_x / m, w_y / n)  over the chi-square weight sets
//
// for uniform-mass inputs. Every OT evaluation yields potentials whose
// linearization is a global lower bound on the objective. The update rule
// proposes the next weights from the latest potentials (conditional gradient
// with step 2 / (t + 2), the plain alternation, or a projected subgradient
// step); these proposals are interleaved with the minimizer of the collected
// lower bounds. The loop stops once the best value and the lower bound agree
// to rel_tol * max(1, value). Atoms whose weight reaches zero are dropped
// from the OT instance and their potentials filled in by c-transform.
//
// Throws kNonUniformInput for non-uniform masses and kDimensionMismatch if
// the cost shape is wrong.
RobustSolution solve_robust(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            const CostMatrix& cost, const RobustParams& params);

RobustSolution solve_robust_one_sided(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                      const CostMatrix& cost, double rho);

// Grid oracle for instances with at most four atoms per side. Enumerates
// feasible weight pairs on a grid of step `grid_resolution` (normalized mass
// units), solving exact OT for each, then refines around the best pairs with
// a shrinking local grid until the step falls below 1e-9. Returns the best
// value found, which is always attained by a feasible pair.
double brute_force_robust(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const CostMatrix& cost, double rho1, double rho2,
                          double grid_resolution);

}  // namespace robust_ot

#endif  // ROBUST_OT_ROBUST_HPP_
