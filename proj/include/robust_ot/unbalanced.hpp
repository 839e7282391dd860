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


#ifndef ROBUST_OT_UNBALANCED_HPP_
#define ROBUST_OT_UNBALANCED_HPP_

#include <cstddef>
#include <vector>

#include "robust_ot/measures.hpp"

namespace robust_ot {

// Convex conjugate of f(t) = (t - 1)^2 / 2 restricted to t >= 0:
// 1 - sqrt(1 - 2x) for x <= 1/2, +infinity above.
double r_star(double x);

// sup_{s > 0} (x - (s - 1)^2 / 2) / s by golden-section search on log s.
// Requires x <= 1/2 - 1e-6 (kDomainError otherwise).
double r_star_numeric_check(double x);

struct UnbalancedSolution {
  double value = 0.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> coupling;  // dense, row-major
  double transport_cost = 0.0;
  double marginal_penalty_x = 0.0;
  double marginal_penalty_y = 0.0;
  double kkt_residual = 0.0;  // norm of the projected-gradient mapping
  int iterations = 0;
  bool converged = false;
};

// min_{pi >= 0} <C, pi> + tau * chi2(pi 1 || mu) + tau * chi2(pi^T 1 || nu)
// with chi2(p || q) = sum_i (p_i - q_i)^2 / (2 q_i). Rows or columns with zero
// reference mass are held at zero. Solved by accelerated projected gradient
// with gradient-based restarts and step 1/L, L = tau * (n / min a + m / min b); stops when the
// gradient mapping norm drops to `tol`.
UnbalancedSolution solve_unbalanced_chi2(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                         const CostMatrix& cost, double tau,
                                         int max_iter = 200000, double tol = 1e-9);

// Objective of a dense plan, split into its three terms.
struct UnbalancedTerms {
  double transport = 0.0;
  double penalty_x = 0.0;
  double penalty_y = 0.0;
  double total() const { return transport + penalty_x + penalty_y; }
};
UnbalancedTerms unbalanced_objective(const std::vector<double>& plan, const DiscreteMeasure& mu,
                                     const DiscreteMeasure& nu, const CostMatrix& cost,
                                     double tau);

}  // namespace robust_ot

#endif  // ROBUST_OT_UNBALANCED_HPP_
