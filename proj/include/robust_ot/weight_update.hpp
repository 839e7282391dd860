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


#ifndef ROBUST_OT_WEIGHT_UPDATE_HPP_
#define ROBUST_OT_WEIGHT_UPDATE_HPP_

#include <span>
#include <vector>

#include "robust_ot/measures.hpp"

namespace robust_ot {

enum class Sense { kMinimize, kMaximize };

// Linear objective d^T w over the chi-square weight set
//   { w >= 0, sum(w) = n, ||w - 1||_2 <= sqrt(2 rho n) }.
struct WeightSubproblem {
  std::vector<double> d;
  double rho = 0.0;
  Sense sense = Sense::kMinimize;
};

// Exact minimizer (or maximizer) of the weight subproblem.
//
// Stationarity gives w_i = max(0, 1 + (mu - d_i) / lambda). When the ball is
// active the support is a prefix of d sorted ascending; for a support of size
// a the radius condition pins lambda in closed form, so the solver scans the
// a candidate supports and keeps the KKT-consistent one. If the ball is slack
// the minimum-norm point of the optimal face (uniform mass on argmin d) is
// returned. A bisection on lambda is used as a fallback when roundoff leaves
// no candidate consistent.
WeightVector solve_weight_socp(const WeightSubproblem& p);

// d^T w.
double weight_objective(std::span<const double> d, std::span<const double> w);

// Euclidean projection of v onto the chi-square weight set.
WeightVector project_weights(std::span<const double> v, double rho);

// Euclidean projection onto { w >= 0, sum(w) = total }.
std::vector<double> project_simplex(std::span<const double> v, double total);

inline constexpr double kDefaultPenaltyLambda = 1000.0;

struct PenalizedStepResult {
  WeightVector w;
  double objective = 0.0;
  bool stalled = false;
};

// d^T w / n + lambda * max(||w - 1||^2 / n - 2 rho, 0).
double penalized_objective(std::span<const double> w, std::span<const double> d,
                           double rho, double lambda);

// One gradient step on penalized_objective followed by clamping at zero and
// rescaling to sum(w) = n. The step is halved (up to 30 times) until the
// objective does not increase; otherwise the input comes back with
// `stalled` set.
PenalizedStepResult penalized_weight_step(const WeightVector& w, std::span<const double> d,
                                          double rho, double lambda, double step);

// Grid oracle: best point of { w = k * h, sum(k) * h = n } inside the ball,
// with h = n / round(n / resolution). The last two coordinates are resolved
// analytically along their line (the objective is linear there), so the
// enumeration is O((n / h)^(n - 2)). Throws kInstanceTooLarge for n > 4.
WeightVector brute_force_weights(std::span<const double> d, double rho, double resolution,
                                 Sense sense = Sense::kMinimize);

}  // namespace robust_ot

#endif  // ROBUST_OT_WEIGHT_UPDATE_HPP_
