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


#ifndef ROBUST_OT_ENTROPIC_OT_HPP_
#define ROBUST_OT_ENTROPIC_OT_HPP_

#include "robust_ot/measures.hpp"

namespace robust_ot {

// Entropic OT by log-domain Sinkhorn iterations with epsilon scaling (the
// regularization starts at max(C) and is divided by 2 per stage until it
// reaches `epsilon`). The final plan is rounded onto the exact transport
// polytope, so `value` is the cost of a feasible coupling and is never below
// the exact OT value. `gap` reports the l1 marginal residual before rounding;
// `converged` is false when that residual is still above `tol` after
// `max_iter` total iterations (the rounded best iterate is still returned).
//
// Potentials are the scaled log-domain duals (f, -g), so phi_i - psi_j <=
// c_ij holds only approximately.
OtSolution solve_sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const CostMatrix& cost, double epsilon,
                          int max_iter = 100000, double tol = 1e-9);

}  // namespace robust_ot

#endif  // ROBUST_OT_ENTROPIC_OT_HPP_
