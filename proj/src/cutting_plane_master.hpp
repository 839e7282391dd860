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


#ifndef ROBUST_OT_SRC_CUTTING_PLANE_MASTER_HPP_
#define ROBUST_OT_SRC_CUTTING_PLANE_MASTER_HPP_

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace robust_ot::internal {

// Lower model  l_k(x, y) = gx_k . x + gy_k . y + c_k  of the robust objective.
struct Cut {
  std::vector<double> gx;
  std::vector<double> gy;
  double c = 0.0;
};

struct MasterResult {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> theta;  // multipliers on the cuts, summing to one
  double lower_bound = -std::numeric_limits<double>::infinity();  // bound(theta)
  double value = 0.0;         // max_k l_k at (x, y)
  bool ok = false;
};

// Solves  min_{x, y, s} s  s.t.  l_k(x, y) <= s,  x, y >= 0,
//   sum(x) = |x|, sum(y) = |y|,  ||x - 1|| <= rx,  ||y - 1|| <= ry
// with a primal log-barrier method. An empty block (size zero) is absent
// from the problem. `x0`, `y0` must lie strictly inside their sets. The
// barrier parameter grows until the central-path gap drops below
// `gap_target`; at every stage the cut multipliers are passed to `bound`
// and the best value it returns is reported with its multipliers.
MasterResult solve_master(const std::vector<Cut>& cuts, std::vector<double> x0,
                          std::vector<double> y0, double rx, double ry, double gap_target,
                          const std::function<double(const std::vector<double>&)>& bound);

}  // namespace robust_ot::internal

#endif  // ROBUST_OT_SRC_CUTTING_PLANE_MASTER_HPP_
