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


#ifndef ROBUST_OT_TOOLS_SVG_HPP_
#define ROBUST_OT_TOOLS_SVG_HPP_

#include <string>
#include <vector>

#include "robust_ot/measures.hpp"

namespace robust_ot::cli {

struct SvgScene {
  std::vector<Point> source;
  std::vector<Point> target;
  std::vector<double> source_weights;  // scaled; empty means all ones
  std::vector<double> target_weights;
  std::vector<CouplingEntry> coupling;
};

// Source atoms red, target atoms blue, coupling segments green with opacity
// proportional to mass. Atom radius scales with weight. Points must be 2-D.
std::string render_couplings_svg(const SvgScene& scene, double size);

}  // namespace robust_ot::cli

#endif  // ROBUST_OT_TOOLS_SVG_HPP_
