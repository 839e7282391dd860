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


#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace robust_ot::cli {
namespace {

constexpr double kMargin = 20.0;
constexpr double kBaseRadius = 3.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string render_couplings_svg(const SvgScene& scene, double size) {
  if (!(size > 2.0 * kMargin)) throw Error(ErrorKind::kDomainError, "canvas too small");
  for (const auto* cloud : {&scene.source, &scene.target}) {
    if (cloud->empty()) throw Error(ErrorKind::kEmptyInput, "no points to draw");
    for (const auto& p : *cloud) {
      if (p.size() != 2) throw Error(ErrorKind::kDimensionMismatch, "SVG needs 2-D points");
    }
  }
  if ((!scene.source_weights.empty() && scene.source_weights.size() != scene.source.size()) ||
      (!scene.target_weights.empty() && scene.target_weights.size() != scene.target.size())) {
    throw Error(ErrorKind::kLengthMismatch, "weight count does not match points");
  }
  for (const auto& e : scene.coupling) {
    if (e.i >= scene.source.size() || e.j >= scene.target.size()) {
      throw Error(ErrorKind::kLengthMismatch, "coupling index out of range");
    }
  }

  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = -lo_x;
  for (const auto* cloud : {&scene.source, &scene.target}) {
    for (const auto& p : *cloud) {
      lo_x = std::min(lo_x, p[0]);
      hi_x = std::max(hi_x, p[0]);
      lo_y = std::min(lo_y, p[1]);
      hi_y = std::max(hi_y, p[1]);
    }
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  const double scale = (size - 2.0 * kMargin) / span;
  auto sx = [&](const Point& p) { return kMargin + (p[0] - lo_x) * scale; };
  // SVG y grows downwards.
  auto sy = [&](const Point& p) { return size - kMargin - (p[1] - lo_y) * scale; };

  double max_mass = 0.0;
  for (const auto& e : scene.coupling) max_mass = std::max(max_mass, e.mass);

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(size) + "\" height=\"" +
       fmt(size) + "\" viewBox=\"0 0 " + fmt(size) + " " + fmt(size) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<g stroke=\"green\" stroke-width=\"1\">\n";
  for (const auto& e : scene.coupling) {
    if (!(max_mass > 0.0) || e.mass <= 0.0) continue;
    const auto& a = scene.source[e.i];
    const auto& b = scene.target[e.j];
    s += "<line x1=\"" + fmt(sx(a)) + "\" y1=\"" + fmt(sy(a)) + "\" x2=\"" + fmt(sx(b)) +
         "\" y2=\"" + fmt(sy(b)) + "\" stroke-opacity=\"" + fmt(e.mass / max_mass) + "\"/>\n";
  }
  s += "</g>\n";
  auto draw = [&](const std::vector<Point>& pts, const std::vector<double>& w, const char* color) {
    s += std::string("<g fill=\"") + color + "\" fill-opacity=\"0.8\">\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double r = kBaseRadius * (w.empty() ? 1.0 : std::max(0.0, w[i]));
      if (r <= 0.0) continue;
      s += "<circle cx=\"" + fmt(sx(pts[i])) + "\" cy=\"" + fmt(sy(pts[i])) + "\" r=\"" + fmt(r) +
           "\"/>\n";
    }
    s += "</g>\n";
  };
  draw(scene.source, scene.source_weights, "red");
  draw(scene.target, scene.target_weights, "blue");
  s += "</svg>\n";
  return s;
}

}  // namespace robust_ot::cli
