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


#ifndef ROBUST_OT_IO_HPP_
#define ROBUST_OT_IO_HPP_

#include <optional>
#include <string>
#include <vector>

#include "robust_ot/measures.hpp"

namespace robust_ot::io {

// Raw point cloud as read from disk, before validation.
struct PointTable {
  std::vector<Point> points;
  std::optional<std::vector<double>> mass;
};

// CSV with a header row x0,...,x{d-1}[,mass]. Blank lines are skipped.
// Throws kParseError on malformed headers, rows or numbers.
PointTable parse_points_csv(const std::string& text);

// {"points": [[...], ...], "mass": [...] | null}.
PointTable parse_points_json(const std::string& text);

// Picks JSON when the first non-blank character is '{', CSV otherwise.
PointTable parse_points(const std::string& text);

// Reads a file and builds a measure. With `normalize`, a given mass column is
// divided by its sum first; otherwise it must already sum to one.
DiscreteMeasure read_measure(const std::string& path, bool normalize);
DiscreteMeasure to_measure(PointTable table, bool normalize);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// CSV with header x0..x{d-1},mass.
std::string measure_to_csv(const DiscreteMeasure& mu);

}  // namespace robust_ot::io

#endif  // ROBUST_OT_IO_HPP_
