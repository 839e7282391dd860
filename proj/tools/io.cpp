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


#include "robust_ot/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace robust_ot::io {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& field, std::size_t line_no) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw Error(ErrorKind::kParseError,
                "line " + std::to_string(line_no) + ": bad number '" + field + "'");
  }
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::kParseError, "line " + std::to_string(line_no) + ": non-finite value");
  }
  return v;
}

}  // namespace

PointTable parse_points_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorKind::kEmptyInput, "CSV has no header row");
  const bool has_mass = header.back() == "mass";
  const std::size_t dim = header.size() - (has_mass ? 1 : 0);
  if (dim == 0) throw Error(ErrorKind::kParseError, "CSV header has no coordinate columns");
  for (std::size_t k = 0; k < dim; ++k) {
    if (header[k] != "x" + std::to_string(k)) {
      throw Error(ErrorKind::kParseError, "CSV header column " + std::to_string(k) +
                                              " should be x" + std::to_string(k) + ", got '" +
                                              header[k] + "'");
    }
  }

  PointTable table;
  std::vector<double> mass;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::kParseError, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(header.size()) + " fields");
    }
    Point p(dim);
    for (std::size_t k = 0; k < dim; ++k) p[k] = parse_number(fields[k], line_no);
    table.points.push_back(std::move(p));
    if (has_mass) mass.push_back(parse_number(fields[dim], line_no));
  }
  if (has_mass) table.mass = std::move(mass);
  return table;
}

PointTable parse_points_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array()) {
    throw Error(ErrorKind::kParseError, "JSON input needs a \"points\" array");
  }
  PointTable table;
  try {
    for (const auto& row : doc["points"]) {
      table.points.push_back(row.get<std::vector<double>>());
    }
    if (doc.contains("mass") && !doc["mass"].is_null()) {
      table.mass = doc["mass"].get<std::vector<double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  return table;
}

PointTable parse_points(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_points_json(text);
  return parse_points_csv(text);
}

DiscreteMeasure to_measure(PointTable table, bool normalize) {
  if (normalize && table.mass) {
    auto& m = *table.mass;
    const double total = std::accumulate(m.begin(), m.end(), 0.0);
    if (!(total > 0.0)) throw Error(ErrorKind::kMassNotNormalized, "mass sums to zero");
    for (double& v : m) v /= total;
  }
  return make_measure(std::move(table.points), std::move(table.mass));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::kIoError, "write failed for " + path);
}

DiscreteMeasure read_measure(const std::string& path, bool normalize) {
  try {
    return to_measure(parse_points(read_file(path)), normalize);
  } catch (const Error& e) {
    const std::string msg = e.what();
    throw Error(e.kind(), path + ": " + msg.substr(msg.find(": ") + 2));
  }
}

std::string measure_to_csv(const DiscreteMeasure& mu) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t k = 0; k < mu.dim(); ++k) out << 'x' << k << ',';
  out << "mass\n";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (double v : mu.point(i)) out << v << ',';
    out << mu.mass(i) << '\n';
  }
  return out.str();
}

}  // namespace robust_ot::io
