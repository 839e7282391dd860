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


#include "robust_ot/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace robust_ot {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kNegativeMass: return "NegativeMass";
    case ErrorKind::kMassNotNormalized: return "MassNotNormalized";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kNormalizationViolated: return "NormalizationViolated";
    case ErrorKind::kSolverStall: return "SolverStall";
    case ErrorKind::kNonUniformInput: return "NonUniformInput";
    case ErrorKind::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorKind::kDomainError: return "DomainError";
    case ErrorKind::kTooFewPoints: return "TooFewPoints";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kIoError: return "IoError";
  }
  return "Unknown";
}

bool DiscreteMeasure::is_uniform() const {
  const double ref = 1.0 / static_cast<double>(mass_.size());
  return std::all_of(mass_.begin(), mass_.end(),
                     [ref](double m) { return std::abs(m - ref) <= 1e-12 * ref; });
}

DiscreteMeasure make_measure(std::vector<Point> points,
                             std::optional<std::vector<double>> mass) {
  if (points.empty()) throw Error(ErrorKind::kEmptyInput, "measure has no points");
  const std::size_t d = points.front().size();
  if (d == 0) throw Error(ErrorKind::kDimensionMismatch, "points have dimension 0");
  for (const auto& p : points) {
    if (p.size() != d) {
      throw Error(ErrorKind::kDimensionMismatch, "points have differing dimensions");
    }
    for (double v : p) {
      if (!std::isfinite(v)) throw Error(ErrorKind::kDomainError, "non-finite coordinate");
    }
  }
  const std::size_t n = points.size();
  std::vector<double> m;
  if (mass) {
    if (mass->size() != n) {
      throw Error(ErrorKind::kLengthMismatch, "mass length differs from point count");
    }
    m = std::move(*mass);
    double total = 0.0;
    for (double v : m) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::kNegativeMass, "mass entries must be finite and >= 0");
      }
      total += v;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
      std::ostringstream os;
      os << "mass sums to " << total;
      throw Error(ErrorKind::kMassNotNormalized, os.str());
    }
  } else {
    m.assign(n, 1.0 / static_cast<double>(n));
  }
  return DiscreteMeasure(std::move(points), std::move(m));
}

DiscreteMeasure make_measure_1d(std::span<const double> xs,
                                std::optional<std::vector<double>> mass) {
  std::vector<Point> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back({x});
  return make_measure(std::move(pts), std::move(mass));
}

CostMatrix CostMatrix::FromEntries(std::size_t rows, std::size_t cols,
                                   std::vector<double> entries, Metric tag) {
  if (rows == 0 || cols == 0) throw Error(ErrorKind::kEmptyInput, "empty cost matrix");
  if (entries.size() != rows * cols) {
    throw Error(ErrorKind::kLengthMismatch, "cost entry count differs from rows * cols");
  }
  for (double v : entries) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::kDomainError, "cost entries must be finite and >= 0");
    }
  }
  CostMatrix c;
  c.rows_ = rows;
  c.cols_ = cols;
  c.metric_ = tag;
  c.entries_ = std::move(entries);
  return c;
}

double CostMatrix::max_entry() const {
  return entries_.empty() ? 0.0 : *std::max_element(entries_.begin(), entries_.end());
}

CostMatrix CostMatrix::transposed() const {
  std::vector<double> t(entries_.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t[j * rows_ + i] = entries_[i * cols_ + j];
  }
  return FromEntries(cols_, rows_, std::move(t), metric_);
}

CostMatrix CostMatrix::scaled(double alpha) const {
  std::vector<double> s = entries_;
  for (double& v : s) v *= alpha;
  return FromEntries(rows_, cols_, std::move(s), Metric::kCustom);
}

CostMatrix cost_matrix(const DiscreteMeasure& x, const DiscreteMeasure& y, Metric metric) {
  if (x.dim() != y.dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "measures live in different dimensions");
  }
  if (metric == Metric::kCustom) {
    throw Error(ErrorKind::kDomainError, "custom costs must be built with FromEntries");
  }
  const std::size_t m = x.size();
  const std::size_t n = y.size();
  std::vector<double> c(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    const Point& p = x.point(i);
    for (std::size_t j = 0; j < n; ++j) {
      const Point& q = y.point(j);
      double s = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double diff = p[k] - q[k];
        s += diff * diff;
      }
      c[i * n + j] = metric == Metric::kEuclidean ? std::sqrt(s) : s;
    }
  }
  return CostMatrix::FromEntries(m, n, std::move(c), metric);
}

double ball_radius(double rho, std::size_t n) {
  return std::sqrt(2.0 * rho * static_cast<double>(n));
}

namespace {

std::optional<std::string> weight_violation(const WeightVector& w, double tol) {
  const double n = static_cast<double>(w.size());
  double sum = 0.0;
  double dist2 = 0.0;
  for (double v : w.w) {
    if (!(v >= 0.0) || !std::isfinite(v)) return "negative or non-finite weight";
    sum += v;
    dist2 += (v - 1.0) * (v - 1.0);
  }
  if (std::abs(sum - n) > tol) return "weights do not sum to n";
  if (std::sqrt(dist2) > ball_radius(w.rho, w.size()) + tol) {
    return "weights leave the chi-square ball";
  }
  return std::nullopt;
}

}  // namespace

bool weights_feasible(const WeightVector& w, double tol) {
  return !w.w.empty() && !weight_violation(w, tol).has_value();
}

void validate_weights(const WeightVector& w) {
  if (w.w.empty()) throw Error(ErrorKind::kEmptyInput, "empty weight vector");
  if (auto why = weight_violation(w, 1e-8)) {
    throw Error(ErrorKind::kNormalizationViolated, *why);
  }
}

DiscreteMeasure reweight(const DiscreteMeasure& mu, const WeightVector& w) {
  if (w.size() != mu.size()) {
    throw Error(ErrorKind::kLengthMismatch, "weight length differs from measure size");
  }
  std::vector<double> mass(mu.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(w.w[i] >= 0.0)) throw Error(ErrorKind::kNormalizationViolated, "negative weight");
    mass[i] = mu.mass(i) * w.w[i];
    total += mass[i];
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    std::ostringstream os;
    os << "reweighted mass sums to " << total;
    throw Error(ErrorKind::kNormalizationViolated, os.str());
  }
  return make_measure(mu.points(), std::move(mass));
}

std::vector<double> coupling_row_sums(const std::vector<CouplingEntry>& pi, std::size_t rows) {
  std::vector<double> r(rows, 0.0);
  for (const auto& e : pi) r[e.i] += e.mass;
  return r;
}

std::vector<double> coupling_col_sums(const std::vector<CouplingEntry>& pi, std::size_t cols) {
  std::vector<double> c(cols, 0.0);
  for (const auto& e : pi) c[e.j] += e.mass;
  return c;
}

double coupling_cost(const std::vector<CouplingEntry>& pi, const CostMatrix& cost) {
  double v = 0.0;
  for (const auto& e : pi) v += cost(e.i, e.j) * e.mass;
  return v;
}

}  // namespace robust_ot
