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


#ifndef ROBUST_OT_MEASURES_HPP_
#define ROBUST_OT_MEASURES_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "robust_ot/error.hpp"

namespace robust_ot {

using Point = std::vector<double>;

// Tolerance on |sum(mass) - 1| for a probability measure.
inline constexpr double kMassTolerance = 1e-9;

// Weighted point cloud. Immutable once built; construct through make_measure()
// so the invariants (non-empty, equal dimension, non-negative mass summing to
// one) always hold.
class DiscreteMeasure {
 public:
  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return points_.front().size(); }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& mass() const { return mass_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  double mass(std::size_t i) const { return mass_[i]; }

  // True when every atom carries the same mass (up to 1e-12 relative).
  bool is_uniform() const;

 private:
  friend DiscreteMeasure make_measure(std::vector<Point> points,
                                      std::optional<std::vector<double>> mass);
  DiscreteMeasure(std::vector<Point> points, std::vector<double> mass)
      : points_(std::move(points)), mass_(std::move(mass)) {}

  std::vector<Point> points_;
  std::vector<double> mass_;
};

// Builds a validated measure. Omitted mass means uniform 1/n. Given mass is
// checked as-is and never renormalized.
DiscreteMeasure make_measure(std::vector<Point> points,
                             std::optional<std::vector<double>> mass = std::nullopt);

// Convenience for 1-D samples.
DiscreteMeasure make_measure_1d(std::span<const double> xs,
                                std::optional<std::vector<double>> mass = std::nullopt);

enum class Metric { kEuclidean, kSquaredEuclidean, kCustom };

// Dense row-major m x n matrix of non-negative transport costs.
class CostMatrix {
 public:
  CostMatrix() = default;

  // Wraps caller-provided entries (tagged kCustom unless a tag is given).
  // Throws kLengthMismatch on a wrong entry count and kDomainError on
  // negative or non-finite entries.
  static CostMatrix FromEntries(std::size_t rows, std::size_t cols,
                                std::vector<double> entries,
                                Metric tag = Metric::kCustom);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Metric metric() const { return metric_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  const std::vector<double>& entries() const { return entries_; }
  double max_entry() const;

  CostMatrix transposed() const;
  CostMatrix scaled(double alpha) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Metric metric_ = Metric::kCustom;
  std::vector<double> entries_;
};

CostMatrix cost_matrix(const DiscreteMeasure& x, const DiscreteMeasure& y,
                       Metric metric = Metric::kEuclidean);

// Marginal relaxation weights in the scaled convention: entries average one,
// so sum(w) == w.size(). Normalized mass is w / n.
struct WeightVector {
  std::vector<double> w;
  double rho = 0.0;

  std::size_t size() const { return w.size(); }
  static WeightVector Ones(std::size_t n, double rho = 0.0) {
    return WeightVector{std::vector<double>(n, 1.0), rho};
  }
};

// Radius of the chi-square ball in the scaled frame: ||w - 1||_2 <= sqrt(2 rho n).
double ball_radius(double rho, std::size_t n);

// Throws kNormalizationViolated with a description when any WeightVector
// invariant fails (non-negativity, sum == n within 1e-8, ball within 1e-8).
void validate_weights(const WeightVector& w);
bool weights_feasible(const WeightVector& w, double tol = 1e-8);

// mass_i <- mu.mass_i * w_i, validated as a probability measure.
DiscreteMeasure reweight(const DiscreteMeasure& mu, const WeightVector& w);

struct CouplingEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  double mass = 0.0;
};

struct OtSolution {
  double value = 0.0;
  std::vector<CouplingEntry> coupling;
  std::vector<double> potential_x;  // phi, one per source atom
  std::vector<double> potential_y;  // psi, one per target atom; phi_i - psi_j <= c_ij
  double gap = 0.0;
  bool converged = true;
};

// Row and column sums of a sparse coupling.
std::vector<double> coupling_row_sums(const std::vector<CouplingEntry>& pi, std::size_t rows);
std::vector<double> coupling_col_sums(const std::vector<CouplingEntry>& pi, std::size_t cols);
double coupling_cost(const std::vector<CouplingEntry>& pi, const CostMatrix& cost);

}  // namespace robust_ot

#endif  // ROBUST_OT_MEASURES_HPP_
