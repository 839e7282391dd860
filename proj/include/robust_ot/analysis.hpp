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


#ifndef ROBUST_OT_ANALYSIS_HPP_
#define ROBUST_OT_ANALYSIS_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "robust_ot/measures.hpp"
#include "robust_ot/robust.hpp"

namespace robust_ot {

// max(1, 1 + k gamma - k sqrt(2 rho gamma (1 - gamma))).
double theorem2_bound(double k, double gamma, double rho);

// gamma / (2 (1 - gamma)): the radius at which the bound factor reaches 1.
double rho_for_known_gamma(double gamma);

struct OutlierInstance {
  DiscreteMeasure clean;
  DiscreteMeasure outlier;
  DiscreteMeasure mixed;
  DiscreteMeasure target;
  double gamma = 0.0;
  double k = 1.0;
  std::vector<bool> labels;  // per atom of `mixed`
};

// 1-D point masses: n_atoms - gamma n_atoms clean atoms at 0, gamma n_atoms
// outliers at k, target at 1. W(clean, target) = 1 and W(outlier, clean) = k.
// When there are no outliers the outlier component is a single atom at k.
OutlierInstance construct_theorem2_instance(double k, double gamma, int n_atoms);

// Packs a corrupted sample into an instance, measuring k with exact OT as
// W(outlier, clean) / W(clean, target) and gamma as the outlier fraction.
// `mixed` must have uniform mass; clean and outlier parts are its labelled
// atoms.
OutlierInstance make_outlier_instance(const DiscreteMeasure& mixed,
                                      const std::vector<bool>& labels,
                                      const DiscreteMeasure& target);

struct Theorem2Report {
  double lhs = 0.0;           // one-sided robust OT(mixed, target)
  double clean_distance = 0.0;  // W(clean, target)
  double factor = 0.0;        // theorem2_bound(k, gamma, rho)
  double rhs = 0.0;           // factor * clean_distance
  bool holds = false;         // lhs <= rhs + 1e-6
};

Theorem2Report verify_theorem2(const OutlierInstance& instance, double rho);

struct RhoCurve {
  std::vector<double> rho_grid;
  std::vector<double> values;
  std::vector<std::vector<double>> weights;  // w_x at each grid point
  std::optional<std::size_t> elbow_index;
  bool monotone = true;  // false if a rise above 1e-8 survived the warm re-solve
};

// One-sided robust OT along an ascending grid. Points are solved in parallel
// (ROBUST_OT_THREADS caps the worker count, default: hardware threads). A
// point that ends up above its predecessor is re-solved warm-started from the
// predecessor's weights. If it is still above, it takes the predecessor's
// value and weights (feasible at the larger radius), so the curve is always
// non-increasing.
RhoCurve sweep_rho(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   const CostMatrix& cost, const std::vector<double>& rho_grid);

// `count` values from start to stop, linearly or geometrically spaced.
std::vector<double> make_rho_grid(double start, double stop, int count, bool log_spaced);

struct Elbow {
  double rho = 0.0;
  std::size_t index = 0;
  bool flat = false;
};

// Kneedle-style: both axes are min-max normalized and the grid point farthest
// from the chord joining the end points wins. Curves with a value range below
// 1e-9 return the first grid point flagged flat. Throws kTooFewPoints under
// four points.
Elbow detect_elbow(const RhoCurve& curve);

struct TriangleViolation {
  std::size_t a = 0, b = 0, c = 0;
  double direct = 0.0;  // W(a, c)
  double via = 0.0;     // W(a, b) + W(b, c)
  double margin() const { return direct - via; }
};

struct MetricReport {
  bool non_negative = true;
  bool identity = true;
  bool symmetric = true;
  double max_identity_value = 0.0;
  double max_symmetry_error = 0.0;  // relative to max(1, value)
  std::vector<TriangleViolation> triangle_violations;  // margin > 1e-6
};

// Pairwise robust OT at radii (rho, rho) over all ordered pairs of samples,
// checking non-negativity, identity, symmetry and every ordered triple for
// triangle violations. Requires at least three samples.
MetricReport metric_properties_report(const std::vector<DiscreteMeasure>& samples,
                                      Metric metric, double rho);

struct TriangleCounterexample {
  DiscreteMeasure a, b, c;
  double rho = 0.0;
  TriangleViolation violation;
  int trial = 0;
};

// Random 2-atom measures in the unit square, `trials` seeded triples; returns
// the violation with the largest margin, if any.
std::optional<TriangleCounterexample> search_triangle_counterexample(int trials, double rho,
                                                                     std::uint64_t seed);

struct AsymmetryExample {
  DiscreteMeasure a, b;
  double rho1 = 0.0, rho2 = 0.0;
  double forward = 0.0;   // W_{rho1, rho2}(a, b)
  double backward = 0.0;  // W_{rho1, rho2}(b, a)
  int trial = 0;
};

// Seeded search for a pair whose robust OT at unequal radii changes by more
// than `min_gap` when the arguments are swapped.
std::optional<AsymmetryExample> search_asymmetry(int trials, double rho1, double rho2,
                                                 double min_gap, std::uint64_t seed);

// Area under the ROC curve of `score` against boolean labels (ties count
// one half).
double roc_auc(const std::vector<double>& score, const std::vector<bool>& positive);

}  // namespace robust_ot

#endif  // ROBUST_OT_ANALYSIS_HPP_
