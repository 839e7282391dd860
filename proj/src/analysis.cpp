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


#include "robust_ot/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "robust_ot/datagen.hpp"
#include "robust_ot/exact_ot.hpp"

namespace robust_ot {

double theorem2_bound(double k, double gamma, double rho) {
  if (!(k >= 1.0)) throw Error(ErrorKind::kDomainError, "k must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(ErrorKind::kDomainError, "gamma must be in [0, 1)");
  if (!(rho >= 0.0)) throw Error(ErrorKind::kDomainError, "rho must be >= 0");
  return std::max(1.0, 1.0 + k * gamma - k * std::sqrt(2.0 * rho * gamma * (1.0 - gamma)));
}

double rho_for_known_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(ErrorKind::kDomainError, "gamma must be in [0, 1)");
  return gamma / (2.0 * (1.0 - gamma));
}

OutlierInstance construct_theorem2_instance(double k, double gamma, int n_atoms) {
  if (!(k >= 1.0)) throw Error(ErrorKind::kDomainError, "k must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(ErrorKind::kDomainError, "gamma must be in [0, 1)");
  if (n_atoms < 1) throw Error(ErrorKind::kDomainError, "n_atoms must be >= 1");
  const double raw = gamma * n_atoms;
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) > 1e-9 * std::max(1.0, raw)) {
    throw Error(ErrorKind::kDomainError, "gamma * n_atoms must be an integer");
  }
  const int n_out = static_cast<int>(rounded);
  const int n_clean = n_atoms - n_out;
  std::vector<double> clean(static_cast<std::size_t>(n_clean), 0.0);
  std::vector<double> outlier(static_cast<std::size_t>(std::max(n_out, 1)), k);
  std::vector<double> mixed = clean;
  mixed.insert(mixed.end(), static_cast<std::size_t>(n_out), k);
  std::vector<bool> labels(static_cast<std::size_t>(n_atoms), false);
  for (int i = n_clean; i < n_atoms; ++i) labels[static_cast<std::size_t>(i)] = true;
  const std::vector<double> target{1.0};
  return OutlierInstance{make_measure_1d(clean), make_measure_1d(outlier), make_measure_1d(mixed),
                         make_measure_1d(target), rounded / n_atoms, k, std::move(labels)};
}

OutlierInstance make_outlier_instance(const DiscreteMeasure& mixed,
                                      const std::vector<bool>& labels,
                                      const DiscreteMeasure& target) {
  if (labels.size() != mixed.size()) throw Error(ErrorKind::kLengthMismatch, "labels");
  if (!mixed.is_uniform()) throw Error(ErrorKind::kNonUniformInput, "mixed measure");
  std::vector<Point> clean, outlier;
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    (labels[i] ? outlier : clean).push_back(mixed.point(i));
  }
  if (clean.empty() || outlier.empty()) {
    throw Error(ErrorKind::kDomainError, "need at least one clean and one outlier atom");
  }
  DiscreteMeasure clean_mu = make_measure(std::move(clean));
  DiscreteMeasure outlier_mu = make_measure(std::move(outlier));
  const double to_target = solve_exact(clean_mu, target, cost_matrix(clean_mu, target)).value;
  const double spread = solve_exact(outlier_mu, clean_mu, cost_matrix(outlier_mu, clean_mu)).value;
  const double gamma =
      static_cast<double>(outlier_mu.size()) / static_cast<double>(mixed.size());
  return OutlierInstance{std::move(clean_mu), std::move(outlier_mu), mixed, target, gamma,
                         to_target > 0.0 ? spread / to_target : 1.0, labels};
}

Theorem2Report verify_theorem2(const OutlierInstance& instance, double rho) {
  Theorem2Report report;
  report.lhs = solve_robust_one_sided(instance.mixed, instance.target,
                                      cost_matrix(instance.mixed, instance.target), rho)
                   .value;
  report.clean_distance =
      solve_exact(instance.clean, instance.target, cost_matrix(instance.clean, instance.target))
          .value;
  report.factor = theorem2_bound(instance.k, instance.gamma, rho);
  report.rhs = report.factor * report.clean_distance;
  report.holds = report.lhs <= report.rhs + 1e-6;
  return report;
}

namespace {

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("ROBUST_OT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) n = static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  if (n == 0) n = 1;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

}  // namespace

RhoCurve sweep_rho(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   const CostMatrix& cost, const std::vector<double>& rho_grid) {
  if (rho_grid.empty()) throw Error(ErrorKind::kEmptyInput, "empty rho grid");
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] >= 0.0)) throw Error(ErrorKind::kDomainError, "rho must be >= 0");
    if (i > 0 && !(rho_grid[i] > rho_grid[i - 1])) {
      throw Error(ErrorKind::kDomainError, "rho grid must be strictly ascending");
    }
  }
  const std::size_t count = rho_grid.size();
  RhoCurve curve;
  curve.rho_grid = rho_grid;
  curve.values.assign(count, 0.0);
  curve.weights.assign(count, {});

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        RobustParams params;
        params.rho1 = rho_grid[i];
        RobustSolution s = solve_robust(mu, nu, cost, params);
        curve.values[i] = s.value;
        curve.weights[i] = std::move(s.w_x.w);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned workers = worker_count(count);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 1; i < count; ++i) {
    if (curve.values[i] <= curve.values[i - 1]) continue;
    RobustParams params;
    params.rho1 = rho_grid[i];
    params.rel_tol = 1e-10;
    params.initial_wx = curve.weights[i - 1];
    RobustSolution s = solve_robust(mu, nu, cost, params);
    if (s.value < curve.values[i]) {
      curve.values[i] = s.value;
      curve.weights[i] = std::move(s.w_x.w);
    }
    if (curve.values[i] > curve.values[i - 1] + 1e-8) curve.monotone = false;
    if (curve.values[i] > curve.values[i - 1]) {
      curve.values[i] = curve.values[i - 1];
      curve.weights[i] = curve.weights[i - 1];
    }
  }
  return curve;
}

std::vector<double> make_rho_grid(double start, double stop, int count, bool log_spaced) {
  if (count < 1) throw Error(ErrorKind::kDomainError, "grid count must be >= 1");
  if (!(start >= 0.0) || !(stop >= start)) {
    throw Error(ErrorKind::kDomainError, "grid needs 0 <= start <= stop");
  }
  if (log_spaced && !(start > 0.0)) throw Error(ErrorKind::kDomainError, "log grid needs start > 0");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    grid[static_cast<std::size_t>(i)] =
        log_spaced ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                   : start + f * (stop - start);
  }
  grid.front() = start;
  grid.back() = stop;
  return grid;
}

Elbow detect_elbow(const RhoCurve& curve) {
  const std::size_t n = curve.rho_grid.size();
  if (n < 4 || curve.values.size() != n) {
    throw Error(ErrorKind::kTooFewPoints, "elbow detection needs at least four points");
  }
  const auto [lo, hi] = std::minmax_element(curve.values.begin(), curve.values.end());
  const double range = *hi - *lo;
  Elbow elbow;
  if (!(range >= 1e-9)) {
    elbow.rho = curve.rho_grid.front();
    elbow.index = 0;
    elbow.flat = true;
    return elbow;
  }
  const double x0 = curve.rho_grid.front();
  const double xspan = curve.rho_grid.back() - x0;
  auto nx = [&](std::size_t i) { return xspan > 0.0 ? (curve.rho_grid[i] - x0) / xspan : 0.0; };
  auto ny = [&](std::size_t i) { return (curve.values[i] - *lo) / range; };
  const double ax = nx(0), ay = ny(0);
  const double bx = nx(n - 1), by = ny(n - 1);
  const double len = std::hypot(bx - ax, by - ay);
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dist = std::abs((bx - ax) * (ay - ny(i)) - (ax - nx(i)) * (by - ay)) / len;
    if (dist > best) {
      best = dist;
      elbow.index = i;
    }
  }
  elbow.rho = curve.rho_grid[elbow.index];
  return elbow;
}

namespace {

double robust_pair(const DiscreteMeasure& a, const DiscreteMeasure& b, Metric metric,
                   double rho1, double rho2) {
  RobustParams params;
  params.rho1 = rho1;
  params.rho2 = rho2;
  return solve_robust(a, b, cost_matrix(a, b, metric), params).value;
}

DiscreteMeasure random_cloud(std::mt19937_64& rng, int atoms) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < atoms; ++i) {
    const double x = unit(rng);
    const double y = unit(rng);
    pts.push_back({x, y});
  }
  return make_measure(std::move(pts));
}

}  // namespace

MetricReport metric_properties_report(const std::vector<DiscreteMeasure>& samples,
                                      Metric metric, double rho) {
  const std::size_t n = samples.size();
  if (n < 3) throw Error(ErrorKind::kTooFewPoints, "need at least three measures");
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  MetricReport report;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      w[i][j] = robust_pair(samples[i], samples[j], metric, rho, rho);
      if (w[i][j] < 0.0) report.non_negative = false;
    }
    report.max_identity_value = std::max(report.max_identity_value, std::abs(w[i][i]));
  }
  report.identity = report.max_identity_value <= 1e-9;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double err = std::abs(w[i][j] - w[j][i]) / std::max({1.0, w[i][j], w[j][i]});
      report.max_symmetry_error = std::max(report.max_symmetry_error, err);
    }
  }
  report.symmetric = report.max_symmetry_error <= 1e-6;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (a == b || b == c || a == c) continue;
        TriangleViolation v{a, b, c, w[a][c], w[a][b] + w[b][c]};
        if (v.margin() > 1e-6) report.triangle_violations.push_back(v);
      }
    }
  }
  return report;
}

std::optional<TriangleCounterexample> search_triangle_counterexample(int trials, double rho,
                                                                     std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed));
  std::optional<TriangleCounterexample> best;
  for (int t = 0; t < trials; ++t) {
    DiscreteMeasure a = random_cloud(rng, 2);
    DiscreteMeasure b = random_cloud(rng, 2);
    DiscreteMeasure c = random_cloud(rng, 2);
    TriangleViolation v{0, 1, 2, robust_pair(a, c, Metric::kEuclidean, rho, rho),
                        robust_pair(a, b, Metric::kEuclidean, rho, rho) +
                            robust_pair(b, c, Metric::kEuclidean, rho, rho)};
    if (v.margin() > 1e-6 && (!best || v.margin() > best->violation.margin())) {
      best = TriangleCounterexample{a, b, c, rho, v, t};
    }
  }
  return best;
}

std::optional<AsymmetryExample> search_asymmetry(int trials, double rho1, double rho2,
                                                 double min_gap, std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed));
  for (int t = 0; t < trials; ++t) {
    DiscreteMeasure a = random_cloud(rng, 3);
    DiscreteMeasure b = random_cloud(rng, 3);
    const double fwd = robust_pair(a, b, Metric::kEuclidean, rho1, rho2);
    const double bwd = robust_pair(b, a, Metric::kEuclidean, rho1, rho2);
    if (std::abs(fwd - bwd) > min_gap) return AsymmetryExample{a, b, rho1, rho2, fwd, bwd, t};
  }
  return std::nullopt;
}

double roc_auc(const std::vector<double>& score, const std::vector<bool>& positive) {
  if (score.size() != positive.size()) throw Error(ErrorKind::kLengthMismatch, "labels");
  double wins = 0.0;
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < score.size(); ++i) {
    if (!positive[i]) continue;
    ++pos;
    for (std::size_t j = 0; j < score.size(); ++j) {
      if (positive[j]) continue;
      if (score[i] > score[j]) {
        wins += 1.0;
      } else if (score[i] == score[j]) {
        wins += 0.5;
      }
    }
  }
  for (bool p : positive) neg += p ? 0 : 1;
  if (pos == 0 || neg == 0) throw Error(ErrorKind::kDomainError, "need both classes for AUC");
  return wins / (static_cast<double>(pos) * static_cast<double>(neg));
}

}  // namespace robust_ot
