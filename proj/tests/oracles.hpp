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


// Independent reference implementations used only by the tests.
#ifndef ROBUST_OT_TESTS_ORACLES_HPP_
#define ROBUST_OT_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "robust_ot/measures.hpp"

namespace robust_ot::oracle {

// Transportation LP by basis enumeration: every choice of m + n - 1 cells
// whose equality system has full column rank is solved directly; the best
// non-negative solution wins. Exponential, so small instances only.
inline double lp_by_vertex_enumeration(const std::vector<double>& a, const std::vector<double>& b,
                                       const std::vector<double>& cost) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  const int cells = m * n;
  const int k = m + n - 1;
  Eigen::MatrixXd full(m + n, cells);
  full.setZero();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      full(i, i * n + j) = 1.0;
      full(m + j, i * n + j) = 1.0;
    }
  }
  Eigen::VectorXd rhs(m + n);
  for (int i = 0; i < m; ++i) rhs(i) = a[i];
  for (int j = 0; j < n; ++j) rhs(m + j) = b[j];

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(k);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      Eigen::MatrixXd sub(m + n, k);
      for (int c = 0; c < k; ++c) sub.col(c) = full.col(pick[c]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      if (lu.rank() < k) return;
      const Eigen::VectorXd x = lu.solve(rhs);
      if ((sub * x - rhs).cwiseAbs().maxCoeff() > 1e-12) return;
      double v = 0.0;
      for (int c = 0; c < k; ++c) {
        if (x(c) < -1e-13) return;
        v += cost[pick[c]] * std::max(0.0, x(c));
      }
      best = std::min(best, v);
      return;
    }
    for (int c = start; c <= cells - (k - depth); ++c) {
      pick[depth] = c;
      rec(c + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

// 2 x 2 transport plans form a segment parametrized by pi_00; the cost is
// linear along it, so the optimum sits at an end point.
inline double ot_2x2(const std::vector<double>& a, const std::vector<double>& b,
                     const std::vector<double>& c) {
  const double lo = std::max(0.0, a[0] - b[1]);
  const double hi = std::min(a[0], b[0]);
  auto value = [&](double t) {
    return c[0] * t + c[1] * (a[0] - t) + c[2] * (b[0] - t) + c[3] * (a[1] - b[0] + t);
  };
  return std::min(value(lo), value(hi));
}

// Two-level KKT bisection for min w.d over {w >= 0, sum w = n,
// ||w - 1|| <= r}: w_i = max(0, 1 + (mu - d_i) / lambda), mu matched to the
// sum for each lambda, lambda matched to the ball radius.
inline std::vector<double> socp_by_bisection(const std::vector<double>& d, double rho) {
  const std::size_t n = d.size();
  const double nd = static_cast<double>(n);
  const double radius = std::sqrt(2.0 * rho * nd);
  std::vector<double> ones(n, 1.0);
  if (radius == 0.0 || n == 1) return ones;
  const double dmin = *std::min_element(d.begin(), d.end());
  const double dmax = *std::max_element(d.begin(), d.end());
  if (dmax - dmin == 0.0) return ones;
  std::vector<double> face(n, 0.0);
  std::size_t ties = 0;
  for (double v : d) ties += v == dmin;
  for (std::size_t i = 0; i < n; ++i) face[i] = d[i] == dmin ? nd / ties : 0.0;
  auto dist = [&](const std::vector<double>& w) {
    double s = 0.0;
    for (double v : w) s += (v - 1.0) * (v - 1.0);
    return std::sqrt(s);
  };
  if (dist(face) <= radius) return face;

  auto weights = [&](double lambda) {
    // Sum is increasing in mu.
    double lo = dmin - lambda, hi = dmax + lambda * nd;
    std::vector<double> w(n);
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += std::max(0.0, 1.0 + (mid - d[i]) / lambda);
      (s < nd ? lo : hi) = mid;
    }
    for (std::size_t i = 0; i < n; ++i) w[i] = std::max(0.0, 1.0 + (0.5 * (lo + hi) - d[i]) / lambda);
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v *= nd / s;
    return w;
  };
  // Distance to 1 falls as lambda grows; bracket in log space.
  double lo = 1e-12, hi = 1.0;
  while (dist(weights(hi)) > radius) hi *= 2.0;
  for (int it = 0; it < 300; ++it) {
    const double mid = std::sqrt(lo * hi);
    (dist(weights(mid)) > radius ? lo : hi) = mid;
  }
  return weights(hi);
}

// Unbalanced chi-square OT between two unit point masses at distance L:
// min_{p >= 0} p L + tau (p - 1)^2.
inline double unbalanced_delta_closed_form(double L, double tau) {
  const double p = std::max(0.0, 1.0 - L / (2.0 * tau));
  return p * L + tau * (p - 1.0) * (p - 1.0);
}

inline double unbalanced_delta_grid(double L, double tau) {
  auto f = [&](double p) { return p * L + tau * (p - 1.0) * (p - 1.0); };
  double best = f(0.0);
  double arg = 0.0;
  for (int k = 0; k <= 200000; ++k) {
    const double p = 2.0 * k / 200000.0;
    if (f(p) < best) best = f(p), arg = p;
  }
  // Polish with golden section around the grid winner.
  double lo = std::max(0.0, arg - 1e-5), hi = arg + 1e-5;
  for (int it = 0; it < 200; ++it) {
    const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
    if (f(a) < f(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  return std::min(best, f(0.5 * (lo + hi)));
}

// Mann-Whitney count over all positive/negative pairs.
inline double auc_pairs(const std::vector<double>& score, const std::vector<bool>& positive) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < score.size(); ++i) {
    if (!positive[i]) continue;
    for (std::size_t j = 0; j < score.size(); ++j) {
      if (positive[j]) continue;
      pairs += 1.0;
      wins += score[i] > score[j] ? 1.0 : score[i] == score[j] ? 0.5 : 0.0;
    }
  }
  return wins / pairs;
}

inline std::vector<double> random_simplex(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(n);
  for (double& x : v) x = e(rng) + 1e-3;
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= s;
  // Push the rounding residue onto the largest entry so the total is 1.
  const double r = 1.0 - std::accumulate(v.begin(), v.end(), 0.0);
  *std::max_element(v.begin(), v.end()) += r;
  return v;
}

inline std::vector<double> uniform_costs(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> c(count);
  for (double& x : c) x = u(rng);
  return c;
}

// Uniform-mass measure with placeholder 1-D points; for instances where
// only the cost matrix matters.
inline DiscreteMeasure uniform_measure(std::size_t n) {
  return make_measure(std::vector<Point>(n, Point{0.0}));
}

}  // namespace robust_ot::oracle

#endif  // ROBUST_OT_TESTS_ORACLES_HPP_
