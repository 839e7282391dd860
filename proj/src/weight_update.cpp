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


#include "robust_ot/weight_update.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace robust_ot {

namespace {

double dist_to_ones(std::span<const double> w) {
  double s = 0.0;
  for (double v : w) s += (v - 1.0) * (v - 1.0);
  return std::sqrt(s);
}

void renormalize(std::vector<double>& w) {
  double s = 0.0;
  for (double& v : w) {
    v = std::max(0.0, v);
    s += v;
  }
  const double scale = static_cast<double>(w.size()) / s;
  for (double& v : w) v *= scale;
}

// Minimizer of u^T w on the simplex with the ball multiplier fixed at lambda:
// w_i = max(0, 1 - u_i / lambda + shift), shift chosen so sum(w) = n.
std::vector<double> weights_for_lambda(std::span<const double> u, double lambda) {
  std::vector<double> y(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) y[i] = 1.0 - u[i] / lambda;
  return project_simplex(y, static_cast<double>(u.size()));
}

std::vector<double> socp_by_bisection(std::span<const double> u, double radius) {
  double hi = 1.0;
  for (int k = 0; k < 200 && dist_to_ones(weights_for_lambda(u, hi)) > radius; ++k) hi *= 2.0;
  double lo = 0.0;
  for (int k = 0; k < 200 && hi - lo > 1e-12 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0) break;
    if (dist_to_ones(weights_for_lambda(u, mid)) > radius) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return weights_for_lambda(u, hi);
}

std::vector<double> socp_minimize(std::span<const double> u, double radius) {
  const std::size_t n = u.size();
  const double nd = static_cast<double>(n);
  std::vector<double> w(n, 1.0);
  if (radius <= 0.0 || n == 1) return w;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return u[x] < u[y]; });

  // Slack ball: uniform mass on the argmin face is optimal and closest to 1.
  std::size_t ties = 1;
  while (ties < n && u[order[ties]] == u[order[0]]) ++ties;
  const double r2 = radius * radius;
  const double face_dist2 = (nd - ties) * nd / static_cast<double>(ties);
  if (face_dist2 <= r2 * (1.0 + 1e-14)) {
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t k = 0; k < ties; ++k) w[order[k]] = nd / static_cast<double>(ties);
    return w;
  }

  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t a = 1; a <= n; ++a) {
    const double x = u[order[a - 1]];
    const double delta = x - mean;
    mean += delta / static_cast<double>(a);
    m2 += delta * (x - mean);
    const double ad = static_cast<double>(a);
    const double denom = r2 - (nd - ad) * nd / ad;
    if (denom <= 0.0 || m2 <= 0.0) continue;
    const double lambda = std::sqrt(m2 / denom);
    const double base = nd / ad;
    const double slack = 1e-12 * base;
    const double last = base + (mean - x) / lambda;
    if (last < -slack) continue;
    if (a < n && base + (mean - u[order[a]]) / lambda > slack) continue;
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t k = 0; k < a; ++k) {
      w[order[k]] = std::max(0.0, base + (mean - u[order[k]]) / lambda);
    }
    renormalize(w);
    return w;
  }
  return socp_by_bisection(u, radius);
}

}  // namespace

std::vector<double> project_simplex(std::span<const double> v, double total) {
  const std::size_t n = v.size();
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cum += s[k];
    const double t = (cum - total) / static_cast<double>(k + 1);
    if (k + 1 == n || s[k + 1] <= t) {
      theta = t;
      break;
    }
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::max(0.0, v[i] - theta);
  return w;
}

double weight_objective(std::span<const double> d, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * w[i];
  return s;
}

WeightVector solve_weight_socp(const WeightSubproblem& p) {
  if (p.d.empty()) throw Error(ErrorKind::kEmptyInput, "empty potential vector");
  if (!(p.rho >= 0.0)) throw Error(ErrorKind::kDomainError, "rho must be >= 0");
  std::vector<double> u = p.d;
  for (double v : u) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kDomainError, "non-finite potential");
  }
  if (p.sense == Sense::kMaximize) {
    for (double& v : u) v = -v;
  }
  return WeightVector{socp_minimize(u, ball_radius(p.rho, u.size())), p.rho};
}

WeightVector project_weights(std::span<const double> v, double rho) {
  if (v.empty()) throw Error(ErrorKind::kEmptyInput, "empty weight vector");
  const std::size_t n = v.size();
  const double nd = static_cast<double>(n);
  const double radius = ball_radius(rho, n);
  auto at = [&](double lambda) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = (v[i] + lambda) / (1.0 + lambda);
    return project_simplex(y, nd);
  };
  std::vector<double> w = at(0.0);
  if (dist_to_ones(w) <= radius) return WeightVector{std::move(w), rho};
  if (radius <= 0.0) return WeightVector::Ones(n, rho);
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 200 && dist_to_ones(at(hi)) > radius; ++k) hi *= 2.0;
  for (int k = 0; k < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++k) {
    const double mid = 0.5 * (lo + hi);
    if (dist_to_ones(at(mid)) > radius) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return WeightVector{at(hi), rho};
}

double penalized_objective(std::span<const double> w, std::span<const double> d, double rho,
                           double lambda) {
  const double n = static_cast<double>(w.size());
  const double spread = dist_to_ones(w);
  return weight_objective(d, w) / n + lambda * std::max(spread * spread / n - 2.0 * rho, 0.0);
}

PenalizedStepResult penalized_weight_step(const WeightVector& w, std::span<const double> d,
                                          double rho, double lambda, double step) {
  if (!(lambda > 0.0) || !(step > 0.0)) {
    throw Error(ErrorKind::kDomainError, "lambda and step must be positive");
  }
  if (d.size() != w.size()) throw Error(ErrorKind::kLengthMismatch, "d and w differ in length");
  const std::size_t n = w.size();
  const double nd = static_cast<double>(n);
  const double current = penalized_objective(w.w, d, rho, lambda);
  const double spread = dist_to_ones(w.w);
  const bool penalty_active = spread * spread / nd - 2.0 * rho > 0.0;

  std::vector<double> grad(n);
  for (std::size_t i = 0; i < n; ++i) {
    grad[i] = d[i] / nd + (penalty_active ? lambda * 2.0 * (w.w[i] - 1.0) / nd : 0.0);
  }
  double t = step;
  for (int attempt = 0; attempt <= 30; ++attempt, t *= 0.5) {
    std::vector<double> next(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = std::max(0.0, w.w[i] - t * grad[i]);
      total += next[i];
    }
    if (!(total > 0.0)) continue;
    for (double& v : next) v *= nd / total;
    const double value = penalized_objective(next, d, rho, lambda);
    if (value <= current) {
      return PenalizedStepResult{WeightVector{std::move(next), rho}, value, false};
    }
  }
  return PenalizedStepResult{w, current, true};
}

WeightVector brute_force_weights(std::span<const double> d, double rho, double resolution,
                                 Sense sense) {
  const std::size_t n = d.size();
  if (n == 0) throw Error(ErrorKind::kEmptyInput, "empty potential vector");
  if (n > 4) throw Error(ErrorKind::kInstanceTooLarge, "grid oracle supports n <= 4");
  if (!(resolution > 0.0)) throw Error(ErrorKind::kDomainError, "resolution must be positive");
  if (n == 1) return WeightVector::Ones(1, rho);

  std::vector<double> u(d.begin(), d.end());
  if (sense == Sense::kMaximize) {
    for (double& v : u) v = -v;
  }
  const double nd = static_cast<double>(n);
  const long units = std::max(1L, std::lround(nd / resolution));
  const double h = nd / static_cast<double>(units);
  const double r2 = 2.0 * rho * nd;
  const double feas_tol = 1e-12 * std::max(1.0, r2);

  double best_obj = std::numeric_limits<double>::infinity();
  double best_norm = std::numeric_limits<double>::infinity();
  std::vector<long> best_k;
  std::vector<long> k(n, 0);

  auto consider = [&](double obj, double norm2) {
    const double tol = 1e-12 * std::max(1.0, std::abs(obj));
    if (obj < best_obj - tol || (obj <= best_obj + tol && norm2 < best_norm)) {
      best_obj = obj;
      best_norm = norm2;
      best_k = k;
    }
  };

  // Resolve the last two coordinates given the first n - 2: their sum is
  // fixed, so the objective is linear in k[n-2] and only the ends of the
  // feasible range (or the middle, when the slope vanishes) can win.
  auto finish = [&](long remaining, double partial_obj, double partial_norm2) {
    const double s = static_cast<double>(remaining) * h;
    auto eval = [&](long kk) {
      k[n - 2] = kk;
      k[n - 1] = remaining - kk;
      const double x = static_cast<double>(kk) * h;
      const double y = static_cast<double>(remaining - kk) * h;
      const double norm2 = partial_norm2 + (x - 1.0) * (x - 1.0) + (y - 1.0) * (y - 1.0);
      if (norm2 > r2 + feas_tol) return;
      consider(partial_obj + u[n - 2] * x + u[n - 1] * y, norm2);
    };
    // 2x^2 - 2 s x + (s - 1)^2 + 1 + partial - r2 <= 0
    const double cc = (s - 1.0) * (s - 1.0) + 1.0 + partial_norm2 - r2;
    const double disc = 4.0 * s * s - 8.0 * cc;
    if (disc < -feas_tol) return;
    const double root = std::sqrt(std::max(0.0, disc));
    const double x_lo = std::max(0.0, (2.0 * s - root) / 4.0);
    const double x_hi = std::min(s, (2.0 * s + root) / 4.0);
    long k_lo = static_cast<long>(std::ceil(x_lo / h - 1e-9));
    long k_hi = static_cast<long>(std::floor(x_hi / h + 1e-9));
    k_lo = std::max(0L, k_lo - 1);
    k_hi = std::min(remaining, k_hi + 1);
    if (k_lo > k_hi) return;
    const double slope = u[n - 2] - u[n - 1];
    if (slope > 0.0) {
      for (long kk = k_lo; kk <= std::min(k_hi, k_lo + 2); ++kk) eval(kk);
    } else if (slope < 0.0) {
      for (long kk = k_hi; kk >= std::max(k_lo, k_hi - 2); --kk) eval(kk);
    } else {
      const long mid = remaining / 2;
      for (long kk = std::max(k_lo, mid - 1); kk <= std::min(k_hi, mid + 1); ++kk) eval(kk);
    }
  };

  std::function<void(std::size_t, long, double, double)> recurse =
      [&](std::size_t idx, long remaining, double obj, double norm2) {
        if (idx == n - 2) {
          finish(remaining, obj, norm2);
          return;
        }
        for (long kk = 0; kk <= remaining; ++kk) {
          const double x = static_cast<double>(kk) * h;
          const double nn = norm2 + (x - 1.0) * (x - 1.0);
          if (nn > r2 + feas_tol) {
            if (x > 1.0) break;
            continue;
          }
          k[idx] = kk;
          recurse(idx + 1, remaining - kk, obj + u[idx] * x, nn);
        }
      };
  recurse(0, units, 0.0, 0.0);

  if (best_k.empty()) return WeightVector::Ones(n, rho);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<double>(best_k[i]) * h;
  return WeightVector{std::move(w), rho};
}

}  // namespace robust_ot
