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


#include "robust_ot/entropic_ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace robust_ot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// -eps * log(sum_k exp(z_k / eps)) computed stably; z is overwritten.
double soft_min(std::vector<double>& z, double eps) {
  double mx = -kInf;
  for (double v : z) mx = std::max(mx, v);
  double s = 0.0;
  for (double v : z) s += std::exp((v - mx) / eps);
  return -(mx + eps * std::log(s));
}

}  // namespace

OtSolution solve_sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const CostMatrix& cost, double epsilon, int max_iter,
                          double tol) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::kDomainError, "epsilon must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::kDomainError, "tol must be positive");
  if (cost.rows() != mu.size() || cost.cols() != nu.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "cost shape does not match measures");
  }
  const auto& a_full = mu.mass();
  const auto& b_full = nu.mass();
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < a_full.size(); ++i) {
    if (a_full[i] > 0.0) rows.push_back(i);
  }
  for (std::size_t j = 0; j < b_full.size(); ++j) {
    if (b_full[j] > 0.0) cols.push_back(j);
  }
  const std::size_t m = rows.size();
  const std::size_t n = cols.size();
  std::vector<double> a(m), b(n), c(m * n), log_a(m), log_b(n);
  for (std::size_t i = 0; i < m; ++i) {
    a[i] = a_full[rows[i]];
    log_a[i] = std::log(a[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    b[j] = b_full[cols[j]];
    log_b[j] = std::log(b[j]);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] = cost(rows[i], cols[j]);
  }

  std::vector<double> f(m, 0.0), g(n, 0.0), scratch;
  auto update_f = [&](double eps) {
    scratch.resize(n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) scratch[j] = g[j] - c[i * n + j];
      f[i] = eps * log_a[i] + soft_min(scratch, eps);
    }
  };
  auto update_g = [&](double eps) {
    scratch.resize(m);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < m; ++i) scratch[i] = f[i] - c[i * n + j];
      g[j] = eps * log_b[j] + soft_min(scratch, eps);
    }
  };
  auto row_residual = [&](double eps) {
    double res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) r += std::exp((f[i] + g[j] - c[i * n + j]) / eps);
      res += std::abs(r - a[i]);
    }
    return res;
  };

  double eps = std::max(epsilon, std::max(1e-300, *std::max_element(c.begin(), c.end())));
  int iter = 0;
  double residual = kInf;
  while (true) {
    const bool final_stage = eps <= epsilon;
    const double stage_tol = final_stage ? tol : std::max(tol, 1e-6);
    while (iter < max_iter) {
      update_f(eps);
      update_g(eps);
      ++iter;
      if (iter % 5 == 0 || iter == max_iter) {
        residual = row_residual(eps);
        if (residual <= stage_tol) break;
      }
    }
    if (final_stage || iter >= max_iter) {
      if (!final_stage) {
        eps = epsilon;
      }
      residual = row_residual(eps);
      break;
    }
    eps = std::max(epsilon, eps / 2.0);
  }

  // Round onto the transport polytope: scale rows down, scale columns down,
  // then add the rank-one correction for the leftover marginal error.
  std::vector<double> plan(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      plan[i * n + j] = std::exp((f[i] + g[j] - c[i * n + j]) / eps);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r += plan[i * n + j];
    const double s = r > a[i] ? a[i] / r : 1.0;
    for (std::size_t j = 0; j < n; ++j) plan[i * n + j] *= s;
  }
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < m; ++i) col += plan[i * n + j];
    const double s = col > b[j] ? b[j] / col : 1.0;
    for (std::size_t i = 0; i < m; ++i) plan[i * n + j] *= s;
  }
  std::vector<double> err_r(m), err_c(n);
  double err_c_total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r += plan[i * n + j];
    err_r[i] = std::max(0.0, a[i] - r);
  }
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < m; ++i) col += plan[i * n + j];
    err_c[j] = std::max(0.0, b[j] - col);
    err_c_total += err_c[j];
  }
  if (err_c_total > 0.0) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) plan[i * n + j] += err_r[i] * err_c[j] / err_c_total;
    }
  }

  OtSolution sol;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = plan[i * n + j];
      if (p > 0.0) {
        sol.coupling.push_back({rows[i], cols[j], p});
        sol.value += p * c[i * n + j];
      }
    }
  }

  sol.potential_x.assign(mu.size(), 0.0);
  sol.potential_y.assign(nu.size(), 0.0);
  std::vector<char> row_active(mu.size(), 0), col_active(nu.size(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    sol.potential_x[rows[i]] = f[i];
    row_active[rows[i]] = 1;
  }
  for (std::size_t j = 0; j < n; ++j) {
    sol.potential_y[cols[j]] = -g[j];
    col_active[cols[j]] = 1;
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (col_active[j]) continue;
    double best = -kInf;
    for (std::size_t i : rows) best = std::max(best, sol.potential_x[i] - cost(i, j));
    sol.potential_y[j] = best;
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (row_active[i]) continue;
    double best = kInf;
    for (std::size_t j = 0; j < nu.size(); ++j) {
      best = std::min(best, cost(i, j) + sol.potential_y[j]);
    }
    sol.potential_x[i] = best;
  }
  double shift = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) shift += a_full[i] * sol.potential_x[i];
  for (double& p : sol.potential_x) p -= shift;
  for (double& p : sol.potential_y) p -= shift;

  sol.gap = residual;
  sol.converged = residual <= tol;
  return sol;
}

}  // namespace robust_ot
