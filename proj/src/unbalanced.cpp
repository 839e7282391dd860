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


#include "robust_ot/unbalanced.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace robust_ot {

double r_star(double x) {
  if (x > 0.5) return std::numeric_limits<double>::infinity();
  return 1.0 - std::sqrt(1.0 - 2.0 * x);
}

double r_star_numeric_check(double x) {
  if (!(x <= 0.5 - 1e-6)) throw Error(ErrorKind::kDomainError, "requires x <= 1/2 - 1e-6");
  auto h = [x](double u) {
    const double s = std::exp(u);
    return (x - 0.5 * (s - 1.0) * (s - 1.0)) / s;
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(1e-12);
  double hi = std::log(1e12);
  double u1 = hi - inv_phi * (hi - lo);
  double u2 = lo + inv_phi * (hi - lo);
  double h1 = h(u1);
  double h2 = h(u2);
  for (int it = 0; it < 300 && hi - lo > 1e-14; ++it) {
    if (h1 < h2) {
      lo = u1;
      u1 = u2;
      h1 = h2;
      u2 = lo + inv_phi * (hi - lo);
      h2 = h(u2);
    } else {
      hi = u2;
      u2 = u1;
      h2 = h1;
      u1 = hi - inv_phi * (hi - lo);
      h1 = h(u1);
    }
  }
  return std::max({h1, h2, h(0.5 * (lo + hi))});
}

UnbalancedTerms unbalanced_objective(const std::vector<double>& plan, const DiscreteMeasure& mu,
                                     const DiscreteMeasure& nu, const CostMatrix& cost,
                                     double tau) {
  const std::size_t m = mu.size();
  const std::size_t n = nu.size();
  UnbalancedTerms terms;
  std::vector<double> r(m, 0.0), c(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = plan[i * n + j];
      terms.transport += cost(i, j) * p;
      r[i] += p;
      c[j] += p;
    }
  }
  auto chi2 = [tau](const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (q[i] > 0.0) {
        s += (p[i] - q[i]) * (p[i] - q[i]) / (2.0 * q[i]);
      } else if (p[i] > 0.0) {
        return std::numeric_limits<double>::infinity();
      }
    }
    return tau * s;
  };
  terms.penalty_x = chi2(r, mu.mass());
  terms.penalty_y = chi2(c, nu.mass());
  return terms;
}

UnbalancedSolution solve_unbalanced_chi2(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                         const CostMatrix& cost, double tau, int max_iter,
                                         double tol) {
  if (!(tau > 0.0)) throw Error(ErrorKind::kDomainError, "tau must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::kDomainError, "tol must be positive");
  if (cost.rows() != mu.size() || cost.cols() != nu.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "cost shape does not match measures");
  }
  const std::size_t m = mu.size();
  const std::size_t n = nu.size();
  const auto& a = mu.mass();
  const auto& b = nu.mass();
  std::vector<char> live(m * n, 0);
  double min_a = std::numeric_limits<double>::infinity();
  double min_b = min_a;
  std::size_t live_rows = 0, live_cols = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i] > 0.0) {
      min_a = std::min(min_a, a[i]);
      ++live_rows;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (b[j] > 0.0) {
      min_b = std::min(min_b, b[j]);
      ++live_cols;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) live[i * n + j] = a[i] > 0.0 && b[j] > 0.0;
  }
  const double lip = tau * (static_cast<double>(live_cols) / min_a +
                            static_cast<double>(live_rows) / min_b);

  std::vector<double> r(m), c(n);
  auto gradient = [&](const std::vector<double>& p, std::vector<double>& g) {
    std::fill(r.begin(), r.end(), 0.0);
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        r[i] += p[i * n + j];
        c[j] += p[i * n + j];
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t e = i * n + j;
        g[e] = live[e] ? cost(i, j) + tau * (r[i] - a[i]) / a[i] + tau * (c[j] - b[j]) / b[j]
                       : 0.0;
      }
    }
  };
  auto project_step = [&](const std::vector<double>& p, const std::vector<double>& g,
                          std::vector<double>& out) {
    for (std::size_t e = 0; e < p.size(); ++e) {
      out[e] = live[e] ? std::max(0.0, p[e] - g[e] / lip) : 0.0;
    }
  };

  // Start from the independent coupling, which has zero marginal penalty.
  std::vector<double> x(m * n), y, z(m * n), g(m * n), prev;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) x[i * n + j] = a[i] * b[j];
  }
  y = x;
  double t = 1.0;
  UnbalancedSolution sol;
  sol.rows = m;
  sol.cols = n;

  auto mapping_norm = [&](const std::vector<double>& p) {
    gradient(p, g);
    project_step(p, g, z);
    double s = 0.0;
    for (std::size_t e = 0; e < p.size(); ++e) s += (p[e] - z[e]) * (p[e] - z[e]);
    return lip * std::sqrt(s);
  };

  int it = 0;
  double residual = mapping_norm(x);
  while (residual > tol && it < max_iter) {
    gradient(y, g);
    project_step(y, g, z);
    prev = x;
    x = z;
    double align = 0.0;
    for (std::size_t e = 0; e < x.size(); ++e) align += (y[e] - x[e]) * (x[e] - prev[e]);
    if (align > 0.0) {
      // Momentum points uphill: restart.
      y = x;
      t = 1.0;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      for (std::size_t e = 0; e < x.size(); ++e) {
        y[e] = x[e] + (t - 1.0) / t_next * (x[e] - prev[e]);
      }
      t = t_next;
    }
    ++it;
    if (it % 10 == 0) residual = mapping_norm(x);
  }
  residual = mapping_norm(x);

  const UnbalancedTerms terms = unbalanced_objective(x, mu, nu, cost, tau);
  sol.coupling = std::move(x);
  sol.transport_cost = terms.transport;
  sol.marginal_penalty_x = terms.penalty_x;
  sol.marginal_penalty_y = terms.penalty_y;
  sol.value = terms.total();
  sol.kkt_residual = residual;
  sol.iterations = it;
  sol.converged = residual <= tol;
  return sol;
}

}  // namespace robust_ot
