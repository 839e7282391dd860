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


#include "robust_ot/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "cutting_plane_master.hpp"
#include "robust_ot/exact_ot.hpp"
#include "robust_ot/weight_update.hpp"

namespace robust_ot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_uniform(const DiscreteMeasure& mu, const char* which) {
  if (!mu.is_uniform()) {
    throw Error(ErrorKind::kNonUniformInput,
                std::string(which) + " must carry uniform mass for the robust solver");
  }
}

double norm_to_ones(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += (v - 1.0) * (v - 1.0);
  return std::sqrt(s);
}

// Pulls a nearly feasible weight vector back into the chi-square set.
std::vector<double> make_feasible(std::vector<double> w, double radius) {
  const double n = static_cast<double>(w.size());
  double total = 0.0;
  for (double& v : w) {
    v = std::max(0.0, v);
    total += v;
  }
  if (!(total > 0.0)) return std::vector<double>(w.size(), 1.0);
  for (double& v : w) v *= n / total;
  const double dist = norm_to_ones(w);
  if (dist > radius) {
    const double shrink = radius / dist;
    for (double& v : w) v = 1.0 + (v - 1.0) * shrink;
  }
  return w;
}

struct Side {
  std::size_t n = 0;
  double rho = 0.0;
  double radius = 0.0;
  bool free = false;
};

Side make_side(std::size_t n, double rho) {
  Side s;
  s.n = n;
  s.rho = rho;
  s.radius = ball_radius(rho, n);
  s.free = n > 1 && s.radius > 1e-12;
  return s;
}

struct Evaluation {
  double value = 0.0;
  std::vector<double> phi;
  std::vector<double> psi;
  std::vector<CouplingEntry> coupling;
};

class Evaluator {
 public:
  explicit Evaluator(const CostMatrix& cost) : cost_(cost) {}

  // Exact OT between w_x / m and w_y / n with zero-weight atoms dropped.
  Evaluation operator()(const std::vector<double>& wx, const std::vector<double>& wy) {
    const std::size_t m = wx.size();
    const std::size_t n = wy.size();
    rows_.clear();
    cols_.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (wx[i] > 0.0) rows_.push_back(i);
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (wy[j] > 0.0) cols_.push_back(j);
    }
    a_.resize(rows_.size());
    b_.resize(cols_.size());
    double ta = 0.0, tb = 0.0;
    for (std::size_t r = 0; r < rows_.size(); ++r) ta += a_[r] = wx[rows_[r]] / static_cast<double>(m);
    for (std::size_t c = 0; c < cols_.size(); ++c) tb += b_[c] = wy[cols_[c]] / static_cast<double>(n);
    for (double& v : b_) v *= ta / tb;
    sub_.resize(rows_.size() * cols_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      for (std::size_t c = 0; c < cols_.size(); ++c) {
        sub_[r * cols_.size() + c] = cost_(rows_[r], cols_[c]);
      }
    }
    NetworkSimplex::Result res = simplex_.solve(a_, b_, sub_);

    Evaluation ev;
    ev.value = res.value;
    ev.phi.assign(m, 0.0);
    ev.psi.assign(n, 0.0);
    std::vector<char> row_on(m, 0), col_on(n, 0);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      ev.phi[rows_[r]] = res.phi[r];
      row_on[rows_[r]] = 1;
    }
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      ev.psi[cols_[c]] = res.psi[c];
      col_on[cols_[c]] = 1;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (col_on[j]) continue;
      double best = -kInf;
      for (std::size_t i : rows_) best = std::max(best, ev.phi[i] - cost_(i, j));
      ev.psi[j] = best;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (row_on[i]) continue;
      double best = kInf;
      for (std::size_t j = 0; j < n; ++j) best = std::min(best, cost_(i, j) + ev.psi[j]);
      ev.phi[i] = best;
    }
    ev.coupling.reserve(res.coupling.size());
    for (const CouplingEntry& e : res.coupling) {
      ev.coupling.push_back({rows_[e.i], cols_[e.j], e.mass});
    }
    return ev;
  }

 private:
  const CostMatrix& cost_;
  NetworkSimplex simplex_;
  std::vector<std::size_t> rows_, cols_;
  std::vector<double> a_, b_, sub_;
};

internal::Cut make_cut(const Evaluation& ev, const Side& sx, const Side& sy) {
  internal::Cut cut;
  const double m = static_cast<double>(sx.n);
  const double n = static_cast<double>(sy.n);
  if (sx.free) {
    cut.gx.resize(sx.n);
    for (std::size_t i = 0; i < sx.n; ++i) cut.gx[i] = ev.phi[i] / m;
  } else {
    for (double p : ev.phi) cut.c += p / m;
  }
  if (sy.free) {
    cut.gy.resize(sy.n);
    for (std::size_t j = 0; j < sy.n; ++j) cut.gy[j] = -ev.psi[j] / n;
  } else {
    for (double p : ev.psi) cut.c -= p / n;
  }
  return cut;
}

bool same_cut(const internal::Cut& a, const internal::Cut& b) {
  auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-14 * std::max({1.0, std::abs(x), std::abs(y)});
  };
  if (!close(a.c, b.c)) return false;
  for (std::size_t i = 0; i < a.gx.size(); ++i) {
    if (!close(a.gx[i], b.gx[i])) return false;
  }
  for (std::size_t j = 0; j < a.gy.size(); ++j) {
    if (!close(a.gy[j], b.gy[j])) return false;
  }
  return true;
}

// min over the weight sets of sum_k theta_k l_k: a certified lower bound.
double model_lower_bound(const std::vector<internal::Cut>& cuts,
                         const std::vector<double>& theta, const Side& sx, const Side& sy) {
  std::vector<double> dx(sx.free ? sx.n : 0, 0.0), dy(sy.free ? sy.n : 0, 0.0);
  double c = 0.0;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const double th = theta[k];
    if (th == 0.0) continue;
    c += th * cuts[k].c;
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += th * cuts[k].gx[i];
    for (std::size_t j = 0; j < dy.size(); ++j) dy[j] += th * cuts[k].gy[j];
  }
  double bound = c;
  if (sx.free) {
    const WeightVector w = solve_weight_socp({dx, sx.rho, Sense::kMinimize});
    bound += weight_objective(dx, w.w);
  }
  if (sy.free) {
    const WeightVector w = solve_weight_socp({dy, sy.rho, Sense::kMinimize});
    bound += weight_objective(dy, w.w);
  }
  return bound;
}

std::vector<double> subgradient_step(const std::vector<double>& w, const std::vector<double>& g,
                                     const Side& side, int t) {
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
  double norm = 0.0;
  for (double v : g) norm += (v - mean) * (v - mean);
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) return w;
  const double step = side.radius / std::sqrt(static_cast<double>(t + 1));
  std::vector<double> next(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) next[i] = w[i] - step * (g[i] - mean) / norm;
  return project_weights(next, side.rho).w;
}

}  // namespace

RobustSolution solve_robust(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            const CostMatrix& cost, const RobustParams& params) {
  if (cost.rows() != mu.size() || cost.cols() != nu.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "cost shape does not match measures");
  }
  if (!(params.rho1 >= 0.0) || !(params.rho2 >= 0.0)) {
    throw Error(ErrorKind::kDomainError, "rho1 and rho2 must be >= 0");
  }
  if (params.max_outer_iter < 1) throw Error(ErrorKind::kDomainError, "max_outer_iter must be >= 1");
  if (!(params.rel_tol > 0.0)) throw Error(ErrorKind::kDomainError, "rel_tol must be positive");
  require_uniform(mu, "mu");
  require_uniform(nu, "nu");

  const Side sx = make_side(mu.size(), params.rho1);
  const Side sy = make_side(nu.size(), params.rho2);
  Evaluator evaluate(cost);

  RobustSolution sol;
  sol.w_x = WeightVector::Ones(sx.n, sx.rho);
  sol.w_y = WeightVector::Ones(sy.n, sy.rho);
  double upper = kInf;
  double lower = -kInf;
  std::vector<internal::Cut> cuts;

  auto record = [&](const std::vector<double>& wx, const std::vector<double>& wy) {
    Evaluation ev = evaluate(wx, wy);
    if (ev.value < upper) {
      upper = ev.value;
      sol.w_x.w = wx;
      sol.w_y.w = wy;
      sol.coupling = ev.coupling;
    }
    internal::Cut cut = make_cut(ev, sx, sy);
    // Each cut on its own is minimized in closed form; cheap bound.
    lower = std::max(lower, model_lower_bound({cut}, {1.0}, sx, sy));
    bool fresh = true;
    for (const internal::Cut& c : cuts) {
      if (same_cut(c, cut)) {
        fresh = false;
        break;
      }
    }
    if (fresh) cuts.push_back(std::move(cut));
    return ev;
  };
  auto done = [&]() { return upper - lower <= params.rel_tol * std::max(1.0, upper); };

  std::vector<double> rx(sx.n, 1.0), ry(sy.n, 1.0);
  Evaluation rule_eval = record(rx, ry);
  if (params.initial_wx || params.initial_wy) {
    std::vector<double> wx = rx, wy = ry;
    if (params.initial_wx && sx.free) {
      if (params.initial_wx->size() != sx.n) throw Error(ErrorKind::kLengthMismatch, "initial_wx");
      wx = make_feasible(*params.initial_wx, sx.radius);
    }
    if (params.initial_wy && sy.free) {
      if (params.initial_wy->size() != sy.n) throw Error(ErrorKind::kLengthMismatch, "initial_wy");
      wy = make_feasible(*params.initial_wy, sy.radius);
    }
    Evaluation ev = record(wx, wy);
    if (ev.value <= rule_eval.value) {
      rx = wx;
      ry = wy;
      rule_eval = std::move(ev);
    }
  }
  sol.trace.push_back(upper);
  int iter = 1;
  int rule_steps = 0;
  bool converged = upper <= 0.0 || (!sx.free && !sy.free) || done();
  if (upper <= 0.0) lower = 0.0;
  if (!sx.free && !sy.free) lower = upper;

  while (!converged && iter < params.max_outer_iter) {
    std::vector<double> wx, wy;
    const bool master_step = iter % 2 == 1;
    if (master_step) {
      std::vector<double> x0, y0;
      if (sx.free) {
        x0.resize(sx.n);
        for (std::size_t i = 0; i < sx.n; ++i) x0[i] = 0.5 + 0.5 * sol.w_x.w[i];
      }
      if (sy.free) {
        y0.resize(sy.n);
        for (std::size_t j = 0; j < sy.n; ++j) y0[j] = 0.5 + 0.5 * sol.w_y.w[j];
      }
      const double target = 0.1 * params.rel_tol * std::max(1.0, upper);
      internal::MasterResult master = internal::solve_master(
          cuts, x0, y0, sx.radius, sy.radius, target,
          [&](const std::vector<double>& theta) { return model_lower_bound(cuts, theta, sx, sy); });
      lower = std::max(lower, master.lower_bound);
      if (done()) {
        sol.trace.push_back(upper);
        ++iter;
        converged = true;
        break;
      }
      wx = sx.free ? make_feasible(master.x, sx.radius) : std::vector<double>(sx.n, 1.0);
      wy = sy.free ? make_feasible(master.y, sy.radius) : std::vector<double>(sy.n, 1.0);
    } else {
      const int t = rule_steps++;
      switch (params.update_rule) {
        case UpdateRule::kAveraged:
        case UpdateRule::kDirect: {
          const double eta = params.update_rule == UpdateRule::kDirect
                                 ? 1.0
                                 : 2.0 / (static_cast<double>(t) + 2.0);
          if (sx.free) {
            const WeightVector s = solve_weight_socp({rule_eval.phi, sx.rho, Sense::kMinimize});
            for (std::size_t i = 0; i < sx.n; ++i) rx[i] = (1.0 - eta) * rx[i] + eta * s.w[i];
          }
          if (sy.free) {
            const WeightVector s = solve_weight_socp({rule_eval.psi, sy.rho, Sense::kMaximize});
            for (std::size_t j = 0; j < sy.n; ++j) ry[j] = (1.0 - eta) * ry[j] + eta * s.w[j];
          }
          break;
        }
        case UpdateRule::kSubgradient: {
          if (sx.free) rx = subgradient_step(rx, rule_eval.phi, sx, t);
          if (sy.free) {
            std::vector<double> g(sy.n);
            for (std::size_t j = 0; j < sy.n; ++j) g[j] = -rule_eval.psi[j];
            ry = subgradient_step(ry, g, sy, t);
          }
          break;
        }
      }
      if (sx.free) rx = make_feasible(rx, sx.radius);
      if (sy.free) ry = make_feasible(ry, sy.radius);
      wx = rx;
      wy = ry;
    }
    Evaluation ev = record(wx, wy);
    if (!master_step) rule_eval = std::move(ev);
    sol.trace.push_back(upper);
    ++iter;
    converged = done();
  }

  sol.value = upper;
  sol.lower_bound = std::min(std::max(lower, 0.0), upper);
  sol.iterations = iter;
  sol.converged = converged;
  return sol;
}

RobustSolution solve_robust_one_sided(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                      const CostMatrix& cost, double rho) {
  RobustParams params;
  params.rho1 = rho;
  params.rho2 = 0.0;
  return solve_robust(mu, nu, cost, params);
}

namespace {

// Compositions of `units` into `parts` non-negative integers, filtered by the
// ball ||parts * k / units - 1|| <= radius.
std::vector<std::vector<double>> grid_masses(std::size_t parts, long units, double radius) {
  std::vector<std::vector<double>> out;
  std::vector<long> k(parts, 0);
  const double n = static_cast<double>(parts);
  const double u = static_cast<double>(units);
  const double r2 = radius * radius * (1.0 + 1e-12) + 1e-15;
  auto rec = [&](auto&& self, std::size_t idx, long left, double dist2) -> void {
    if (dist2 > r2) return;
    if (idx + 1 == parts) {
      k[idx] = left;
      const double w = n * static_cast<double>(left) / u;
      if (dist2 + (w - 1.0) * (w - 1.0) > r2) return;
      std::vector<double> a(parts);
      for (std::size_t i = 0; i < parts; ++i) a[i] = static_cast<double>(k[i]) / u;
      out.push_back(std::move(a));
      return;
    }
    for (long v = 0; v <= left; ++v) {
      k[idx] = v;
      const double w = n * static_cast<double>(v) / u;
      self(self, idx + 1, left - v, dist2 + (w - 1.0) * (w - 1.0));
    }
  };
  rec(rec, 0, units, 0.0);
  out.push_back(std::vector<double>(parts, 1.0 / n));
  return out;
}

// Mass vector a (sum 1) nudged back into the ball ||n a - 1|| <= radius.
bool repair(std::vector<double>& a, double radius) {
  const double n = static_cast<double>(a.size());
  double d2 = 0.0;
  for (double v : a) {
    if (v < 0.0) return false;
    d2 += (n * v - 1.0) * (n * v - 1.0);
  }
  const double d = std::sqrt(d2);
  if (d > radius) {
    const double s = radius / d;
    for (double& v : a) v = (1.0 + (n * v - 1.0) * s) / n;
  }
  return true;
}

}  // namespace

double brute_force_robust(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const CostMatrix& cost, double rho1, double rho2,
                          double grid_resolution) {
  if (mu.size() > 4 || nu.size() > 4) {
    throw Error(ErrorKind::kInstanceTooLarge, "grid oracle supports at most 4 atoms per side");
  }
  if (cost.rows() != mu.size() || cost.cols() != nu.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "cost shape does not match measures");
  }
  if (!(grid_resolution > 0.0)) throw Error(ErrorKind::kDomainError, "resolution must be positive");
  if (!(rho1 >= 0.0) || !(rho2 >= 0.0)) throw Error(ErrorKind::kDomainError, "rho must be >= 0");
  require_uniform(mu, "mu");
  require_uniform(nu, "nu");

  const std::size_t m = mu.size();
  const std::size_t n = nu.size();
  const Side sx = make_side(m, rho1);
  const Side sy = make_side(n, rho2);
  const std::vector<double>& c = cost.entries();
  NetworkSimplex simplex;

  // Coarsen the starting grid until the pair count stays manageable.
  long units = std::max(1L, std::lround(1.0 / grid_resolution));
  std::vector<std::vector<double>> gx, gy;
  while (true) {
    gx = sx.free ? grid_masses(m, units, sx.radius)
                 : std::vector<std::vector<double>>{std::vector<double>(m, 1.0 / m)};
    gy = sy.free ? grid_masses(n, units, sy.radius)
                 : std::vector<std::vector<double>>{std::vector<double>(n, 1.0 / n)};
    if (gx.size() * gy.size() <= 200000 || units <= 2) break;
    units = (units + 1) / 2;
  }

  struct Pair {
    double value;
    std::size_t ix, iy;
  };
  std::vector<Pair> pairs;
  pairs.reserve(gx.size() * gy.size());
  for (std::size_t ix = 0; ix < gx.size(); ++ix) {
    for (std::size_t iy = 0; iy < gy.size(); ++iy) {
      pairs.push_back({simplex.solve_value(gx[ix], gy[iy], c), ix, iy});
    }
  }
  const std::size_t keep = std::min<std::size_t>(4, pairs.size());
  std::partial_sort(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(keep), pairs.end(),
                    [](const Pair& p, const Pair& q) { return p.value < q.value; });

  // Local refinement: every combination of -1/0/+1 steps in the free
  // coordinates of both sides (the last coordinate of each side absorbs the
  // mass change), repeated until no neighbour improves, then the step halves.
  const std::size_t fx = sx.free ? m - 1 : 0;
  const std::size_t fy = sy.free ? n - 1 : 0;
  std::size_t neighbours = 1;
  for (std::size_t k = 0; k < fx + fy; ++k) neighbours *= 3;
  double best = pairs.front().value;
  std::vector<double> ta(m), tb(n), dir(fx + fy);
  constexpr int kRandomPolls = 48;
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> gauss;
  for (std::size_t s = 0; s < keep; ++s) {
    std::vector<double> a = gx[pairs[s].ix];
    std::vector<double> b = gy[pairs[s].iy];
    double cur = pairs[s].value;
    double delta = 1.0 / static_cast<double>(units);
    while (delta >= 1e-9) {
      double cand = cur;
      std::vector<double> best_a, best_b;
      for (std::size_t code = 1; code < neighbours; ++code) {
        ta = a;
        tb = b;
        std::size_t rest = code;
        for (std::size_t k = 0; k < fx; ++k, rest /= 3) {
          const double d = (static_cast<double>(rest % 3) - 1.0) * delta;
          ta[k] += d;
          ta[m - 1] -= d;
        }
        for (std::size_t k = 0; k < fy; ++k, rest /= 3) {
          const double d = (static_cast<double>(rest % 3) - 1.0) * delta;
          tb[k] += d;
          tb[n - 1] -= d;
        }
        if (!repair(ta, sx.radius) || !repair(tb, sy.radius)) continue;
        const double v = simplex.solve_value(ta, tb, c);
        if (v < cand - 1e-15) {
          cand = v;
          best_a = ta;
          best_b = tb;
        }
      }
      // Random poll directions: kinks of the OT value can run along directions
      // the coordinate box never tries.
      for (int r = 0; r < kRandomPolls; ++r) {
        for (std::size_t k = 0; k < fx + fy; ++k) dir[k] = gauss(rng);
        double scale = 0.0;
        for (std::size_t k = 0; k < fx + fy; ++k) scale = std::max(scale, std::abs(dir[k]));
        if (!(scale > 0.0)) continue;
        ta = a;
        tb = b;
        for (std::size_t k = 0; k < fx; ++k) {
          const double d = dir[k] / scale * delta;
          ta[k] += d;
          ta[m - 1] -= d;
        }
        for (std::size_t k = 0; k < fy; ++k) {
          const double d = dir[fx + k] / scale * delta;
          tb[k] += d;
          tb[n - 1] -= d;
        }
        if (!repair(ta, sx.radius) || !repair(tb, sy.radius)) continue;
        const double v = simplex.solve_value(ta, tb, c);
        if (v < cand - 1e-15) {
          cand = v;
          best_a = ta;
          best_b = tb;
        }
      }
      if (best_a.empty()) {
        delta *= 0.5;
      } else {
        a = best_a;
        b = best_b;
        cur = cand;
      }
    }
    best = std::min(best, cur);
  }
  return best;
}

}  // namespace robust_ot
