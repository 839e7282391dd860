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


#include "robust_ot/exact_ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace robust_ot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void NetworkSimplex::run(std::span<const double> a, std::span<const double> b,
                         std::span<const double> cost) {
  m_ = a.size();
  n_ = b.size();
  if (m_ == 0 || n_ == 0) throw Error(ErrorKind::kEmptyInput, "empty marginal");
  if (cost.size() != m_ * n_) {
    throw Error(ErrorKind::kDimensionMismatch, "cost shape does not match marginals");
  }
  node_count_ = static_cast<int>(m_ + n_ + 1);
  root_ = node_count_ - 1;
  real_arcs_ = static_cast<int>(m_ * n_);
  const int arc_count = real_arcs_ + node_count_ - 1;

  double max_cost = 0.0;
  for (double c : cost) max_cost = std::max(max_cost, c);
  // Any root path through real arcs costs less than this, so artificial arcs
  // never re-enter once they leave the tree.
  const double big_m = std::max(1.0, max_cost) * static_cast<double>(node_count_ + 1);
  eps_ = 1e-13 * big_m;

  src_.resize(arc_count);
  tgt_.resize(arc_count);
  arc_cost_.resize(arc_count);
  flow_.assign(arc_count, 0.0);
  in_tree_.assign(arc_count, 0);
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t e = i * n_ + j;
      src_[e] = static_cast<int>(i);
      tgt_[e] = static_cast<int>(m_ + j);
      arc_cost_[e] = cost[e];
    }
  }
  tree_arcs_.clear();
  for (int u = 0; u < root_; ++u) {
    const int e = real_arcs_ + u;
    arc_cost_[e] = big_m;
    const bool source = u < static_cast<int>(m_);
    const double supply = source ? a[u] : -b[u - m_];
    if (supply > 0.0) {
      src_[e] = u;
      tgt_[e] = root_;
      flow_[e] = supply;
    } else {
      // Zero-flow tree arcs must point away from the root.
      src_[e] = root_;
      tgt_[e] = u;
      flow_[e] = -supply;
    }
    in_tree_[e] = 1;
    tree_arcs_.push_back(e);
  }

  block_size_ = std::max(16, static_cast<int>(std::sqrt(static_cast<double>(real_arcs_))));
  next_arc_ = 0;
  pivots_ = 0;
  rebuild_tree();

  const std::int64_t max_pivots = 200LL * real_arcs_ + 10000;
  int entering = -1;
  while (find_entering(&entering)) {
    if (++pivots_ > max_pivots) {
      throw Error(ErrorKind::kSolverStall, "network simplex exceeded its pivot budget");
    }
    pivot(entering);
  }
}

void NetworkSimplex::rebuild_tree() {
  const int nn = node_count_;
  adj_start_.assign(nn + 1, 0);
  for (int e : tree_arcs_) {
    ++adj_start_[src_[e] + 1];
    ++adj_start_[tgt_[e] + 1];
  }
  for (int u = 0; u < nn; ++u) adj_start_[u + 1] += adj_start_[u];
  adj_.resize(adj_start_[nn]);
  std::vector<int>& fill = stack_;
  fill.assign(adj_start_.begin(), adj_start_.end() - 1);
  for (int e : tree_arcs_) {
    adj_[fill[src_[e]]++] = e;
    adj_[fill[tgt_[e]]++] = e;
  }

  parent_.assign(nn, -2);
  pred_.assign(nn, -1);
  depth_.assign(nn, 0);
  up_.assign(nn, 0);
  pot_.assign(nn, 0.0);
  parent_[root_] = -1;
  stack_.clear();
  stack_.push_back(root_);
  while (!stack_.empty()) {
    const int u = stack_.back();
    stack_.pop_back();
    for (int k = adj_start_[u]; k < adj_start_[u + 1]; ++k) {
      const int e = adj_[k];
      const int v = src_[e] == u ? tgt_[e] : src_[e];
      if (parent_[v] != -2) continue;
      parent_[v] = u;
      pred_[v] = e;
      depth_[v] = depth_[u] + 1;
      up_[v] = src_[e] == v;
      pot_[v] = up_[v] ? pot_[u] + arc_cost_[e] : pot_[u] - arc_cost_[e];
      stack_.push_back(v);
    }
  }
}

bool NetworkSimplex::find_entering(int* arc) {
  double best = 0.0;
  int best_arc = -1;
  int checked = 0;
  for (int count = 0; count < real_arcs_; ++count) {
    const int e = next_arc_;
    next_arc_ = next_arc_ + 1 == real_arcs_ ? 0 : next_arc_ + 1;
    if (!in_tree_[e]) {
      const double rc = arc_cost_[e] - pot_[src_[e]] + pot_[tgt_[e]];
      if (rc < best) {
        best = rc;
        best_arc = e;
      }
    }
    if (++checked == block_size_) {
      if (best_arc >= 0 && best < -eps_) break;
      checked = 0;
    }
  }
  if (best_arc < 0 || best >= -eps_) return false;
  *arc = best_arc;
  return true;
}

void NetworkSimplex::pivot(int entering) {
  const int first = src_[entering];
  const int second = tgt_[entering];
  int u = first;
  int v = second;
  while (u != v) {
    if (depth_[u] >= depth_[v]) {
      u = parent_[u];
    } else {
      v = parent_[v];
    }
  }
  const int join = u;

  // Leaving arc: the last blocking arc met when walking the cycle from the
  // join in the direction of the entering arc (strongly feasible rule).
  double delta = kInf;
  int out_node = -1;
  for (int x = first; x != join; x = parent_[x]) {
    const double d = up_[x] ? flow_[pred_[x]] : kInf;
    if (d < delta) {
      delta = d;
      out_node = x;
    }
  }
  for (int x = second; x != join; x = parent_[x]) {
    const double d = up_[x] ? kInf : flow_[pred_[x]];
    if (d <= delta) {
      delta = d;
      out_node = x;
    }
  }
  if (out_node < 0 || delta == kInf) {
    throw Error(ErrorKind::kSolverStall, "unbounded transportation cycle");
  }

  if (delta > 0.0) {
    flow_[entering] += delta;
    for (int x = first; x != join; x = parent_[x]) {
      flow_[pred_[x]] += up_[x] ? -delta : delta;
    }
    for (int x = second; x != join; x = parent_[x]) {
      flow_[pred_[x]] += up_[x] ? delta : -delta;
    }
  }
  const int leaving = pred_[out_node];
  flow_[leaving] = 0.0;
  in_tree_[leaving] = 0;
  in_tree_[entering] = 1;
  *std::find(tree_arcs_.begin(), tree_arcs_.end(), leaving) = entering;
  rebuild_tree();
}

NetworkSimplex::Result NetworkSimplex::solve(std::span<const double> a,
                                             std::span<const double> b,
                                             std::span<const double> cost) {
  run(a, b, cost);
  Result r;
  for (int e = 0; e < real_arcs_; ++e) {
    if (flow_[e] > 0.0) {
      r.coupling.push_back({static_cast<std::size_t>(src_[e]),
                            static_cast<std::size_t>(tgt_[e]) - m_, flow_[e]});
      r.value += arc_cost_[e] * flow_[e];
    }
  }
  r.phi.assign(pot_.begin(), pot_.begin() + static_cast<std::ptrdiff_t>(m_));
  r.psi.assign(pot_.begin() + static_cast<std::ptrdiff_t>(m_),
               pot_.begin() + static_cast<std::ptrdiff_t>(m_ + n_));
  return r;
}

double NetworkSimplex::solve_value(std::span<const double> a, std::span<const double> b,
                                   std::span<const double> cost) {
  run(a, b, cost);
  double value = 0.0;
  for (int e = 0; e < real_arcs_; ++e) {
    if (flow_[e] > 0.0) value += arc_cost_[e] * flow_[e];
  }
  return value;
}

OtSolution solve_exact(std::span<const double> a, std::span<const double> b,
                       const CostMatrix& cost) {
  if (cost.rows() != a.size() || cost.cols() != b.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "cost shape does not match measures");
  }
  NetworkSimplex solver;
  NetworkSimplex::Result r = solver.solve(a, b, cost.entries());
  const std::size_t m = a.size();
  const std::size_t n = b.size();

  // Zero-mass atoms are unconstrained by the LP dual; pin them to their
  // tightest feasible values (c-transforms) instead of leaving big-M offsets.
  for (std::size_t j = 0; j < n; ++j) {
    if (b[j] > 0.0) continue;
    double best = -kInf;
    for (std::size_t i = 0; i < m; ++i) {
      if (a[i] > 0.0) best = std::max(best, r.phi[i] - cost(i, j));
    }
    r.psi[j] = best;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i] > 0.0) continue;
    double best = kInf;
    for (std::size_t j = 0; j < n; ++j) best = std::min(best, cost(i, j) + r.psi[j]);
    r.phi[i] = best;
  }

  double shift = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    shift += a[i] * r.phi[i];
    total += a[i];
  }
  shift /= total;
  for (double& p : r.phi) p -= shift;
  for (double& p : r.psi) p -= shift;

  OtSolution sol;
  sol.value = r.value;
  sol.coupling = std::move(r.coupling);
  sol.potential_x = std::move(r.phi);
  sol.potential_y = std::move(r.psi);
  sol.gap = duality_gap(sol, a, b);
  return sol;
}

OtSolution solve_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                       const CostMatrix& cost) {
  return solve_exact(mu.mass(), nu.mass(), cost);
}

double duality_gap(const OtSolution& sol, std::span<const double> a,
                   std::span<const double> b) {
  double dual = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dual += sol.potential_x[i] * a[i];
  for (std::size_t j = 0; j < b.size(); ++j) dual -= sol.potential_y[j] * b[j];
  return std::abs(sol.value - dual);
}

double duality_gap(const OtSolution& sol, const DiscreteMeasure& mu,
                   const DiscreteMeasure& nu) {
  return duality_gap(sol, mu.mass(), nu.mass());
}

}  // namespace robust_ot
