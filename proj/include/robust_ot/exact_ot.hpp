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


#ifndef ROBUST_OT_EXACT_OT_HPP_
#define ROBUST_OT_EXACT_OT_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "robust_ot/measures.hpp"

namespace robust_ot {

// Network simplex for the transportation problem
//
//   min sum_ij c_ij pi_ij  s.t.  pi 1 = a,  pi^T 1 = b,  pi >= 0
//
// on the complete bipartite graph, with an artificial root joined to every
// node by a big-M arc. The spanning tree is kept strongly feasible (zero-flow
// tree arcs point away from the root), which rules out cycling on degenerate
// instances. Entering arcs are chosen by block search over the real arcs in
// fixed (i, j) order; within a block the most negative reduced cost wins and
// ties go to the lowest index, so results are deterministic.
//
// Instances are reusable: buffers are kept between solve() calls, which
// matters for the brute-force oracles that solve millions of tiny problems.
class NetworkSimplex {
 public:
  struct Result {
    double value = 0.0;
    std::vector<CouplingEntry> coupling;  // positive flows only
    std::vector<double> phi;              // rows
    std::vector<double> psi;              // columns; phi_i - psi_j <= c_ij
  };

  // `cost` is row-major with a.size() rows and b.size() columns. Masses must
  // be non-negative; their totals should agree to ~1e-9. Throws
  // kSolverStall if the pivot budget is exhausted.
  Result solve(std::span<const double> a, std::span<const double> b,
               std::span<const double> cost);

  // Objective value only; skips building the coupling and potentials.
  double solve_value(std::span<const double> a, std::span<const double> b,
                     std::span<const double> cost);

  std::int64_t last_pivot_count() const { return pivots_; }

 private:
  void run(std::span<const double> a, std::span<const double> b,
           std::span<const double> cost);
  void rebuild_tree();
  bool find_entering(int* arc);
  void pivot(int entering);

  std::size_t m_ = 0;
  std::size_t n_ = 0;
  int node_count_ = 0;
  int root_ = 0;
  int real_arcs_ = 0;
  double eps_ = 0.0;
  std::int64_t pivots_ = 0;
  int next_arc_ = 0;
  int block_size_ = 0;

  std::vector<int> src_, tgt_;
  std::vector<double> arc_cost_, flow_;
  std::vector<char> in_tree_;
  std::vector<int> tree_arcs_;
  // Tree structure rebuilt from tree_arcs_ after every pivot.
  std::vector<int> parent_, pred_, depth_;
  std::vector<char> up_;  // pred arc points from node to parent
  std::vector<double> pot_;
  std::vector<int> adj_start_, adj_, stack_;
};

// Exact OT between two measures. Potentials are shifted so the mass-weighted
// mean of phi is zero. `gap` holds primal minus dual objective.
OtSolution solve_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                       const CostMatrix& cost);

// Same, on raw marginals.
OtSolution solve_exact(std::span<const double> a, std::span<const double> b,
                       const CostMatrix& cost);

// |primal value - (sum_i phi_i mu_i - sum_j psi_j nu_j)|.
double duality_gap(const OtSolution& sol, const DiscreteMeasure& mu,
                   const DiscreteMeasure& nu);
double duality_gap(const OtSolution& sol, std::span<const double> a,
                   std::span<const double> b);

}  // namespace robust_ot

#endif  // ROBUST_OT_EXACT_OT_HPP_
