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


#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "robust_ot/exact_ot.hpp"

namespace robust_ot {
namespace {

void expect_certificate(const OtSolution& sol, const std::vector<double>& a,
                        const std::vector<double>& b, const CostMatrix& c) {
  const auto rows = coupling_row_sums(sol.coupling, a.size());
  const auto cols = coupling_col_sums(sol.coupling, b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(rows[i], a[i], 1e-8);
  for (std::size_t j = 0; j < b.size(); ++j) EXPECT_NEAR(cols[j], b[j], 1e-8);
  for (const auto& e : sol.coupling) {
    EXPECT_GE(e.mass, 0.0);
    EXPECT_NEAR(sol.potential_x[e.i] - sol.potential_y[e.j], c(e.i, e.j), 1e-8);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      EXPECT_LE(sol.potential_x[i] - sol.potential_y[j], c(i, j) + 1e-9);
    }
  }
  EXPECT_NEAR(sol.value, coupling_cost(sol.coupling, c), 1e-10 * std::max(1.0, sol.value));
  EXPECT_LE(duality_gap(sol, a, b), 1e-9 * std::max(1.0, sol.value));
}

TEST(SolveExact, IdenticalMeasuresGiveZeroAndIdentityCoupling) {
  const auto mu = make_measure({{0.0}, {1.0}, {3.0}});
  const auto sol = solve_exact(mu, mu, cost_matrix(mu, mu));
  EXPECT_EQ(sol.value, 0.0);
  for (const auto& e : sol.coupling) {
    if (e.mass > 0.0) EXPECT_EQ(e.i, e.j);
  }
  EXPECT_LE(duality_gap(sol, mu, mu), 1e-12);
}

TEST(SolveExact, PointMasses) {
  const auto x = make_measure({{0.0}});
  const auto y = make_measure({{3.0}});
  EXPECT_DOUBLE_EQ(solve_exact(x, y, cost_matrix(x, y)).value, 3.0);
}

TEST(SolveExact, ShiftedPairMatchesTwoByTwoFamily) {
  const auto x = make_measure({{0.0}, {1.0}});
  const auto y = make_measure({{1.0}, {2.0}});
  const auto c = cost_matrix(x, y);
  const double ref = oracle::ot_2x2(x.mass(), y.mass(), c.entries());
  EXPECT_DOUBLE_EQ(ref, 1.0);
  EXPECT_NEAR(solve_exact(x, y, c).value, ref, 1e-12);
}

TEST(SolveExact, RandomTwoByTwoMatchesFamily) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto a = oracle::random_simplex(2, rng);
    const auto b = oracle::random_simplex(2, rng);
    const auto c = CostMatrix::FromEntries(2, 2, oracle::uniform_costs(4, rng));
    EXPECT_NEAR(solve_exact(a, b, c).value, oracle::ot_2x2(a, b, c.entries()), 1e-12);
  }
}

TEST(SolveExact, ThreeByThreeMatchesVertexEnumeration) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    // Alternate random masses with uniform masses and integer costs, which
    // are highly degenerate.
    std::vector<double> a, b, entries;
    if (t % 2 == 0) {
      a = oracle::random_simplex(3, rng);
      b = oracle::random_simplex(3, rng);
      entries = oracle::uniform_costs(9, rng);
    } else {
      a.assign(3, 1.0 / 3.0);
      b.assign(3, 1.0 / 3.0);
      for (int k = 0; k < 9; ++k) entries.push_back(static_cast<double>(rng() % 3));
    }
    const auto c = CostMatrix::FromEntries(3, 3, entries);
    const auto sol = solve_exact(a, b, c);
    EXPECT_NEAR(sol.value, oracle::lp_by_vertex_enumeration(a, b, entries), 1e-10);
    expect_certificate(sol, a, b, c);
  }
}

TEST(SolveExact, RandomEightByEightCertificate) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto a = oracle::random_simplex(8, rng);
    const auto b = oracle::random_simplex(8, rng);
    const auto c = CostMatrix::FromEntries(8, 8, oracle::uniform_costs(64, rng));
    const auto sol = solve_exact(a, b, c);
    EXPECT_LE(sol.gap, 1e-9);
    expect_certificate(sol, a, b, c);
  }
}

TEST(SolveExact, RectangularAndZeroMassAtoms) {
  std::mt19937_64 rng(3);
  std::vector<double> a{0.5, 0.0, 0.5};
  std::vector<double> b{0.2, 0.3, 0.0, 0.1, 0.4};
  const auto c = CostMatrix::FromEntries(3, 5, oracle::uniform_costs(15, rng));
  const auto sol = solve_exact(a, b, c);
  expect_certificate(sol, a, b, c);
}

TEST(SolveExact, PotentialsCenteredOnSourceMass) {
  std::mt19937_64 rng(21);
  const auto a = oracle::random_simplex(6, rng);
  const auto b = oracle::random_simplex(4, rng);
  const auto sol = solve_exact(a, b, CostMatrix::FromEntries(6, 4, oracle::uniform_costs(24, rng)));
  double mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] * sol.potential_x[i];
  EXPECT_NEAR(mean, 0.0, 1e-12);
}

TEST(SolveExact, ScaleEquivariance) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto a = oracle::random_simplex(5, rng);
    const auto b = oracle::random_simplex(7, rng);
    const auto c = CostMatrix::FromEntries(5, 7, oracle::uniform_costs(35, rng));
    const double v = solve_exact(a, b, c).value;
    for (double alpha : {0.01, 3.0, 1e4}) {
      EXPECT_NEAR(solve_exact(a, b, c.scaled(alpha)).value, alpha * v, 1e-9 * alpha * v);
    }
  }
}

TEST(SolveExact, PermutationInvariance) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::vector<Point> px(9), py(6);
  for (auto& p : px) p = {g(rng), g(rng)};
  for (auto& p : py) p = {g(rng), g(rng)};
  const auto mass = oracle::random_simplex(9, rng);
  const auto x = make_measure(px, mass);
  const auto y = make_measure(py);
  const double v = solve_exact(x, y, cost_matrix(x, y)).value;
  std::vector<std::size_t> perm(9);
  std::iota(perm.begin(), perm.end(), 0);
  for (int t = 0; t < 10; ++t) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Point> qx;
    std::vector<double> qm;
    for (std::size_t k : perm) {
      qx.push_back(px[k]);
      qm.push_back(mass[k]);
    }
    const auto xp = make_measure(qx, qm);
    EXPECT_NEAR(solve_exact(xp, y, cost_matrix(xp, y)).value, v, 1e-10);
  }
}

TEST(SolveExact, Deterministic) {
  std::mt19937_64 rng(2);
  std::vector<double> a(10, 0.1), b(10, 0.1), entries;
  for (int k = 0; k < 100; ++k) entries.push_back(static_cast<double>(rng() % 4));
  const auto c = CostMatrix::FromEntries(10, 10, entries);
  const auto s1 = solve_exact(a, b, c);
  const auto s2 = solve_exact(a, b, c);
  ASSERT_EQ(s1.coupling.size(), s2.coupling.size());
  for (std::size_t k = 0; k < s1.coupling.size(); ++k) {
    EXPECT_EQ(s1.coupling[k].i, s2.coupling[k].i);
    EXPECT_EQ(s1.coupling[k].j, s2.coupling[k].j);
    EXPECT_EQ(s1.coupling[k].mass, s2.coupling[k].mass);
  }
  EXPECT_EQ(s1.potential_x, s2.potential_x);
}

TEST(SolveExact, ReusedSolverMatchesFreshSolve) {
  std::mt19937_64 rng(13);
  NetworkSimplex ns;
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 1 + rng() % 6, n = 1 + rng() % 6;
    const auto a = oracle::random_simplex(m, rng);
    const auto b = oracle::random_simplex(n, rng);
    const auto entries = oracle::uniform_costs(m * n, rng);
    const double fresh = solve_exact(a, b, CostMatrix::FromEntries(m, n, entries)).value;
    EXPECT_NEAR(ns.solve_value(a, b, entries), fresh, 1e-12);
  }
}

TEST(SolveExact, ShapeMismatch) {
  const auto x = make_measure({{0.0}, {1.0}});
  const auto c = CostMatrix::FromEntries(1, 1, {1.0});
  try {
    solve_exact(x, x, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDimensionMismatch);
  }
}

}  // namespace
}  // namespace robust_ot
