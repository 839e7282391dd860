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

#include <random>

#include "oracles.hpp"
#include "robust_ot/analysis.hpp"
#include "robust_ot/datagen.hpp"
#include "robust_ot/exact_ot.hpp"

namespace robust_ot {
namespace {

TEST(Theorem2Bound, Examples) {
  EXPECT_DOUBLE_EQ(theorem2_bound(4.0, 0.2, 0.0), 1.8);
  EXPECT_DOUBLE_EQ(theorem2_bound(7.0, 0.0, 0.3), 1.0);
  for (double g : {0.05, 0.1, 0.3}) {
    EXPECT_NEAR(theorem2_bound(5.0, g, rho_for_known_gamma(g)), 1.0, 1e-12);
  }
  EXPECT_THROW(theorem2_bound(0.5, 0.1, 0.1), Error);
}

TEST(Theorem2Bound, Monotonicity) {
  for (double k = 1.0; k <= 10.0; k += 0.5) {
    for (double g = 0.0; g < 0.95; g += 0.05) {
      for (double r = 0.0; r <= 1.0; r += 0.02) {
        const double b = theorem2_bound(k, g, r);
        EXPECT_LE(theorem2_bound(k, g, r + 0.02), b + 1e-15);
        EXPECT_GE(theorem2_bound(k + 0.5, g, r), b - 1e-15);
        if (r == 0.0) EXPECT_GE(theorem2_bound(k, g + 0.05, r), b - 1e-15);
      }
    }
  }
}

TEST(RhoForKnownGamma, Examples) {
  EXPECT_EQ(rho_for_known_gamma(0.0), 0.0);
  EXPECT_DOUBLE_EQ(rho_for_known_gamma(0.5), 0.5);
  EXPECT_DOUBLE_EQ(rho_for_known_gamma(0.05), 1.0 / 38.0);
  EXPECT_THROW(rho_for_known_gamma(1.0), Error);
}

TEST(ConstructTheorem2Instance, Examples) {
  const auto none = construct_theorem2_instance(1.0, 0.0, 10);
  const auto& x = none.mixed;
  EXPECT_NEAR(solve_exact(x, none.target, cost_matrix(x, none.target)).value, 1.0, 1e-12);
  for (bool l : none.labels) EXPECT_FALSE(l);

  const auto inst = construct_theorem2_instance(5.0, 0.1, 10);
  ASSERT_EQ(inst.mixed.size(), 10u);
  int at_zero = 0, at_five = 0;
  for (const auto& p : inst.mixed.points()) {
    at_zero += p[0] == 0.0;
    at_five += p[0] == 5.0;
  }
  EXPECT_EQ(at_zero, 9);
  EXPECT_EQ(at_five, 1);
  ASSERT_EQ(inst.target.size(), 1u);
  EXPECT_EQ(inst.target.point(0)[0], 1.0);
  EXPECT_THROW(construct_theorem2_instance(5.0, 0.15, 10), Error);
}

TEST(ConstructTheorem2Instance, MeasuredKMatchesRequested) {
  for (double k : {1.0, 2.5, 7.0}) {
    for (double g : {0.05, 0.1, 0.2}) {
      const auto inst = construct_theorem2_instance(k, g, 20);
      const double ac = solve_exact(inst.outlier, inst.clean, cost_matrix(inst.outlier, inst.clean)).value;
      const double ct = solve_exact(inst.clean, inst.target, cost_matrix(inst.clean, inst.target)).value;
      EXPECT_NEAR(ac / ct, k, 1e-9);
    }
  }
}

TEST(VerifyTheorem2, Examples) {
  const auto clean = construct_theorem2_instance(3.0, 0.0, 10);
  const auto r0 = verify_theorem2(clean, 0.2);
  EXPECT_NEAR(r0.lhs, 1.0, 1e-9);
  EXPECT_NEAR(r0.rhs, 1.0, 1e-9);
  EXPECT_TRUE(r0.holds);

  const auto inst = construct_theorem2_instance(5.0, 0.1, 10);
  const auto r = verify_theorem2(inst, rho_for_known_gamma(0.1));
  EXPECT_LE(r.lhs, 1.0 + 1e-6);
  EXPECT_TRUE(r.holds);
}

TEST(VerifyTheorem2, HoldsOnRandomConfigurations) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> uk(1.0, 10.0), ur(0.0, 1.0);
  const double gammas[] = {0.05, 0.1, 0.2};
  for (int t = 0; t < 100; ++t) {
    const auto inst = construct_theorem2_instance(uk(rng), gammas[t % 3], 20);
    EXPECT_TRUE(verify_theorem2(inst, ur(rng)).holds) << t;
  }
}

TEST(MakeOutlierInstance, MeasuresK) {
  const auto clean = gaussian_ring(4, 4.0, 0.4, 40, 0.0, 3);
  const auto target = gaussian_ring(4, 4.0, 0.4, 40, std::numbers::pi / 4.0, 4);
  const auto cor = inject_outliers(clean, 0.1, OutlierSampler::FarCluster({40.0, 0.0}, 0.4), 3);
  const auto inst = make_outlier_instance(cor.measure, cor.is_outlier, target);
  EXPECT_NEAR(inst.gamma, 0.1, 1e-12);
  EXPECT_GT(inst.k, 5.0);
  EXPECT_EQ(inst.outlier.size(), 4u);
  EXPECT_TRUE(verify_theorem2(inst, 0.05).holds);
}

TEST(SweepRho, Examples) {
  std::mt19937_64 rng(72);
  std::normal_distribution<double> g;
  std::vector<Point> px(12), py(10);
  for (auto& p : px) p = {g(rng), g(rng)};
  for (auto& p : py) p = {2.0 + g(rng), g(rng)};
  const auto mu = make_measure(px);
  const auto nu = make_measure(py);
  const auto c = cost_matrix(mu, nu);
  const double exact = solve_exact(mu, nu, c).value;

  const auto zero = sweep_rho(mu, nu, c, {0.0});
  ASSERT_EQ(zero.values.size(), 1u);
  EXPECT_NEAR(zero.values[0], exact, 1e-9);

  const auto same = sweep_rho(mu, mu, cost_matrix(mu, mu), make_rho_grid(0.01, 1.0, 5, true));
  for (double v : same.values) EXPECT_NEAR(v, 0.0, 1e-9);

  const auto curve = sweep_rho(mu, nu, c, make_rho_grid(0.0, 2.0, 12, false));
  EXPECT_TRUE(curve.monotone);
  ASSERT_EQ(curve.weights.size(), 12u);
  for (std::size_t k = 0; k < curve.values.size(); ++k) {
    EXPECT_GE(curve.values[k], 0.0);
    EXPECT_LE(curve.values[k], exact + 1e-8);
    if (k > 0) EXPECT_LE(curve.values[k], curve.values[k - 1]);
  }
  EXPECT_THROW(sweep_rho(mu, nu, c, {0.2, 0.1}), Error);
}

TEST(MakeRhoGrid, Spacing) {
  const auto lin = make_rho_grid(0.0, 1.0, 5, false);
  EXPECT_EQ(lin, (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  const auto lg = make_rho_grid(1e-3, 1.0, 4, true);
  EXPECT_NEAR(lg[1], 1e-2, 1e-15);
  EXPECT_NEAR(lg[2], 1e-1, 1e-15);
  EXPECT_EQ(lg.back(), 1.0);
  EXPECT_THROW(make_rho_grid(0.0, 1.0, 3, true), Error);
}

TEST(DetectElbow, HingeAndFlat) {
  RhoCurve hinge;
  hinge.rho_grid = {0.0, 0.1, 0.2, 0.3};
  hinge.values = {1.0, 0.2, 0.19, 0.18};
  const Elbow e = detect_elbow(hinge);
  EXPECT_EQ(e.rho, 0.1);
  EXPECT_EQ(e.index, 1u);
  EXPECT_FALSE(e.flat);

  RhoCurve flat;
  flat.rho_grid = {0.05, 0.1, 0.2, 0.4};
  flat.values = {2.0, 2.0, 2.0, 2.0};
  const Elbow f = detect_elbow(flat);
  EXPECT_TRUE(f.flat);
  EXPECT_EQ(f.rho, 0.05);

  RhoCurve tiny;
  tiny.rho_grid = {0.1, 0.2, 0.3};
  tiny.values = {3.0, 2.0, 1.0};
  try {
    detect_elbow(tiny);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::kTooFewPoints);
  }
}

TEST(MetricProperties, IdenticalSamples) {
  const auto a = make_measure({{0.0, 0.0}, {1.0, 0.0}});
  const auto report = metric_properties_report({a, a, a}, Metric::kEuclidean, 0.2);
  EXPECT_TRUE(report.identity);
  EXPECT_TRUE(report.symmetric);
  EXPECT_TRUE(report.non_negative);
  EXPECT_TRUE(report.triangle_violations.empty());
  EXPECT_THROW(metric_properties_report({a, a}, Metric::kEuclidean, 0.2), Error);
}

TEST(MetricProperties, TriangleCounterexampleSearch) {
  const auto found = search_triangle_counterexample(200, 0.25, 7);
  ASSERT_TRUE(found.has_value());
  EXPECT_GT(found->violation.margin(), 1e-6);
  // Re-check the reported triple independently of the search.
  RobustParams p;
  p.rho1 = p.rho2 = 0.25;
  auto w = [&](const DiscreteMeasure& x, const DiscreteMeasure& y) {
    return solve_robust(x, y, cost_matrix(x, y), p).value;
  };
  const double direct = w(found->a, found->c);
  const double via = w(found->a, found->b) + w(found->b, found->c);
  EXPECT_NEAR(direct - via, found->violation.margin(), 1e-6);
}

TEST(MetricProperties, AsymmetryAtUnequalRadii) {
  const auto found = search_asymmetry(200, 0.5, 0.0, 1e-3, 9);
  ASSERT_TRUE(found.has_value());
  EXPECT_GT(std::abs(found->forward - found->backward), 1e-3);
  RobustParams p;
  p.rho1 = 0.5;
  const double fwd = solve_robust(found->a, found->b, cost_matrix(found->a, found->b), p).value;
  EXPECT_NEAR(fwd, found->forward, 1e-6 * std::max(1.0, fwd));
}

TEST(RocAuc, MatchesPairCount) {
  std::mt19937_64 rng(73);
  std::uniform_int_distribution<int> u(0, 5);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> s(30);
    std::vector<bool> pos(30);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = u(rng);  // many ties
      pos[i] = i % 3 == 0;
    }
    EXPECT_NEAR(roc_auc(s, pos), oracle::auc_pairs(s, pos), 1e-12);
  }
  EXPECT_DOUBLE_EQ(roc_auc({0.1, 0.9, 0.2}, {false, true, false}), 1.0);
  EXPECT_DOUBLE_EQ(roc_auc({0.9, 0.1}, {false, true}), 0.0);
}

}  // namespace
}  // namespace robust_ot
