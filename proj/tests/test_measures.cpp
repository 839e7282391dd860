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

#include <cmath>

#include "robust_ot/measures.hpp"

namespace robust_ot {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kIoError;
}

TEST(MakeMeasure, UniformDefault) {
  const auto mu = make_measure({{0.0}, {1.0}, {2.0}});
  ASSERT_EQ(mu.size(), 3u);
  for (double m : mu.mass()) EXPECT_DOUBLE_EQ(m, 1.0 / 3.0);
  EXPECT_TRUE(mu.is_uniform());
}

TEST(MakeMeasure, ExplicitMass) {
  const auto mu = make_measure({{0.0, 1.0}, {1.0, 0.0}}, std::vector<double>{0.5, 0.5});
  EXPECT_EQ(mu.dim(), 2u);
  EXPECT_DOUBLE_EQ(mu.mass(1), 0.5);
}

TEST(MakeMeasure, Errors) {
  EXPECT_EQ(kind_of([] { make_measure({{0.0}, {1.0}}, std::vector<double>{0.7, 0.4}); }),
            ErrorKind::kMassNotNormalized);
  EXPECT_EQ(kind_of([] { make_measure({}); }), ErrorKind::kEmptyInput);
  EXPECT_EQ(kind_of([] { make_measure({{0.0}, {1.0}}, std::vector<double>{1.5, -0.5}); }),
            ErrorKind::kNegativeMass);
  EXPECT_EQ(kind_of([] { make_measure({{0.0}, {1.0, 2.0}}); }), ErrorKind::kDimensionMismatch);
  EXPECT_EQ(kind_of([] { make_measure({{0.0}, {1.0}}, std::vector<double>{1.0}); }),
            ErrorKind::kLengthMismatch);
}

TEST(MakeMeasure, DuplicatePointsAllowed) {
  const auto mu = make_measure({{1.0}, {1.0}});
  EXPECT_EQ(mu.size(), 2u);
}

TEST(CostMatrix, Examples) {
  const auto x = make_measure({{0.0}});
  const auto y = make_measure({{3.0}});
  EXPECT_DOUBLE_EQ(cost_matrix(x, y)(0, 0), 3.0);
  const auto p = make_measure({{0.0, 0.0}});
  const auto q = make_measure({{3.0, 4.0}});
  EXPECT_DOUBLE_EQ(cost_matrix(p, q)(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(cost_matrix(p, q, Metric::kSquaredEuclidean)(0, 0), 25.0);
  EXPECT_EQ(cost_matrix(p, q).metric(), Metric::kEuclidean);
}

TEST(CostMatrix, SelfCostSymmetricZeroDiagonal) {
  const auto x = make_measure({{0.0, 1.0}, {2.0, -1.0}, {0.5, 0.5}, {3.0, 3.0}});
  const auto c = cost_matrix(x, x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(c(i, i), 0.0);
    for (std::size_t j = 0; j < x.size(); ++j) EXPECT_EQ(c(i, j), c(j, i));
  }
}

TEST(CostMatrix, DimensionMismatch) {
  const auto x = make_measure({{0.0}});
  const auto y = make_measure({{0.0, 1.0}});
  EXPECT_EQ(kind_of([&] { cost_matrix(x, y); }), ErrorKind::kDimensionMismatch);
}

TEST(CostMatrix, FromEntriesValidation) {
  EXPECT_EQ(kind_of([] { CostMatrix::FromEntries(2, 2, {1.0, 2.0, 3.0}); }),
            ErrorKind::kLengthMismatch);
  EXPECT_EQ(kind_of([] { CostMatrix::FromEntries(1, 2, {1.0, -2.0}); }), ErrorKind::kDomainError);
  const auto c = CostMatrix::FromEntries(2, 3, {1, 2, 3, 4, 5, 6});
  const auto t = c.transposed();
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t(2, 1), 6.0);
  EXPECT_EQ(c.scaled(2.0)(1, 0), 8.0);
  EXPECT_EQ(c.max_entry(), 6.0);
}

TEST(Reweight, Examples) {
  const auto mu2 = make_measure({{0.0}, {1.0}});
  const auto same = reweight(mu2, WeightVector::Ones(2));
  EXPECT_EQ(same.mass(), mu2.mass());
  EXPECT_EQ(same.points(), mu2.points());

  const auto point = reweight(mu2, WeightVector{{2.0, 0.0}, 1.0});
  EXPECT_DOUBLE_EQ(point.mass(0), 1.0);
  EXPECT_DOUBLE_EQ(point.mass(1), 0.0);

  const auto mu4 = make_measure({{0.0}, {1.0}, {2.0}, {3.0}});
  const auto half = reweight(mu4, WeightVector{{2.0, 2.0, 0.0, 0.0}, 1.0});
  EXPECT_DOUBLE_EQ(half.mass(0), 0.5);
  EXPECT_DOUBLE_EQ(half.mass(1), 0.5);
  EXPECT_DOUBLE_EQ(half.mass(3), 0.0);
}

TEST(Reweight, Errors) {
  const auto mu = make_measure({{0.0}, {1.0}});
  EXPECT_EQ(kind_of([&] { reweight(mu, WeightVector::Ones(3)); }), ErrorKind::kLengthMismatch);
  EXPECT_EQ(kind_of([&] { reweight(mu, WeightVector{{1.0, 2.0}, 1.0}); }),
            ErrorKind::kNormalizationViolated);
  EXPECT_EQ(kind_of([&] { reweight(mu, WeightVector{{2.5, -0.5}, 1.0}); }),
            ErrorKind::kNormalizationViolated);
}

TEST(WeightVector, BallAndValidation) {
  EXPECT_DOUBLE_EQ(ball_radius(0.25, 8), 2.0);
  EXPECT_TRUE(weights_feasible(WeightVector::Ones(5)));
  EXPECT_FALSE(weights_feasible(WeightVector{{1.5, 0.5}, 0.01}));
  EXPECT_TRUE(weights_feasible(WeightVector{{1.5, 0.5}, 0.125}));
  EXPECT_FALSE(weights_feasible(WeightVector{{-0.1, 2.1}, 10.0}));
  EXPECT_FALSE(weights_feasible(WeightVector{{1.0, 1.1}, 10.0}));
  EXPECT_EQ(kind_of([] { validate_weights(WeightVector{{1.0, 1.1}, 10.0}); }),
            ErrorKind::kNormalizationViolated);
}

TEST(Coupling, SumsAndCost) {
  const std::vector<CouplingEntry> pi{{0, 0, 0.25}, {0, 1, 0.25}, {1, 1, 0.5}};
  EXPECT_EQ(coupling_row_sums(pi, 2), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(coupling_col_sums(pi, 2), (std::vector<double>{0.25, 0.75}));
  const auto c = CostMatrix::FromEntries(2, 2, {1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(coupling_cost(pi, c), 0.25 + 0.5 + 2.0);
}

}  // namespace
}  // namespace robust_ot
