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
#include <numbers>

#include "robust_ot/datagen.hpp"
#include "robust_ot/exact_ot.hpp"

namespace robust_ot {
namespace {

TEST(GaussianRing, DegenerateSigmaHitsModeCenters) {
  const auto a = gaussian_ring(4, 4.0, 1e-9, 4, 0.0, 1);
  const auto b = gaussian_ring(4, 4.0, 1e-9, 4, std::numbers::pi / 4.0, 1);
  for (int j = 0; j < 4; ++j) {
    const double t = std::numbers::pi / 2.0 * j;
    EXPECT_NEAR(a.point(j)[0], 4.0 * std::cos(t), 1e-7);
    EXPECT_NEAR(a.point(j)[1], 4.0 * std::sin(t), 1e-7);
    // Rotating a's centers by pi / 4 gives b's centers.
    const double c = std::cos(std::numbers::pi / 4.0), s = std::sin(std::numbers::pi / 4.0);
    EXPECT_NEAR(b.point(j)[0], c * a.point(j)[0] - s * a.point(j)[1], 1e-7);
    EXPECT_NEAR(b.point(j)[1], s * a.point(j)[0] + c * a.point(j)[1], 1e-7);
  }
}

TEST(GaussianRing, DeterministicAndSeedSensitive) {
  const auto a = gaussian_ring(4, 4.0, 0.4, 200, 0.0, 42);
  const auto b = gaussian_ring(4, 4.0, 0.4, 200, 0.0, 42);
  const auto c = gaussian_ring(4, 4.0, 0.4, 200, 0.0, 43);
  EXPECT_EQ(a.points(), b.points());
  EXPECT_NE(a.points(), c.points());
  EXPECT_TRUE(a.is_uniform());
}

TEST(GaussianRing, PrefixStable) {
  const auto small = gaussian_ring(3, 2.0, 0.3, 30, 0.1, 5);
  const auto large = gaussian_ring(3, 2.0, 0.3, 60, 0.1, 5);
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small.point(i), large.point(i));
}

TEST(GaussianRing, ModeMeans) {
  const auto mu = gaussian_ring(4, 4.0, 0.4, 4000, 0.0, 8);
  for (int j = 0; j < 4; ++j) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = j; i < mu.size(); i += 4) {
      mx += mu.point(i)[0] / 1000.0;
      my += mu.point(i)[1] / 1000.0;
    }
    EXPECT_NEAR(mx, 4.0 * std::cos(std::numbers::pi / 2.0 * j), 0.05);
    EXPECT_NEAR(my, 4.0 * std::sin(std::numbers::pi / 2.0 * j), 0.05);
  }
}

TEST(GaussianRing, Errors) {
  EXPECT_THROW(gaussian_ring(0, 1.0, 0.1, 10, 0.0, 1), Error);
  EXPECT_THROW(gaussian_ring(4, 1.0, 0.0, 10, 0.0, 1), Error);
  EXPECT_THROW(gaussian_ring(4, 1.0, 0.1, 3, 0.0, 1), Error);
}

TEST(InjectOutliers, ZeroGammaUnchanged) {
  const auto mu = gaussian_ring(4, 4.0, 0.4, 50, 0.0, 2);
  const auto out = inject_outliers(mu, 0.0, OutlierSampler::FarCluster({400.0, 0.0}, 0.4), 2);
  EXPECT_EQ(out.measure.points(), mu.points());
  for (bool l : out.is_outlier) EXPECT_FALSE(l);
}

TEST(InjectOutliers, CountAndLabels) {
  const auto mu = gaussian_ring(4, 4.0, 0.4, 200, 0.0, 2);
  const auto out = inject_outliers(mu, 0.05, OutlierSampler::FarCluster({400.0, 0.0}, 0.4), 2);
  int count = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (out.is_outlier[i]) {
      ++count;
      EXPECT_GT(out.measure.point(i)[0], 390.0);
    } else {
      EXPECT_EQ(out.measure.point(i), mu.point(i));
    }
  }
  EXPECT_EQ(count, 10);
  EXPECT_TRUE(out.measure.is_uniform());
  const auto again = inject_outliers(mu, 0.05, OutlierSampler::FarCluster({400.0, 0.0}, 0.4), 2);
  EXPECT_EQ(again.measure.points(), out.measure.points());
  EXPECT_EQ(again.is_outlier, out.is_outlier);
}

TEST(InjectOutliers, FarClusterMakesKLarge) {
  const double radius = RingDefaults::kRadius;
  const auto clean = gaussian_ring(4, radius, 0.4, 100, 0.0, 6);
  const auto target = gaussian_ring(4, radius, 0.4, 100, RingDefaults::kRotation, 7);
  const auto out = inject_outliers(
      clean, 0.05, OutlierSampler::FarCluster({RingDefaults::kFarClusterDistance * radius, 0.0}, 0.4),
      6);
  std::vector<Point> outliers;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (out.is_outlier[i]) outliers.push_back(out.measure.point(i));
  }
  const auto a = make_measure(outliers);
  const double ac = solve_exact(a, clean, cost_matrix(a, clean)).value;
  const double ct = solve_exact(clean, target, cost_matrix(clean, target)).value;
  EXPECT_GT(ac / ct, 50.0);
}

TEST(InjectOutliers, UniformBoxStaysInside) {
  const auto mu = gaussian_ring(2, 1.0, 0.1, 100, 0.0, 4);
  const auto out = inject_outliers(mu, 0.3, OutlierSampler::UniformBox({-5.0, 10.0}, {5.0, 12.0}), 4);
  int count = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!out.is_outlier[i]) continue;
    ++count;
    const auto& p = out.measure.point(i);
    EXPECT_GE(p[0], -5.0);
    EXPECT_LE(p[0], 5.0);
    EXPECT_GE(p[1], 10.0);
    EXPECT_LE(p[1], 12.0);
  }
  EXPECT_EQ(count, 30);
}

TEST(InjectOutliers, Errors) {
  const auto mu = gaussian_ring(2, 1.0, 0.1, 10, 0.0, 4);
  EXPECT_THROW(inject_outliers(mu, 1.0, OutlierSampler::FarCluster({0.0, 0.0}, 0.1), 1), Error);
  EXPECT_THROW(inject_outliers(mu, 0.1, OutlierSampler::FarCluster({0.0}, 0.1), 1), Error);
  EXPECT_THROW(inject_outliers(mu, 0.1, OutlierSampler::UniformBox({1.0, 0.0}, {0.0, 1.0}), 1),
               Error);
}

}  // namespace
}  // namespace robust_ot
