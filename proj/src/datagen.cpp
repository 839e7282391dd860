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


#include "robust_ot/datagen.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace robust_ot {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

DiscreteMeasure gaussian_ring(int n_modes, double radius, double sigma, int n_samples,
                              double rotation_rad, std::uint64_t seed) {
  if (n_modes < 1) throw Error(ErrorKind::kDomainError, "n_modes must be >= 1");
  if (!(sigma > 0.0)) throw Error(ErrorKind::kDomainError, "sigma must be positive");
  if (n_samples < n_modes) throw Error(ErrorKind::kDomainError, "n_samples must be >= n_modes");
  if (!std::isfinite(radius) || !std::isfinite(rotation_rad)) {
    throw Error(ErrorKind::kDomainError, "radius and rotation must be finite");
  }
  std::vector<std::mt19937_64> streams;
  streams.reserve(static_cast<std::size_t>(n_modes));
  for (int j = 0; j < n_modes; ++j) {
    streams.emplace_back(splitmix64(seed + static_cast<std::uint64_t>(j)));
  }
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const int j = i % n_modes;
    const double angle = 2.0 * std::numbers::pi * j / n_modes + rotation_rad;
    std::normal_distribution<double> noise(0.0, sigma);
    auto& rng = streams[static_cast<std::size_t>(j)];
    const double dx = noise(rng);
    const double dy = noise(rng);
    points.push_back({radius * std::cos(angle) + dx, radius * std::sin(angle) + dy});
  }
  return make_measure(std::move(points));
}

OutlierSampler OutlierSampler::FarCluster(Point center, double sigma) {
  OutlierSampler s;
  s.kind = Kind::kFarCluster;
  s.center = std::move(center);
  s.sigma = sigma;
  return s;
}

OutlierSampler OutlierSampler::UniformBox(Point lower, Point upper) {
  OutlierSampler s;
  s.kind = Kind::kUniformBox;
  s.lower = std::move(lower);
  s.upper = std::move(upper);
  return s;
}

CorruptedMeasure inject_outliers(const DiscreteMeasure& mu, double gamma,
                                 const OutlierSampler& sampler, std::uint64_t seed) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(ErrorKind::kDomainError, "gamma must be in [0, 1)");
  const std::size_t n = mu.size();
  const std::size_t d = mu.dim();
  if (sampler.kind == OutlierSampler::Kind::kFarCluster) {
    if (sampler.center.size() != d) {
      throw Error(ErrorKind::kDimensionMismatch, "outlier center dimension");
    }
    if (!(sampler.sigma >= 0.0)) throw Error(ErrorKind::kDomainError, "outlier sigma must be >= 0");
  } else {
    if (sampler.lower.size() != d || sampler.upper.size() != d) {
      throw Error(ErrorKind::kDimensionMismatch, "outlier box dimension");
    }
    for (std::size_t k = 0; k < d; ++k) {
      if (!(sampler.lower[k] <= sampler.upper[k])) {
        throw Error(ErrorKind::kDomainError, "outlier box has lower > upper");
      }
    }
  }

  const auto count = static_cast<std::size_t>(std::floor(gamma * static_cast<double>(n) + 1e-9));
  std::mt19937_64 rng(splitmix64(seed));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, n - 1);
    std::swap(order[k], order[pick(rng)]);
  }

  std::vector<Point> points = mu.points();
  std::vector<bool> labels(n, false);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t i = order[k];
    labels[i] = true;
    Point p(d);
    for (std::size_t c = 0; c < d; ++c) {
      if (sampler.kind == OutlierSampler::Kind::kFarCluster) {
        p[c] = sampler.center[c] + sampler.sigma * noise(rng);
      } else {
        p[c] = sampler.lower[c] + (sampler.upper[c] - sampler.lower[c]) * unit(rng);
      }
    }
    points[i] = std::move(p);
  }
  return CorruptedMeasure{make_measure(std::move(points), mu.mass()), std::move(labels)};
}

}  // namespace robust_ot
