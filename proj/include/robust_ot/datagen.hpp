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


#ifndef ROBUST_OT_DATAGEN_HPP_
#define ROBUST_OT_DATAGEN_HPP_

#include <cstdint>
#include <numbers>
#include <vector>

#include "robust_ot/measures.hpp"

namespace robust_ot {

// Defaults for the four-mode ring experiment.
struct RingDefaults {
  static constexpr int kModes = 4;
  static constexpr double kRadius = 4.0;
  static constexpr double kSigma = 0.4;
  static constexpr int kSamples = 200;
  static constexpr double kRotation = std::numbers::pi / 4.0;
  // Far outlier cluster sits this many radii from the origin.
  static constexpr double kFarClusterDistance = 100.0;
};

// SplitMix64 finalizer; used to derive independent mt19937_64 seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Uniform-mass samples from an equal-weight mixture of isotropic Gaussians
// with means radius * (cos, sin)(2 pi j / n_modes + rotation). Sample i is
// drawn from mode i % n_modes; mode j uses its own mt19937_64 stream seeded
// with splitmix64(seed + j), so adding samples never perturbs earlier ones.
DiscreteMeasure gaussian_ring(int n_modes, double radius, double sigma, int n_samples,
                              double rotation_rad, std::uint64_t seed);

struct OutlierSampler {
  enum class Kind { kFarCluster, kUniformBox };
  Kind kind = Kind::kFarCluster;
  Point center;  // far cluster mean
  double sigma = 0.0;
  Point lower;   // uniform box corners
  Point upper;

  static OutlierSampler FarCluster(Point center, double sigma);
  static OutlierSampler UniformBox(Point lower, Point upper);
};

struct CorruptedMeasure {
  DiscreteMeasure measure;
  std::vector<bool> is_outlier;
};

// Replaces floor(gamma * n) atoms, picked by a seeded partial Fisher-Yates
// shuffle, with draws from `sampler`. Mass stays uniform.
CorruptedMeasure inject_outliers(const DiscreteMeasure& mu, double gamma,
                                 const OutlierSampler& sampler, std::uint64_t seed);

}  // namespace robust_ot

#endif  // ROBUST_OT_DATAGEN_HPP_
