// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#include "fbgi/optics.hpp"

#include <stdexcept>
#include <string>

#include "fbgi/kernels.hpp"
#include "fbgi/rng.hpp"

namespace fbgi::optics {

NoiseModel::NoiseModel(NoiseKind kind, double amplitude, std::uint64_t seed)
    : kind_(kind), amplitude_(amplitude), seed_(seed) {
  if (amplitude < 0.0 || amplitude >= 0.5)
    throw std::invalid_argument(
        "NoiseModel: amplitude must lie in [0, 0.5) so the perturbed "
        "transmissivity keeps its sign");
  if (kind == NoiseKind::none && amplitude != 0.0)
    throw std::invalid_argument("NoiseModel: kind none takes amplitude 0");
}

double NoiseModel::delta(double t, std::uint64_t frame,
                         std::uint64_t draw) const {
  if (!enabled()) return 0.0;
  const std::uint64_t stream = frame * 0x10001ull + draw;
  switch (kind_) {
    case NoiseKind::uniform: {
      const double u = rng::draw_uniform01(seed_, stream, 0);
      return amplitude_ * t * (2.0 * u - 1.0);
    }
    case NoiseKind::gaussian_truncated: {
      // Irwin-Hall(12) centered at 0: variance 1, support [-6, 6]. Built
      // from arithmetic only, so draws are identical across platforms.
      double s = 0.0;
      for (std::uint64_t j = 0; j < 12; ++j)
        s += rng::draw_uniform01(seed_, stream, j);
      double g = (s - 6.0) / 3.0;  // 3-sigma window mapped to [-1, 1]
      if (g > 1.0) g = 1.0;
      if (g < -1.0) g = -1.0;
      return amplitude_ * t * g;
    }
    case NoiseKind::none:
      break;
  }
  return 0.0;
}

double transmissivity(std::span<const std::uint8_t> frame,
                      const scene::Scene& scene) {
  const std::size_t grid = scene.grid.size();
  if (scene.n <= 0 || grid != static_cast<std::size_t>(scene.n) * scene.n)
    throw std::invalid_argument("transmissivity: malformed scene");
  if (frame.size() != grid)
    throw std::invalid_argument(
        "transmissivity: frame holds " + std::to_string(frame.size()) +
        " pixels, scene " + std::to_string(grid));
  const double open = kernels::masked_sum(scene.grid.data(), frame.data(), grid);
  return open / static_cast<double>(grid);
}

BucketSample bucket_signal(double intensity, double transmissivity,
                           const NoiseModel& noise, std::uint64_t frame,
                           std::uint64_t draw) {
  if (intensity < 0.0)
    throw std::invalid_argument("bucket_signal: intensity must be >= 0");
  BucketSample s;
  s.intensity = intensity;
  s.transmissivity = transmissivity;
  s.perturbation = noise.delta(transmissivity, frame, draw);
  const double raw = intensity * (transmissivity - s.perturbation);
  s.value = raw < 0.0 ? 0.0 : raw;
  return s;
}

}  // namespace fbgi::optics
