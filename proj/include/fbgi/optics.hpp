// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FBGI_OPTICS_HPP
#define FBGI_OPTICS_HPP

#include <cstdint>
#include <span>

#include "fbgi/scene.hpp"

namespace fbgi::optics {

// One bucket-detector reading: the source emits intensity I through mask
// frame A onto the scene; the detector integrates what passes.
struct BucketSample {
  double intensity;        // I at the source
  double transmissivity;   // clean T of (frame, scene)
  double perturbation;     // delta T applied this reading
  double value;            // B = max(0, I * (T - delta T))
};

enum class NoiseKind { none, uniform, gaussian_truncated };

// Multiplicative transmissivity perturbation, |delta T| <= amplitude * T.
// Draws are a pure function of (seed, frame, draw): repeating a run with the
// same seed reproduces every perturbation bit for bit. gaussian_truncated
// sums twelve uniforms (variance 1), scales to sigma = amplitude/3 relative,
// and clips to +-amplitude, staying within the same bound as uniform.
class NoiseModel {
 public:
  NoiseModel() = default;  // no noise
  NoiseModel(NoiseKind kind, double amplitude, std::uint64_t seed);

  NoiseKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  std::uint64_t seed() const { return seed_; }
  bool enabled() const { return kind_ != NoiseKind::none && amplitude_ > 0.0; }

  // delta T for reading `draw` of frame `frame` at clean transmissivity t.
  double delta(double t, std::uint64_t frame, std::uint64_t draw) const;

 private:
  NoiseKind kind_ = NoiseKind::none;
  double amplitude_ = 0.0;
  std::uint64_t seed_ = 0;
};

// Fraction of source light the scene passes under a mask frame:
//   T = sum(frame .* grid) / n^2, in [0, 1].
// frame and grid must both hold n*n entries.
double transmissivity(std::span<const std::uint8_t> frame,
                      const scene::Scene& scene);

// One feedback-loop detector reading at source intensity `intensity`.
BucketSample bucket_signal(double intensity, double transmissivity,
                           const NoiseModel& noise, std::uint64_t frame,
                           std::uint64_t draw);

}  // namespace fbgi::optics

#endif
