// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include "doctest.h"
#include "fbgi/mask.hpp"
#include "fbgi/optics.hpp"
#include "fbgi/scene.hpp"

namespace op = fbgi::optics;

namespace {

fbgi::scene::Scene uniform_scene(int n, double value) {
  fbgi::scene::Scene s;
  s.n = n;
  s.grid.assign(static_cast<std::size_t>(n) * n, value);
  return s;
}

}  // namespace

TEST_CASE("transmissivity is lit mass over grid size") {
  fbgi::mask::MaskSequence seq = fbgi::mask::build_mask_sequence(6, 2);
  fbgi::scene::Scene ones = uniform_scene(6, 1.0);
  for (long f = 0; f < seq.frame_count(); ++f) {
    // Binary scene: T * n^2 counts lit-and-open pixels, exactly 2 per frame.
    CHECK(op::transmissivity(seq.frame(f), ones) == 2.0 / 36.0);
  }

  fbgi::scene::Scene half = uniform_scene(6, 0.5);
  CHECK(op::transmissivity(seq.frame(0), half) == doctest::Approx(1.0 / 36.0));

  fbgi::scene::Scene dark = uniform_scene(6, 0.0);
  CHECK(op::transmissivity(seq.frame(0), dark) == 0.0);

  fbgi::scene::Scene wrong = uniform_scene(5, 1.0);
  CHECK_THROWS_AS(op::transmissivity(seq.frame(0), wrong),
                  std::invalid_argument);
}

TEST_CASE("transmissivity counts the mask-scene overlap") {
  fbgi::mask::MaskSequence seq = fbgi::mask::build_mask_sequence(7, 1);
  fbgi::scene::Scene s = fbgi::scene::letter_stencil('X', 7);
  for (long f = 0; f < seq.frame_count(); ++f) {
    auto fr = seq.frame(f);
    long overlap = 0;
    for (std::size_t p = 0; p < fr.size(); ++p)
      if (fr[p] && s.grid[p] == 1.0) ++overlap;
    CHECK(op::transmissivity(fr, s) == static_cast<double>(overlap) / 49.0);
  }
}

TEST_CASE("noise model validates and bounds its draws") {
  CHECK_THROWS_AS(op::NoiseModel(op::NoiseKind::uniform, 0.5, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(op::NoiseModel(op::NoiseKind::uniform, -0.1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(op::NoiseModel(op::NoiseKind::none, 0.2, 1),
                  std::invalid_argument);

  op::NoiseModel none;
  CHECK_FALSE(none.enabled());
  CHECK(none.delta(0.5, 3, 7) == 0.0);

  for (op::NoiseKind kind :
       {op::NoiseKind::uniform, op::NoiseKind::gaussian_truncated}) {
    op::NoiseModel nm(kind, 0.2, 42);
    CHECK(nm.enabled());
    double mean = 0.0;
    for (std::uint64_t i = 0; i < 500; ++i) {
      const double d = nm.delta(0.5, i, 0);
      CHECK(std::abs(d) <= 0.2 * 0.5 + 1e-15);
      mean += d;
    }
    mean /= 500.0;
    CHECK(std::abs(mean) < 0.01);  // roughly centered
    // Scales linearly with T.
    CHECK(nm.delta(0.25, 9, 1) == doctest::Approx(0.5 * nm.delta(0.5, 9, 1)));
  }
}

TEST_CASE("noise draws are a pure function of seed, frame and draw index") {
  op::NoiseModel a(op::NoiseKind::uniform, 0.3, 123);
  op::NoiseModel b(op::NoiseKind::uniform, 0.3, 123);
  op::NoiseModel c(op::NoiseKind::uniform, 0.3, 124);
  bool any_frame_differs = false;
  bool any_seed_differs = false;
  for (std::uint64_t f = 0; f < 50; ++f) {
    CHECK(a.delta(0.4, f, f % 5) == b.delta(0.4, f, f % 5));
    if (a.delta(0.4, f, 0) != a.delta(0.4, f + 1, 0)) any_frame_differs = true;
    if (a.delta(0.4, f, 0) != c.delta(0.4, f, 0)) any_seed_differs = true;
  }
  CHECK(any_frame_differs);
  CHECK(any_seed_differs);
}

TEST_CASE("bucket signal is I*(T - dT), floored at zero") {
  op::NoiseModel none;
  op::BucketSample s = op::bucket_signal(2.0, 0.3, none, 0, 0);
  CHECK(s.value == 2.0 * 0.3);
  CHECK(s.perturbation == 0.0);
  CHECK(s.intensity == 2.0);
  CHECK(s.transmissivity == 0.3);

  op::NoiseModel nm(op::NoiseKind::uniform, 0.4, 7);
  for (std::uint64_t f = 0; f < 100; ++f) {
    op::BucketSample n = op::bucket_signal(1.5, 0.2, nm, f, 0);
    CHECK(n.value == 1.5 * (0.2 - n.perturbation));
    CHECK(n.value >= 0.0);
  }
  CHECK(op::bucket_signal(0.0, 1.0, none, 0, 0).value == 0.0);
  CHECK_THROWS_AS(op::bucket_signal(-1.0, 0.5, none, 0, 0),
                  std::invalid_argument);
}
