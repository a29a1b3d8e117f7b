// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>

#include "doctest.h"
#include "fbgi/io.hpp"
#include "fbgi/scene.hpp"

namespace sc = fbgi::scene;

TEST_CASE("letter stencils render at native 7x7 size") {
  sc::Scene x = sc::letter_stencil('X', 7);
  const char* expect[7] = {"#.....#", ".#...#.", "..#.#..", "...#...",
                           "..#.#..", ".#...#.", "#.....#"};
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 7; ++c)
      CHECK(x.at(r, c) == (expect[r][c] == '#' ? 1.0 : 0.0));

  for (char l : {'X', 'J', 'T', 'U'}) {
    sc::Scene s = sc::letter_stencil(l, 7);
    double total = 0.0;
    for (double v : s.grid) {
      CHECK((v == 0.0 || v == 1.0));
      total += v;
    }
    CHECK(total > 0.0);
    CHECK(total < 49.0);
  }
}

TEST_CASE("letter upscale is nearest neighbor") {
  sc::Scene small = sc::letter_stencil('T', 7);
  sc::Scene big = sc::letter_stencil('T', 35);
  for (int r = 0; r < 35; ++r)
    for (int c = 0; c < 35; ++c)
      CHECK(big.at(r, c) == small.at(r / 5, c / 5));
}

TEST_CASE("letter stencil rejects unknown letters and tiny grids") {
  CHECK_THROWS_AS(sc::letter_stencil('Q', 35), std::invalid_argument);
  CHECK_THROWS_AS(sc::letter_stencil('x', 35), std::invalid_argument);
  CHECK_THROWS_AS(sc::letter_stencil('X', 6), std::invalid_argument);
}

TEST_CASE("shift_scene wraps toroidally") {
  sc::Scene s = sc::letter_stencil('J', 7);
  sc::MotionDescriptor m{2, 1, true};
  sc::Scene moved = sc::shift_scene(s, m, 1);
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 7; ++c)
      CHECK(moved.at(r, c) == s.at((r - 1 + 7) % 7, (c - 2 + 7) % 7));

  // A full period of steps is the identity.
  sc::Scene cycled = sc::shift_scene(s, sc::MotionDescriptor{1, 0, true}, 7);
  for (std::size_t i = 0; i < s.grid.size(); ++i)
    CHECK(cycled.grid[i] == s.grid[i]);
}

TEST_CASE("shift_scene without wrap zero-fills vacated pixels") {
  sc::Scene s = sc::letter_stencil('U', 7);
  sc::Scene moved = sc::shift_scene(s, sc::MotionDescriptor{3, 0, false}, 1);
  for (int r = 0; r < 7; ++r) {
    for (int c = 0; c < 3; ++c) CHECK(moved.at(r, c) == 0.0);
    for (int c = 3; c < 7; ++c) CHECK(moved.at(r, c) == s.at(r, c - 3));
  }
  // Shifting everything out empties the grid.
  sc::Scene gone = sc::shift_scene(s, sc::MotionDescriptor{7, 0, false}, 1);
  for (double v : gone.grid) CHECK(v == 0.0);
}

TEST_CASE("scene loads from PGM with linear value mapping") {
  const auto path = std::filesystem::temp_directory_path() / "fbgi_scene.pgm";
  fbgi::io::PgmImage img;
  img.width = 3;
  img.height = 3;
  img.maxval = 200;
  img.pixels = {0, 50, 100, 150, 200, 0, 25, 75, 200};
  fbgi::io::write_pgm_file(path, img);

  sc::Scene s = sc::load_scene_pgm(path);
  CHECK(s.n == 3);
  CHECK(s.at(0, 0) == 0.0);
  CHECK(s.at(0, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.at(1, 1) == 1.0);
  std::filesystem::remove(path);

  fbgi::io::PgmImage rect;
  rect.width = 4;
  rect.height = 2;
  rect.maxval = 255;
  rect.pixels.assign(8, 0);
  const auto rect_path = std::filesystem::temp_directory_path() / "fbgi_rect.pgm";
  fbgi::io::write_pgm_file(rect_path, rect);
  CHECK_THROWS_AS(sc::load_scene_pgm(rect_path), std::invalid_argument);
  std::filesystem::remove(rect_path);
}
