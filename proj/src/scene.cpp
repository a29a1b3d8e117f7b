// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#include "fbgi/scene.hpp"

#include <stdexcept>
#include <string>

#include "fbgi/io.hpp"

namespace fbgi::scene {

namespace {

// 7x7 block-letter stencils, one string per row, '#' = transmissive stroke.
struct Stencil {
  char letter;
  const char* rows[7];
};

constexpr Stencil kStencils[] = {
    {'X',
     {"#.....#", ".#...#.", "..#.#..", "...#...", "..#.#..", ".#...#.",
      "#.....#"}},
    {'J',
     {"#######", "....#..", "....#..", "....#..", "....#..", "#...#..",
      ".###..."}},
    {'T',
     {"#######", "...#...", "...#...", "...#...", "...#...", "...#...",
      "...#..."}},
    {'U',
     {"#.....#", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#",
      ".#####."}},
};

const Stencil* find_stencil(char letter) {
  for (const auto& s : kStencils)
    if (s.letter == letter) return &s;
  return nullptr;
}

}  // namespace

Scene letter_stencil(char letter, int n) {
  const Stencil* st = find_stencil(letter);
  if (st == nullptr)
    throw std::invalid_argument(std::string("letter_stencil: no stencil for '") +
                                letter + "'");
  if (n < 7)
    throw std::invalid_argument("letter_stencil: grid " + std::to_string(n) +
                                " too small for a 7x7 stencil");
  Scene s;
  s.n = n;
  s.grid.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int r = 0; r < n; ++r) {
    const int sr = r * 7 / n;
    for (int c = 0; c < n; ++c) {
      const int sc = c * 7 / n;
      if (st->rows[sr][sc] == '#') s.at(r, c) = 1.0;
    }
  }
  return s;
}

Scene shift_scene(const Scene& s, const MotionDescriptor& motion, int steps) {
  if (s.n <= 0 || s.grid.size() != static_cast<std::size_t>(s.n) * s.n)
    throw std::invalid_argument("shift_scene: malformed scene");
  const int n = s.n;
  long ddx = static_cast<long>(motion.dx) * steps;
  long ddy = static_cast<long>(motion.dy) * steps;
  Scene out;
  out.n = n;
  out.grid.assign(s.grid.size(), 0.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      long src_r = r - ddy;
      long src_c = c - ddx;
      if (motion.wrap) {
        src_r = ((src_r % n) + n) % n;
        src_c = ((src_c % n) + n) % n;
      } else if (src_r < 0 || src_r >= n || src_c < 0 || src_c >= n) {
        continue;
      }
      out.at(r, c) = s.at(static_cast<int>(src_r), static_cast<int>(src_c));
    }
  }
  return out;
}

Scene load_scene_pgm(const std::filesystem::path& path) {
  io::PgmImage img = io::read_pgm_file(path);
  if (img.width != img.height)
    throw std::invalid_argument("load_scene_pgm: scene must be square, got " +
                                std::to_string(img.width) + "x" +
                                std::to_string(img.height));
  Scene s;
  s.n = img.width;
  s.grid.resize(img.pixels.size());
  const double scale = 1.0 / img.maxval;
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    s.grid[i] = img.pixels[i] * scale;
  return s;
}

}  // namespace fbgi::scene
