// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FBGI_SCENE_HPP
#define FBGI_SCENE_HPP

#include <filesystem>
#include <vector>

namespace fbgi::scene {

// Transmissive object on an n x n grid; values in [0, 1] where 1 passes
// light fully and 0 blocks it.
struct Scene {
  int n = 0;
  std::vector<double> grid;  // row-major, n*n

  double at(int r, int c) const { return grid[static_cast<std::size_t>(r) * n + c]; }
  double& at(int r, int c) { return grid[static_cast<std::size_t>(r) * n + c]; }
};

// Rigid shift applied between exposure windows: window w sees the scene
// displaced by (w*dx, w*dy) pixels. wrap selects toroidal wrap-around;
// otherwise vacated pixels fill with 0.
struct MotionDescriptor {
  int dx = 0;
  int dy = 0;
  bool wrap = true;
};

// Block letter X, J, T or U rendered onto an n x n grid (n >= 7) by
// nearest-neighbor upscale of a 7x7 stencil. Strokes are transmissive (1),
// background opaque (0).
Scene letter_stencil(char letter, int n);

// Scene shifted by steps applications of the descriptor.
Scene shift_scene(const Scene& s, const MotionDescriptor& motion, int steps);

// Grayscale PGM load; pixel values map linearly onto [0, 1] (maxval -> 1).
Scene load_scene_pgm(const std::filesystem::path& path);

}  // namespace fbgi::scene

#endif
