// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FBGI_MASK_HPP
#define FBGI_MASK_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fbgi/hadamard.hpp"

namespace fbgi::mask {

struct FramePosition {
  int block;  // column block, left to right
  int row;    // grid row, top to bottom
  int s_row;  // S-matrix row within the segment
};

// Block-scan mask sequence over an n x n grid split into k column blocks of
// width N = n/k. Frame (block, row, s_row) lights the pixels of grid row
// `row` inside `block` whose S(s_row, j) == 1; all other pixels are dark.
// One scan visits every (block, row) segment with all N S-rows, so the
// sequence holds M = n*n frames ordered block-major, then row, then s_row.
class MaskSequence {
 public:
  MaskSequence(int n, int k, SMatrix s);

  int n() const { return n_; }
  int k() const { return k_; }
  int block_width() const { return s_.order; }
  long frame_count() const { return frame_count_; }
  const SMatrix& s() const { return s_; }

  std::span<const std::uint8_t> frame(long i) const;
  FramePosition frame_position(long i) const;

  // Segments are indexed block * n + row.
  long segment_count() const { return static_cast<long>(k_) * n_; }
  long segment_of_frame(long i) const;
  // Flat pixel indices covered by a segment, in column order.
  std::vector<long> segment_pixels(int block, int row) const;

  int ones_per_row() const { return s_.ones_per_row(); }

 private:
  int n_;
  int k_;
  long frame_count_;
  SMatrix s_;
  std::vector<std::uint8_t> frames_;  // frame_count * n * n, 0/1
};

// Requires k >= 1, k divides n, and n/k + 1 a power of two.
MaskSequence build_mask_sequence(int n, int k);

// Writes one 0/255 PGM per frame plus a manifest JSON describing the layout.
// Returns the number of files written (frames + manifest).
long export_mask_sequence(const MaskSequence& seq,
                          const std::filesystem::path& dir);

}  // namespace fbgi::mask

#endif
