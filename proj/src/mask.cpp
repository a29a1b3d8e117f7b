// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#include "fbgi/mask.hpp"

#include <cstdio>
#include <stdexcept>
#include <string>

#include "fbgi/io.hpp"
#include "json.hpp"

namespace fbgi::mask {

MaskSequence::MaskSequence(int n, int k, SMatrix s)
    : n_(n), k_(k), frame_count_(static_cast<long>(n) * n), s_(std::move(s)) {
  const int nb = s_.order;
  const std::size_t grid = static_cast<std::size_t>(n_) * n_;
  frames_.assign(static_cast<std::size_t>(frame_count_) * grid, 0);
  long f = 0;
  for (int block = 0; block < k_; ++block) {
    for (int row = 0; row < n_; ++row) {
      for (int s_row = 0; s_row < nb; ++s_row, ++f) {
        std::uint8_t* dst = frames_.data() + static_cast<std::size_t>(f) * grid;
        const std::size_t base =
            static_cast<std::size_t>(row) * n_ + static_cast<std::size_t>(block) * nb;
        for (int j = 0; j < nb; ++j) dst[base + j] = s_.at(s_row, j);
      }
    }
  }
}

std::span<const std::uint8_t> MaskSequence::frame(long i) const {
  if (i < 0 || i >= frame_count_)
    throw std::out_of_range("MaskSequence::frame: index " + std::to_string(i));
  const std::size_t grid = static_cast<std::size_t>(n_) * n_;
  return {frames_.data() + static_cast<std::size_t>(i) * grid, grid};
}

FramePosition MaskSequence::frame_position(long i) const {
  if (i < 0 || i >= frame_count_)
    throw std::out_of_range("MaskSequence::frame_position: index " +
                            std::to_string(i));
  const int nb = s_.order;
  const long per_block = static_cast<long>(n_) * nb;
  FramePosition p;
  p.block = static_cast<int>(i / per_block);
  long rem = i % per_block;
  p.row = static_cast<int>(rem / nb);
  p.s_row = static_cast<int>(rem % nb);
  return p;
}

long MaskSequence::segment_of_frame(long i) const {
  FramePosition p = frame_position(i);
  return static_cast<long>(p.block) * n_ + p.row;
}

std::vector<long> MaskSequence::segment_pixels(int block, int row) const {
  if (block < 0 || block >= k_ || row < 0 || row >= n_)
    throw std::out_of_range("MaskSequence::segment_pixels: bad segment");
  const int nb = s_.order;
  std::vector<long> px(static_cast<std::size_t>(nb));
  const long base = static_cast<long>(row) * n_ + static_cast<long>(block) * nb;
  for (int j = 0; j < nb; ++j) px[static_cast<std::size_t>(j)] = base + j;
  return px;
}

MaskSequence build_mask_sequence(int n, int k) {
  if (n < 1) throw std::invalid_argument("build_mask_sequence: n must be >= 1");
  if (k < 1) throw std::invalid_argument("build_mask_sequence: k must be >= 1");
  if (n % k != 0)
    throw std::invalid_argument("build_mask_sequence: k=" + std::to_string(k) +
                                " does not divide n=" + std::to_string(n));
  const int nb = n / k;
  // s_matrix rejects widths where nb + 1 is not a power of two.
  return MaskSequence(n, k, s_matrix(nb));
}

long export_mask_sequence(const MaskSequence& seq,
                          const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  io::PgmImage img;
  img.width = seq.n();
  img.height = seq.n();
  img.maxval = 255;
  char name[32];
  for (long i = 0; i < seq.frame_count(); ++i) {
    auto fr = seq.frame(i);
    img.pixels.assign(fr.size(), 0);
    for (std::size_t p = 0; p < fr.size(); ++p)
      img.pixels[p] = fr[p] ? 255 : 0;
    std::snprintf(name, sizeof name, "frame_%06ld.pgm", i);
    io::write_pgm_file(dir / name, img);
  }
  nlohmann::json manifest;
  manifest["n"] = seq.n();
  manifest["k"] = seq.k();
  manifest["N_Block"] = seq.block_width();
  manifest["M"] = seq.frame_count();
  manifest["frame_order"] =
      "block-major: frame = block*(n*N_Block) + row*N_Block + s_row";
  manifest["pixel_on"] = 255;
  manifest["pixel_off"] = 0;
  io::atomic_write_file(dir / "mask_manifest.json", manifest.dump(2) + "\n");
  return seq.frame_count() + 1;
}

}  // namespace fbgi::mask
