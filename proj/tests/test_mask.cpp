// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "fbgi/hadamard.hpp"
#include "fbgi/io.hpp"
#include "fbgi/mask.hpp"

namespace m = fbgi::mask;

TEST_CASE("hadamard rows are mutually orthogonal") {
  for (int order : {1, 2, 4, 8, 64}) {
    m::HadamardMatrix h = m::hadamard_matrix(order);
    REQUIRE(h.order == order);
    for (int c = 0; c < order; ++c) {
      CHECK(h.at(0, c) == 1);  // normalized: all-ones first row
      CHECK(h.at(c, 0) == 1);
    }
    for (int r = 0; r < order; ++r) {
      for (int s = r; s < order; ++s) {
        long dot = 0;
        for (int c = 0; c < order; ++c)
          dot += static_cast<long>(h.at(r, c)) * h.at(s, c);
        CHECK(dot == (r == s ? order : 0));
      }
    }
  }
  CHECK_THROWS_AS(m::hadamard_matrix(3), std::invalid_argument);
  CHECK_THROWS_AS(m::hadamard_matrix(0), std::invalid_argument);
  CHECK_THROWS_AS(m::hadamard_matrix(-4), std::invalid_argument);
}

TEST_CASE("s-matrix structure: symmetry, row weight, gram matrix, inverse") {
  for (int order : {1, 3, 7, 15}) {
    m::SMatrix s = m::s_matrix(order);
    REQUIRE(s.order == order);
    const int w = (order + 1) / 2;
    CHECK(s.ones_per_row() == w);
    for (int r = 0; r < order; ++r) {
      int ones = 0;
      for (int c = 0; c < order; ++c) {
        CHECK(s.at(r, c) == s.at(c, r));
        ones += s.at(r, c);
      }
      CHECK(ones == w);
    }
    // S'S = ((order+1)/4) * (I + J) for order >= 3; order 1 gives S = [1].
    for (int a = 0; a < order; ++a) {
      for (int b = 0; b < order; ++b) {
        long dot = 0;
        for (int r = 0; r < order; ++r)
          dot += static_cast<long>(s.at(r, a)) * s.at(r, b);
        const long expect =
            order == 1 ? 1 : ((order + 1) / 4) * (a == b ? 2 : 1);
        CHECK(dot == expect);
      }
    }
    // inv(S) = (2/(order+1)) (2S' - J): check (2S' - J) S = ((order+1)/2) I.
    for (int a = 0; a < order; ++a) {
      for (int b = 0; b < order; ++b) {
        long v = 0;
        for (int r = 0; r < order; ++r)
          v += (2l * s.at(r, a) - 1) * s.at(r, b);
        CHECK(v == (a == b ? (order + 1) / 2 : 0));
      }
    }
  }
  CHECK_THROWS_AS(m::s_matrix(4), std::invalid_argument);
  CHECK_THROWS_AS(m::s_matrix(0), std::invalid_argument);
}

TEST_CASE("block contrast is an exact reduced fraction") {
  m::Rational c7 = m::hadamard_block_contrast(7);
  CHECK(c7.num == 1);
  CHECK(c7.den == 8);
  CHECK(c7.value() == 0.125);

  m::Rational c1 = m::hadamard_block_contrast(1);
  CHECK(c1.num == -1);
  CHECK(c1.den == 1);

  m::Rational c3 = m::hadamard_block_contrast(3);
  CHECK(c3.num == 1);
  CHECK(c3.den == 1);

  m::Rational c15 = m::hadamard_block_contrast(15);
  CHECK(c15.num == 2);
  CHECK(c15.den == 47);

  for (int nb : {1, 3, 7, 15, 31}) {
    const double direct =
        (1.0 + nb) / (1.0 + static_cast<double>(nb) * (2 * nb - 5));
    CHECK(m::hadamard_block_contrast(nb).value() == direct);
  }
  CHECK_THROWS_AS(m::hadamard_block_contrast(0), std::invalid_argument);
}

TEST_CASE("mask sequence layout and coverage") {
  for (auto [n, kk] : {std::pair{35, 5}, std::pair{6, 2}, std::pair{4, 4}}) {
    m::MaskSequence seq = m::build_mask_sequence(n, kk);
    const int nb = n / kk;
    CHECK(seq.block_width() == nb);
    CHECK(seq.frame_count() == static_cast<long>(n) * n);
    CHECK(seq.segment_count() == static_cast<long>(kk) * n);

    // Every frame lights (nb+1)/2 pixels, all inside its segment.
    const std::size_t grid = static_cast<std::size_t>(n) * n;
    std::vector<long> coverage(grid, 0);
    for (long f = 0; f < seq.frame_count(); ++f) {
      auto fr = seq.frame(f);
      m::FramePosition pos = seq.frame_position(f);
      CHECK(seq.segment_of_frame(f) == static_cast<long>(pos.block) * n + pos.row);
      auto px = seq.segment_pixels(pos.block, pos.row);
      long lit = 0;
      for (std::size_t p = 0; p < grid; ++p) {
        if (!fr[p]) continue;
        ++lit;
        ++coverage[p];
        CHECK(std::find(px.begin(), px.end(), static_cast<long>(p)) != px.end());
      }
      CHECK(lit == (nb + 1) / 2);
      // Lit pixels inside the segment follow the S-matrix row exactly.
      for (int j = 0; j < nb; ++j)
        CHECK(fr[static_cast<std::size_t>(px[static_cast<std::size_t>(j)])] ==
              seq.s().at(pos.s_row, j));
    }
    // One scan covers each pixel exactly (nb+1)/2 times.
    for (long c : coverage) CHECK(c == (nb + 1) / 2);
  }
}

TEST_CASE("frame position round trip follows block-major order") {
  m::MaskSequence seq = m::build_mask_sequence(6, 2);
  long f = 0;
  for (int block = 0; block < 2; ++block)
    for (int row = 0; row < 6; ++row)
      for (int s_row = 0; s_row < 3; ++s_row, ++f) {
        m::FramePosition p = seq.frame_position(f);
        CHECK(p.block == block);
        CHECK(p.row == row);
        CHECK(p.s_row == s_row);
      }
  CHECK_THROWS_AS(seq.frame(36), std::out_of_range);
  CHECK_THROWS_AS(seq.frame(-1), std::out_of_range);
}

TEST_CASE("mask sequence rejects incompatible geometry") {
  CHECK_THROWS_AS(m::build_mask_sequence(6, 3), std::invalid_argument);   // nb=2
  CHECK_THROWS_AS(m::build_mask_sequence(35, 7), std::invalid_argument);  // nb=5
  CHECK_THROWS_AS(m::build_mask_sequence(35, 4), std::invalid_argument);  // 4 | 35
  CHECK_THROWS_AS(m::build_mask_sequence(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(m::build_mask_sequence(8, 0), std::invalid_argument);
}

TEST_CASE("mask export writes frames and a layout manifest") {
  const auto dir = std::filesystem::temp_directory_path() / "fbgi_mask_export";
  std::filesystem::remove_all(dir);
  m::MaskSequence seq = m::build_mask_sequence(4, 4);
  const long written = m::export_mask_sequence(seq, dir);
  CHECK(written == seq.frame_count() + 1);

  fbgi::io::PgmImage img = fbgi::io::read_pgm_file(dir / "frame_000005.pgm");
  CHECK(img.width == 4);
  CHECK(img.height == 4);
  auto fr = seq.frame(5);
  for (std::size_t p = 0; p < fr.size(); ++p)
    CHECK(img.pixels[p] == (fr[p] ? 255 : 0));

  const std::string manifest = fbgi::io::read_file(dir / "mask_manifest.json");
  CHECK(manifest.find("\"N_Block\": 1") != std::string::npos);
  CHECK(manifest.find("\"M\": 16") != std::string::npos);
  std::filesystem::remove_all(dir);
}
