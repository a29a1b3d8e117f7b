// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FBGI_IO_HPP
#define FBGI_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fbgi::io {

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(std::string_view bytes);

// Writes via temp file + rename so readers never observe partial content.
void atomic_write_file(const std::filesystem::path& path,
                       std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint8_t> pixels;  // row-major
};

std::string encode_pgm(const PgmImage& img);
PgmImage decode_pgm(std::string_view bytes);
PgmImage read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const std::filesystem::path& path, const PgmImage& img);

}  // namespace fbgi::io

#endif
