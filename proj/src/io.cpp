// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#include "fbgi/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace fbgi::io {

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  return fnv1a64(bytes.data(), bytes.size());
}

void atomic_write_file(const std::filesystem::path& path,
                       std::string_view bytes) {
  std::filesystem::path dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot open for write: " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return bytes;
}

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string encode_pgm(const PgmImage& img) {
  if (img.width <= 0 || img.height <= 0 || img.maxval < 1 || img.maxval > 255)
    throw std::invalid_argument("encode_pgm: bad dimensions or maxval");
  if (img.pixels.size() !=
      static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height))
    throw std::invalid_argument("encode_pgm: pixel count mismatch");
  std::string out = "P5\n" + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n" +
                    std::to_string(img.maxval) + "\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()),
             img.pixels.size());
  return out;
}

namespace {

// Skips PGM whitespace and '#' comments, then parses a decimal field.
int parse_pgm_int(std::string_view bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    char c = bytes[pos];
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
    throw std::invalid_argument("decode_pgm: malformed header");
  long v = 0;
  while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
    v = v * 10 + (bytes[pos] - '0');
    if (v > 1 << 20) throw std::invalid_argument("decode_pgm: field too large");
    ++pos;
  }
  return static_cast<int>(v);
}

}  // namespace

PgmImage decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    throw std::invalid_argument("decode_pgm: not a binary PGM (P5)");
  std::size_t pos = 2;
  PgmImage img;
  img.width = parse_pgm_int(bytes, pos);
  img.height = parse_pgm_int(bytes, pos);
  img.maxval = parse_pgm_int(bytes, pos);
  if (img.width <= 0 || img.height <= 0 || img.maxval < 1 || img.maxval > 255)
    throw std::invalid_argument("decode_pgm: bad dimensions or maxval");
  ++pos;  // single whitespace byte after maxval
  std::size_t need =
      static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  if (pos + need > bytes.size())
    throw std::invalid_argument("decode_pgm: truncated pixel data");
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return img;
}

PgmImage read_pgm_file(const std::filesystem::path& path) {
  return decode_pgm(read_file(path));
}

void write_pgm_file(const std::filesystem::path& path, const PgmImage& img) {
  atomic_write_file(path, encode_pgm(img));
}

}  // namespace fbgi::io
