#pragma once

// Netpbm grayscale (PGM) reading and writing, 8-bit only.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "holo/error.hpp"
#include "holo/image.hpp"

namespace holo {

namespace pgm_detail {

class HeaderScanner {
 public:
  explicit HeaderScanner(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long next_uint(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
      throw ParseError(std::string("PGM: expected ") + what);
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) throw ParseError(std::string("PGM: ") + what + " too large");
      ++pos_;
    }
    return value;
  }

  std::size_t& pos() { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace pgm_detail

/// Parses a binary (P5) or ASCII (P2) PGM with maxval <= 255.
/// Samples are taken as-is, without rescaling to the maxval.
inline Image read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2'))
    throw ParseError("PGM: missing P5/P2 magic");
  const bool binary = bytes[1] == '5';

  pgm_detail::HeaderScanner scan(bytes);
  scan.pos() = 2;
  if (scan.pos() < bytes.size() && !std::isspace(bytes[scan.pos()]) && bytes[scan.pos()] != '#')
    throw ParseError("PGM: malformed magic");
  const long width = scan.next_uint("width");
  const long height = scan.next_uint("height");
  const long maxval = scan.next_uint("maxval");
  if (width < 1 || height < 1) throw ParseError("PGM: dimensions must be positive");
  if (maxval < 1) throw ParseError("PGM: maxval must be positive");
  if (maxval > 255) throw UnsupportedFormat("PGM: maxval > 255 is not supported");
  if (width > 65535 || height > 65535) throw UnsupportedFormat("PGM: dimensions exceed 65535");

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> samples;
  samples.reserve(count);

  if (binary) {
    std::size_t& pos = scan.pos();
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw ParseError("PGM: missing whitespace after maxval");
    ++pos;
    if (bytes.size() - pos < count) throw ParseError("PGM: truncated pixel data");
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = bytes[pos + i];
      if (v > maxval) throw ParseError("PGM: sample exceeds maxval");
      samples.push_back(static_cast<double>(v));
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      long v = 0;
      try {
        v = scan.next_uint("sample");
      } catch (const ParseError&) {
        throw ParseError("PGM: truncated or malformed ASCII pixel data");
      }
      if (v > maxval) throw ParseError("PGM: sample exceeds maxval");
      samples.push_back(static_cast<double>(v));
    }
  }
  return Image(static_cast<int>(height), static_cast<int>(width), std::move(samples));
}

/// Quantizes one sample to a byte: clamp to [0, 255], round half away from zero.
inline std::uint8_t to_byte(double v) {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::round(v));
}

/// Serializes as binary P5 with maxval 255.
inline std::vector<std::uint8_t> write_pgm(const Image& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + img.size());
  for (double v : img) out.push_back(to_byte(v));
  return out;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidInput("write failed for " + path.string());
}

inline Image load_pgm(const std::filesystem::path& path) { return read_pgm(read_file_bytes(path)); }

inline void save_pgm(const std::filesystem::path& path, const Image& img) { write_file_bytes(path, write_pgm(img)); }

}  // namespace holo
