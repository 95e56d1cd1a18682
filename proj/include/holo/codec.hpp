#pragma once

// Block-transform image codec used as the black-box compressor.
//
// Packet layout (all integers big-endian):
//   "HPK1"  u8 codec_id  u16 height  u16 width  u16 block_size  f64 theta
//   u16 table_count  table_count x (u16 symbol, u8 code_length)
//   payload bitstream, MSB first, zero padded to a byte boundary
//
// Payload: tiles in raster order. Per tile, the DC difference to the previous
// tile's quantized DC is coded as symbol DC(size) plus `size` amplitude bits,
// then AC coefficients in zigzag order as AC(run, size) plus amplitude bits,
// terminated by EOB unless the last coefficient is nonzero.

#include <array>
#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "holo/bytes.hpp"
#include "holo/dct.hpp"
#include "holo/error.hpp"
#include "holo/huffman.hpp"
#include "holo/image.hpp"

namespace holo {

enum class CodecId : std::uint8_t { InternalBlockDCT = 0, External = 1 };

/// `theta` is the quantizer step for the internal codec and the compression
/// ratio handed to an external tool.
struct CodecParams {
  CodecId codec_id = CodecId::InternalBlockDCT;
  double theta = 1.0;
  int block_size = 8;

  void validate() const {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw InvalidConfig("codec theta must be positive and finite");
    if (codec_id == CodecId::InternalBlockDCT && (block_size < 2 || block_size > 16))
      throw InvalidConfig("block size must be in [2, 16]");
  }

  friend bool operator==(const CodecParams&, const CodecParams&) = default;
};

struct Packet {
  std::vector<std::uint8_t> bytes;

  std::int64_t bit_cost() const { return 8 * static_cast<std::int64_t>(bytes.size()); }

  friend bool operator==(const Packet&, const Packet&) = default;
};

/// Anything usable as the standard compressor/decompressor pair.
template <class C>
concept ImageCodec = requires(const C& codec, const Image& img, const Packet& pkt, double theta) {
  { codec.compress(img, theta) } -> std::same_as<Packet>;
  { codec.decompress(pkt) } -> std::same_as<Image>;
};

namespace codec_detail {

inline constexpr std::array<std::uint8_t, 4> kMagic = {'H', 'P', 'K', '1'};
inline constexpr std::uint16_t kEob = 0;
inline constexpr int kMaxSize = 62;

inline std::uint16_t dc_symbol(int size) { return static_cast<std::uint16_t>(1 + size); }
inline std::uint16_t ac_symbol(int run, int size) { return static_cast<std::uint16_t>(64 + run * 64 + size); }

inline int magnitude_size(std::int64_t v) {
  return v == 0 ? 0 : static_cast<int>(std::bit_width(static_cast<std::uint64_t>(v < 0 ? -v : v)));
}

// JPEG-style amplitude bits: negatives are stored as v + 2^size - 1.
inline std::uint64_t amplitude_bits(std::int64_t v, int size) {
  if (v >= 0) return static_cast<std::uint64_t>(v);
  return static_cast<std::uint64_t>(v + ((std::int64_t{1} << size) - 1));
}

inline std::int64_t amplitude_value(std::uint64_t bits, int size) {
  if (size == 0) return 0;
  if (bits >> (size - 1)) return static_cast<std::int64_t>(bits);
  return static_cast<std::int64_t>(bits) - ((std::int64_t{1} << size) - 1);
}

struct Token {
  std::uint16_t symbol;
  std::uint64_t extra;
  int extra_bits;
};

}  // namespace codec_detail

/// Dead-zone uniform quantizer: round(c / theta), ties away from zero.
inline std::int64_t quantize(double coefficient, double theta) {
  const double q = std::round(coefficient / theta);
  if (!(std::abs(q) < 0x1p62)) throw InvalidInput("quantized coefficient out of range; theta too small");
  return static_cast<std::int64_t>(q);
}

class InternalCodec {
 public:
  explicit InternalCodec(int block_size = 8) : block_size_(block_size) {
    if (block_size < 2 || block_size > 16) throw InvalidConfig("block size must be in [2, 16]");
  }

  int block_size() const { return block_size_; }

  Packet compress(const Image& img, double theta) const {
    using namespace codec_detail;
    if (img.empty()) throw InvalidInput("cannot compress an empty image");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw InvalidConfig("codec theta must be positive and finite");
    if (img.height() > 65535 || img.width() > 65535) throw InvalidInput("image too large for packet header");

    const int n = block_size_;
    const std::size_t area = static_cast<std::size_t>(n) * n;
    const auto zz = zigzag_order(n);
    BlockDct dct(n);
    std::vector<double> tile(area), coef(area);
    std::vector<std::int64_t> levels(area);

    std::vector<Token> tokens;
    std::map<std::uint16_t, std::uint64_t> freq;
    auto emit = [&](std::uint16_t sym, std::uint64_t extra, int bits) {
      tokens.push_back({sym, extra, bits});
      ++freq[sym];
    };

    std::int64_t prev_dc = 0;
    const int h = img.height();
    const int w = img.width();
    for (int by = 0; by < h; by += n) {
      for (int bx = 0; bx < w; bx += n) {
        for (int r = 0; r < n; ++r) {
          const int sr = std::min(by + r, h - 1);
          for (int c = 0; c < n; ++c) tile[r * n + c] = img(sr, std::min(bx + c, w - 1)) - 128.0;
        }
        dct.forward(tile, coef);
        for (std::size_t k = 0; k < area; ++k) levels[k] = quantize(coef[zz[k]], theta);

        const std::int64_t diff = levels[0] - prev_dc;
        prev_dc = levels[0];
        const int dc_size = magnitude_size(diff);
        if (dc_size > kMaxSize) throw InvalidInput("DC difference out of range");
        emit(dc_symbol(dc_size), amplitude_bits(diff, dc_size), dc_size);

        int run = 0;
        for (std::size_t k = 1; k < area; ++k) {
          if (levels[k] == 0) {
            ++run;
            continue;
          }
          const int size = magnitude_size(levels[k]);
          emit(ac_symbol(run, size), amplitude_bits(levels[k], size), size);
          run = 0;
        }
        if (run > 0) emit(kEob, 0, 0);
      }
    }

    const auto table = huffman::build_lengths(freq);
    huffman::Encoder enc(table);
    BitWriter bits;
    for (const auto& t : tokens) {
      enc.write(bits, t.symbol);
      bits.put(t.extra, t.extra_bits);
    }

    ByteWriter out;
    out.raw(kMagic);
    out.u8(static_cast<std::uint8_t>(CodecId::InternalBlockDCT));
    out.u16(static_cast<std::uint16_t>(h));
    out.u16(static_cast<std::uint16_t>(w));
    out.u16(static_cast<std::uint16_t>(n));
    out.f64(theta);
    out.u16(static_cast<std::uint16_t>(table.size()));
    for (const auto& e : table) {
      out.u16(e.symbol);
      out.u8(e.length);
    }
    out.raw(bits.finish());
    return Packet{out.take()};
  }

  Image decompress(const Packet& pkt) const { return decompress_internal(pkt); }

  /// Decoding needs nothing but the packet, so it is usable without a codec
  /// instance.
  static Image decompress_internal(const Packet& pkt) {
    using namespace codec_detail;
    ByteReader<DecodeError> in(pkt.bytes);
    if (!in.tag({reinterpret_cast<const char*>(kMagic.data()), kMagic.size()}))
      throw DecodeError("bad packet magic");
    if (in.u8() != static_cast<std::uint8_t>(CodecId::InternalBlockDCT)) throw DecodeError("not an internal-codec packet");
    const int h = in.u16();
    const int w = in.u16();
    const int n = in.u16();
    const double theta = in.f64();
    if (h < 1 || w < 1) throw DecodeError("bad packet dimensions");
    if (n < 2 || n > 16) throw DecodeError("bad block size");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DecodeError("bad theta");

    const int table_count = in.u16();
    std::vector<huffman::CodeEntry> table(table_count);
    for (auto& e : table) {
      e.symbol = in.u16();
      e.length = in.u8();
    }
    const huffman::Decoder dec(table);
    BitReader<DecodeError> bits(in.rest());

    const std::size_t area = static_cast<std::size_t>(n) * n;
    const auto zz = zigzag_order(n);
    BlockDct dct(n);
    std::vector<double> coef(area), tile(area);
    Image out(h, w);
    std::int64_t prev_dc = 0;

    for (int by = 0; by < h; by += n) {
      for (int bx = 0; bx < w; bx += n) {
        std::fill(coef.begin(), coef.end(), 0.0);
        const std::uint16_t dc_sym = dec.read(bits);
        if (dc_sym < 1 || dc_sym > 1 + kMaxSize) throw DecodeError("expected DC symbol");
        const int dc_size = dc_sym - 1;
        prev_dc += amplitude_value(bits.get(dc_size), dc_size);
        coef[zz[0]] = static_cast<double>(prev_dc) * theta;

        std::size_t k = 1;
        while (k < area) {
          const std::uint16_t sym = dec.read(bits);
          if (sym == kEob) break;
          if (sym < 64) throw DecodeError("unexpected DC symbol in AC position");
          const int run = (sym - 64) / 64;
          const int size = (sym - 64) % 64;
          if (size < 1 || size > kMaxSize) throw DecodeError("bad AC size");
          k += static_cast<std::size_t>(run);
          if (k >= area) throw DecodeError("AC run overflows block");
          coef[zz[k]] = static_cast<double>(amplitude_value(bits.get(size), size)) * theta;
          ++k;
        }

        dct.inverse(coef, tile);
        for (int r = 0; r < n && by + r < h; ++r)
          for (int c = 0; c < n && bx + c < w; ++c) out(by + r, bx + c) = tile[r * n + c] + 128.0;
      }
    }
    return out;
  }

 private:
  int block_size_;
};

/// Internal-codec shorthands.
inline Packet compress(const Image& img, const CodecParams& p) {
  p.validate();
  if (p.codec_id != CodecId::InternalBlockDCT)
    throw InvalidConfig("compress(Image, CodecParams) handles the internal codec; use an ExternalCodec instance");
  return InternalCodec(p.block_size).compress(img, p.theta);
}

inline Image decompress(const Packet& pkt) { return InternalCodec::decompress_internal(pkt); }

/// Reads theta back out of an internal packet header.
inline double packet_theta(const Packet& pkt) {
  ByteReader<DecodeError> in(pkt.bytes);
  in.raw(4 + 1 + 2 + 2 + 2);
  return in.f64();
}

}  // namespace holo
