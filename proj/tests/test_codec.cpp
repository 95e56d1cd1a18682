#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <queue>
#include <random>
#include <vector>

#include "holo/any_codec.hpp"
#include "holo/codec.hpp"
#include "holo/dct.hpp"
#include "holo/external_codec.hpp"
#include "holo/huffman.hpp"
#include "holo/pgm.hpp"
#include "holo/rate.hpp"
#include "holo/shift.hpp"
#include "oracles.hpp"

using namespace holo;

namespace {

const Image& camera() {
  static const Image img = load_pgm(oracle::data_path("camera256.pgm"));
  return img;
}

// Cost of an optimal prefix code, by the classic merge-two-smallest rule.
std::uint64_t optimal_code_cost(const std::map<std::uint16_t, std::uint64_t>& freq) {
  if (freq.size() == 1) return freq.begin()->second;
  std::priority_queue<std::uint64_t, std::vector<std::uint64_t>, std::greater<>> q;
  for (const auto& [s, f] : freq) q.push(f);
  std::uint64_t cost = 0;
  while (q.size() > 1) {
    const auto a = q.top();
    q.pop();
    const auto b = q.top();
    q.pop();
    cost += a + b;
    q.push(a + b);
  }
  return cost;
}

}  // namespace

TEST(Dct, MatchesNaiveDefinition) {
  std::mt19937 rng(11);
  for (int n : {2, 5, 8}) {
    std::vector<double> in(n * n), out(n * n), back(n * n);
    std::uniform_real_distribution<double> d(-128, 128);
    for (double& v : in) v = d(rng);
    BlockDct dct(n);
    dct.forward(in, out);
    const auto ref = oracle::naive_dct2(in, n);
    for (int i = 0; i < n * n; ++i) EXPECT_NEAR(out[i], ref[i], 1e-9);
    dct.inverse(out, back);
    for (int i = 0; i < n * n; ++i) EXPECT_NEAR(back[i], in[i], 1e-9);
  }
}

TEST(Dct, ZigzagOrder) {
  EXPECT_EQ(zigzag_order(4), (std::vector<int>{0, 1, 4, 8, 5, 2, 3, 6, 9, 12, 13, 10, 7, 11, 14, 15}));
  auto z8 = zigzag_order(8);
  std::sort(z8.begin(), z8.end());
  for (int i = 0; i < 64; ++i) EXPECT_EQ(z8[i], i);
}

TEST(Huffman, LengthsAreOptimalAndPrefixFree) {
  std::mt19937 rng(12);
  for (int t = 0; t < 30; ++t) {
    std::map<std::uint16_t, std::uint64_t> freq;
    std::uniform_int_distribution<int> count(1, 60);
    std::geometric_distribution<int> weight(0.05);
    const int n = count(rng);
    while (static_cast<int>(freq.size()) < n) freq[static_cast<std::uint16_t>(rng() % 4000)] = 1 + weight(rng);
    const auto table = huffman::build_lengths(freq);
    ASSERT_EQ(table.size(), freq.size());
    double kraft = 0;
    std::uint64_t cost = 0;
    for (const auto& e : table) {
      kraft += std::ldexp(1.0, -e.length);
      cost += freq.at(e.symbol) * e.length;
    }
    EXPECT_LE(kraft, 1.0);
    EXPECT_EQ(cost, optimal_code_cost(freq));
    EXPECT_NO_THROW(huffman::Decoder{table});
  }
}

TEST(Huffman, StreamRoundTrip) {
  std::mt19937 rng(13);
  std::vector<std::uint16_t> stream;
  std::map<std::uint16_t, std::uint64_t> freq;
  std::geometric_distribution<int> sym(0.2);
  for (int i = 0; i < 5000; ++i) {
    const auto s = static_cast<std::uint16_t>(sym(rng) * 7);
    stream.push_back(s);
    ++freq[s];
  }
  const auto table = huffman::build_lengths(freq);
  huffman::Encoder enc(table);
  BitWriter w;
  for (auto s : stream) enc.write(w, s);
  const auto bytes = w.finish();
  huffman::Decoder dec(table);
  BitReader<DecodeError> r(bytes);
  for (auto s : stream) ASSERT_EQ(dec.read(r), s);
}

TEST(Huffman, SingleSymbol) {
  const auto table = huffman::build_lengths({{42, 10}});
  ASSERT_EQ(table.size(), 1u);
  EXPECT_EQ(table[0].length, 1);
}

TEST(Huffman, DecoderRejectsBadTables) {
  using E = huffman::CodeEntry;
  EXPECT_THROW(huffman::Decoder(std::vector<E>{}), DecodeError);
  EXPECT_THROW(huffman::Decoder(std::vector<E>{{1, 1}, {2, 1}, {3, 1}}), DecodeError);
  EXPECT_THROW(huffman::Decoder(std::vector<E>{{2, 1}, {1, 1}}), DecodeError);
  EXPECT_THROW(huffman::Decoder(std::vector<E>{{1, 2}, {2, 1}}), DecodeError);
  EXPECT_THROW(huffman::Decoder(std::vector<E>{{1, 0}}), DecodeError);
  EXPECT_THROW(huffman::Decoder(std::vector<E>{{1, 60}}), DecodeError);
  EXPECT_THROW(huffman::Decoder(std::vector<E>{{5, 1}, {5, 2}}), DecodeError);
}

TEST(Codec, Quantizer) {
  EXPECT_EQ(quantize(2.5, 1.0), 3);
  EXPECT_EQ(quantize(-2.5, 1.0), -3);
  EXPECT_EQ(quantize(4.9, 10.0), 0);
  EXPECT_EQ(quantize(-15.0, 10.0), -2);
  EXPECT_THROW(quantize(1e300, 1e-9), InvalidInput);
}

TEST(Codec, ConstantImageIsExact) {
  const Image img(8, 8, 128.0);
  const Packet p = compress(img, {CodecId::InternalBlockDCT, 10.0, 8});
  EXPECT_EQ(decompress(p), img);
  EXPECT_EQ(p.bit_cost(), 8 * static_cast<std::int64_t>(p.bytes.size()));

  const Image other(13, 21, 77.0);
  const Image back = decompress(compress(other, {CodecId::InternalBlockDCT, 1.0, 8}));
  ASSERT_EQ(back.dims(), other.dims());
  for (double v : back) EXPECT_NEAR(v, 77.0, 1e-9);
}

TEST(Codec, Deterministic) {
  const InternalCodec c(8);
  EXPECT_EQ(c.compress(camera(), 20.0).bytes, c.compress(camera(), 20.0).bytes);
}

TEST(Codec, NearLosslessAtTinyTheta) {
  std::mt19937 rng(14);
  const Image img = oracle::random_image(32, 32, rng);
  const Image back = decompress(compress(img, {CodecId::InternalBlockDCT, 1e-6, 8}));
  EXPECT_GE(psnr(img, back), 50.0);

  // Unquantized transform round trip for comparison.
  std::vector<double> tile(64), coef, rec(64);
  BlockDct dct(8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) tile[r * 8 + c] = img(r, c) - 128.0;
  coef = oracle::naive_dct2(tile, 8);
  dct.inverse(coef, rec);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) {
      EXPECT_NEAR(rec[r * 8 + c] + 128.0, img(r, c), 1e-9);
      EXPECT_NEAR(back(r, c), img(r, c), 1e-5);
    }
}

TEST(Codec, OddSizesAndBlockSizes) {
  std::mt19937 rng(15);
  for (int n : {2, 3, 8, 16}) {
    const Image img = oracle::random_image(19, 7, rng);
    const InternalCodec c(n);
    const Image back = c.decompress(c.compress(img, 0.01));
    ASSERT_EQ(back.dims(), img.dims());
    EXPECT_GE(psnr(img, back), 50.0);
  }
  EXPECT_THROW(InternalCodec(1), InvalidConfig);
  EXPECT_THROW(InternalCodec(17), InvalidConfig);
}

TEST(Codec, QuantizerFixedPoint) {
  const InternalCodec c(8);
  for (double theta : {4.0, 25.0, 160.0}) {
    const Packet p1 = c.compress(camera(), theta);
    const Image y1 = c.decompress(p1);
    // Coefficients of a decoded tile sit on the quantizer lattice.
    std::vector<double> tile(64);
    for (int r = 0; r < 8; ++r)
      for (int col = 0; col < 8; ++col) tile[r * 8 + col] = y1(40 + r, 96 + col) - 128.0;
    for (double coef : oracle::naive_dct2(tile, 8))
      EXPECT_NEAR(coef / theta, std::round(coef / theta), 1e-6);

    const Packet p2 = c.compress(y1, theta);
    EXPECT_EQ(p2.bytes, p1.bytes);
    EXPECT_EQ(c.decompress(p2), y1);
  }
}

TEST(Codec, HeaderLayout) {
  const Packet p = compress(Image(3, 5, 10.0), {CodecId::InternalBlockDCT, 2.5, 4});
  ASSERT_GE(p.bytes.size(), 19u);
  EXPECT_EQ(std::string(p.bytes.begin(), p.bytes.begin() + 4), "HPK1");
  EXPECT_EQ(p.bytes[4], 0);
  EXPECT_EQ((p.bytes[5] << 8) | p.bytes[6], 3);
  EXPECT_EQ((p.bytes[7] << 8) | p.bytes[8], 5);
  EXPECT_EQ((p.bytes[9] << 8) | p.bytes[10], 4);
  EXPECT_EQ(packet_theta(p), 2.5);
}

TEST(Codec, TruncationAndCorruption) {
  const Packet p = InternalCodec(8).compress(camera(), 30.0);
  for (std::size_t len : {std::size_t{0}, std::size_t{3}, std::size_t{12}, std::size_t{20}, p.bytes.size() / 2,
                          p.bytes.size() - 1}) {
    Packet cut{{p.bytes.begin(), p.bytes.begin() + static_cast<long>(len)}};
    EXPECT_THROW(decompress(cut), DecodeError) << "length " << len;
  }
  Packet bad = p;
  bad.bytes[0] = 'X';
  EXPECT_THROW(decompress(bad), DecodeError);
  bad = p;
  bad.bytes[10] = 40;  // block size
  EXPECT_THROW(decompress(bad), DecodeError);
}

TEST(Codec, InvalidArguments) {
  EXPECT_THROW(compress(Image(), {CodecId::InternalBlockDCT, 1.0, 8}), InvalidInput);
  EXPECT_THROW(compress(Image(2, 2), {CodecId::InternalBlockDCT, 0.0, 8}), InvalidConfig);
  EXPECT_THROW(compress(Image(2, 2), {CodecId::InternalBlockDCT, 1.0, 1}), InvalidConfig);
}

TEST(Codec, RateIsMonotoneInTheta) {
  const InternalCodec c(8);
  std::int64_t prev = c.compress(camera(), 1.0).bit_cost();
  const std::int64_t first = prev;
  int increases = 0;
  for (double theta = 1.25; theta < 2000.0; theta *= 1.25) {
    const std::int64_t bits = c.compress(camera(), theta).bit_cost();
    if (bits > prev) ++increases;
    EXPECT_LE(bits, prev + prev / 50) << "theta " << theta;
    prev = bits;
  }
  EXPECT_LE(increases, 3);
  EXPECT_LT(prev, first / 10);
}

TEST(Codec, ShiftSensitivity) {
  const InternalCodec c(8);
  const double theta = compress_to_ratio(camera(), 50, c).theta;
  const ShiftSpec s{3, 3, ShiftMode::ReplicatePad};
  const Image plain = c.decompress(c.compress(camera(), theta));
  const Image shifted = apply_inverse_shift(c.decompress(c.compress(apply_shift(camera(), s), theta)), s, camera().dims());
  std::size_t differ = 0;
  for (std::size_t i = 0; i < plain.size(); ++i)
    if (std::abs(plain[i] - shifted[i]) > 1e-9) ++differ;
  EXPECT_GE(static_cast<double>(differ), 0.01 * static_cast<double>(plain.size()));
}

TEST(Rate, BudgetAtStandardRatios) {
  for (const char* name : {"camera256.pgm", "coins256.pgm"}) {
    const Image img = load_pgm(oracle::data_path(name));
    for (double ratio : {25.0, 50.0}) {
      const auto res = compress_to_ratio(img, ratio, CodecParams{});
      const double budget = ratio_bit_budget(img.size(), ratio);
      EXPECT_LE(res.packet.bit_cost(), budget) << name << " ratio " << ratio;
      EXPECT_GE(res.packet.bit_cost(), 0.5 * budget) << name << " ratio " << ratio;
      EXPECT_EQ(res.theta, packet_theta(res.packet));
    }
  }
  EXPECT_NEAR(ratio_bit_budget(256 * 256, 50), 10485.76, 1e-9);
}

TEST(Rate, SearchIsTight) {
  const InternalCodec c(8);
  const auto res = compress_to_ratio(camera(), 50, c);
  const double budget = ratio_bit_budget(camera().size(), 50);
  // One step finer than the returned theta overshoots the budget.
  EXPECT_GT(c.compress(camera(), res.theta / 1.05 / 1.05).bit_cost(), budget);
}

TEST(Rate, NearLosslessConstant) {
  const Image img(16, 16, 128.0);
  const auto res = compress_to_ratio(img, 1.0001, CodecParams{});
  EXPECT_EQ(decompress(res.packet), img);
}

TEST(Rate, Errors) {
  EXPECT_THROW(compress_to_ratio(Image(2, 2, 3.0), 50.0, CodecParams{}), RateError);
  EXPECT_THROW(compress_to_ratio(camera(), 1.0, CodecParams{}), InvalidConfig);
  EXPECT_THROW(compress_to_ratio(camera(), 50.0, CodecParams{CodecId::External, 50.0, 8}), InvalidConfig);
}

TEST(External, CopyToolIsIdentity) {
  std::mt19937 rng(16);
  const Image img = oracle::random_byte_image(9, 11, rng);
  const auto [pkt, back] =
      external_codec_roundtrip(img, {CodecId::External, 50.0, 8}, "cp {in} {out}", "cp {in} {out}");
  EXPECT_EQ(back, img);
  EXPECT_EQ(pkt.bytes, write_pgm(img));
}

TEST(External, RatioPlaceholder) {
  const ExternalCodec c({"echo {ratio} > {out}", "cp {in} {out}"});
  const Packet p = c.compress(Image(2, 2), 37.5);
  EXPECT_EQ(std::string(p.bytes.begin(), p.bytes.end()), "37.5\n");
}

TEST(External, FailuresCarryDiagnostics) {
  const Image img(4, 4, 9.0);
  EXPECT_THROW(external_codec_roundtrip(img, {CodecId::External, 50.0, 8}, "false", "cp {in} {out}"),
               ExternalCodecError);
  EXPECT_THROW(external_codec_roundtrip(img, {CodecId::External, 50.0, 8}, "true", "cp {in} {out}"),
               ExternalCodecError);
  EXPECT_THROW(external_codec_roundtrip(img, {CodecId::External, 50.0, 8}, "cp {in} {out}", "echo junk > {out}"),
               ExternalCodecError);
  try {
    ExternalCodec({"echo boom >&2; exit 3", "cp {in} {out}"}).compress(img, 50.0);
    FAIL() << "expected ExternalCodecError";
  } catch (const ExternalCodecError& e) {
    EXPECT_NE(e.diagnostics().find("boom"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("status 3"), std::string::npos);
  }
}

TEST(External, CodecSelectionFromEnvironment) {
  ::unsetenv("HOLO_EXT_ENCODE");
  ::unsetenv("HOLO_EXT_DECODE");
  EXPECT_THROW(Codec::for_params({CodecId::External, 50.0, 8}), InvalidConfig);
  ::setenv("HOLO_EXT_ENCODE", "cp {in} {out}", 1);
  ::setenv("HOLO_EXT_DECODE", "cp {in} {out}", 1);
  const Codec c = Codec::for_params({CodecId::External, 50.0, 8});
  EXPECT_EQ(c.id(), CodecId::External);
  const Image img(3, 3, 200.0);
  EXPECT_EQ(c.decompress(c.compress(img, 50.0)), img);
  EXPECT_EQ(c.compress_to_ratio(img, 20.0).theta, 20.0);
  ::unsetenv("HOLO_EXT_ENCODE");
  ::unsetenv("HOLO_EXT_DECODE");
}
