#pragma once

#include <cmath>
#include <cstdint>

#include "holo/codec.hpp"
#include "holo/error.hpp"
#include "holo/image.hpp"

namespace holo {

struct RateSearchResult {
  Packet packet;
  double theta = 0.0;
};

struct RateSearchOptions {
  double step_factor = 1.05;  // stop once hi/lo <= step_factor
  int max_iterations = 64;
  double min_theta = 1e-9;
  double max_theta = 65536.0;
};

/// Bit budget for `pixels` 8-bit samples at the given compression ratio.
inline double ratio_bit_budget(std::size_t pixels, double ratio) { return 8.0 * static_cast<double>(pixels) / ratio; }

/// Finds the smallest quantizer step (largest rate) whose packet fits in
/// 8*N/ratio bits, by geometric bisection on theta.
inline RateSearchResult compress_to_ratio(const Image& img, double ratio, const InternalCodec& codec,
                                          const RateSearchOptions& opt = {}) {
  if (!(ratio > 1.0)) throw InvalidConfig("compression ratio must exceed 1");
  if (img.empty()) throw InvalidInput("cannot compress an empty image");
  const double budget = ratio_bit_budget(img.size(), ratio);
  auto fits = [&](const Packet& p) { return static_cast<double>(p.bit_cost()) <= budget; };

  RateSearchResult hi{codec.compress(img, opt.max_theta), opt.max_theta};
  if (!fits(hi.packet)) throw RateError("bit budget unreachable even at the coarsest quantizer");

  double lo = opt.min_theta;
  {
    Packet fine = codec.compress(img, lo);
    if (fits(fine)) return {std::move(fine), lo};
  }
  for (int it = 0; it < opt.max_iterations && hi.theta / lo > opt.step_factor; ++it) {
    const double mid = std::sqrt(lo * hi.theta);
    Packet p = codec.compress(img, mid);
    if (fits(p))
      hi = {std::move(p), mid};
    else
      lo = mid;
  }
  return hi;
}

inline RateSearchResult compress_to_ratio(const Image& img, double ratio, const CodecParams& params) {
  if (params.codec_id != CodecId::InternalBlockDCT)
    throw InvalidConfig("rate search is defined for the internal codec; external tools take the ratio directly");
  return compress_to_ratio(img, ratio, InternalCodec(params.block_size));
}

}  // namespace holo
