#pragma once

#include <variant>

#include "holo/codec.hpp"
#include "holo/external_codec.hpp"
#include "holo/rate.hpp"

namespace holo {

/// Runtime choice between the built-in codec and an external tool.
class Codec {
 public:
  Codec(InternalCodec c) : impl_(c) {}
  Codec(ExternalCodec c) : impl_(std::move(c)) {}

  /// Builds the codec named by `p`; external commands come from the
  /// environment.
  static Codec for_params(const CodecParams& p) {
    if (p.codec_id == CodecId::InternalBlockDCT) return InternalCodec(p.block_size);
    auto cmds = ExternalCommands::from_env();
    if (!cmds) throw InvalidConfig("external codec selected but HOLO_EXT_ENCODE / HOLO_EXT_DECODE are not set");
    return ExternalCodec(*cmds);
  }

  CodecId id() const {
    return std::holds_alternative<InternalCodec>(impl_) ? CodecId::InternalBlockDCT : CodecId::External;
  }

  int block_size() const {
    if (auto* c = std::get_if<InternalCodec>(&impl_)) return c->block_size();
    return 0;
  }

  CodecParams params(double theta) const { return {id(), theta, id() == CodecId::External ? 8 : block_size()}; }

  Packet compress(const Image& img, double theta) const {
    return std::visit([&](const auto& c) { return c.compress(img, theta); }, impl_);
  }

  Image decompress(const Packet& pkt) const {
    return std::visit([&](const auto& c) { return c.decompress(pkt); }, impl_);
  }

  /// Internal codec: rate search on theta. External: theta is the ratio.
  RateSearchResult compress_to_ratio(const Image& img, double ratio) const {
    if (auto* c = std::get_if<InternalCodec>(&impl_)) return holo::compress_to_ratio(img, ratio, *c);
    return {compress(img, ratio), ratio};
  }

 private:
  std::variant<InternalCodec, ExternalCodec> impl_;
};

static_assert(ImageCodec<InternalCodec>);
static_assert(ImageCodec<ExternalCodec>);
static_assert(ImageCodec<Codec>);

}  // namespace holo
