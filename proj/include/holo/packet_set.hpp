#pragma once

// PacketSet container (.holo), all integers big-endian:
//   "HOLO"  u8 version(=1)  u16 height  u16 width  u8 K  u8 mode_tag
//   K x (i16 dy, i16 dx, u8 shift_mode)
//   u8 codec_id  u16 block_size  f64 theta
//   K x (u32 length, length bytes)
// mode_tag: 0 = duplicate, 1 = baseline, m >= 2 = optimized for m packets.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "holo/bytes.hpp"
#include "holo/codec.hpp"
#include "holo/error.hpp"
#include "holo/shift.hpp"

namespace holo {

struct SetMode {
  enum class Kind : std::uint8_t { Duplicate, Baseline, Optimized };
  Kind kind = Kind::Baseline;
  int m = 0;  // only meaningful for Optimized

  static SetMode duplicate() { return {Kind::Duplicate, 0}; }
  static SetMode baseline() { return {Kind::Baseline, 0}; }
  static SetMode optimized_for(int m) { return {Kind::Optimized, m}; }

  std::uint8_t tag() const {
    switch (kind) {
      case Kind::Duplicate: return 0;
      case Kind::Baseline: return 1;
      case Kind::Optimized: return static_cast<std::uint8_t>(m);
    }
    return 1;
  }

  static SetMode from_tag(std::uint8_t t) {
    if (t == 0) return duplicate();
    if (t == 1) return baseline();
    return optimized_for(t);
  }

  std::string name() const {
    switch (kind) {
      case Kind::Duplicate: return "duplicate";
      case Kind::Baseline: return "baseline";
      case Kind::Optimized: return "optimized-for-" + std::to_string(m);
    }
    return "?";
  }

  friend bool operator==(const SetMode&, const SetMode&) = default;
};

struct PacketSet {
  Dims original_dims;
  std::vector<ShiftSpec> shifts;
  CodecParams codec;
  std::vector<Packet> packets;
  SetMode mode;

  int k() const { return static_cast<int>(packets.size()); }

  void validate() const {
    if (original_dims.height < 1 || original_dims.width < 1) throw InvalidConfig("packet set has empty dimensions");
    if (shifts.size() != packets.size()) throw InvalidConfig("packet set needs one shift per packet");
    if (packets.empty() || packets.size() > 255) throw InvalidConfig("packet set size must be in [1, 255]");
    if (mode.kind == SetMode::Kind::Optimized && (mode.m < 2 || mode.m > k()))
      throw InvalidConfig("optimized packet set must target 2 <= m <= K");
  }

  friend bool operator==(const PacketSet&, const PacketSet&) = default;
};

inline constexpr std::uint8_t kContainerVersion = 1;

inline std::vector<std::uint8_t> save_packet_set(const PacketSet& ps) {
  ps.validate();
  ByteWriter out;
  out.tag("HOLO");
  out.u8(kContainerVersion);
  out.u16(static_cast<std::uint16_t>(ps.original_dims.height));
  out.u16(static_cast<std::uint16_t>(ps.original_dims.width));
  out.u8(static_cast<std::uint8_t>(ps.k()));
  out.u8(ps.mode.tag());
  for (const auto& s : ps.shifts) {
    if (s.dy < INT16_MIN || s.dy > INT16_MAX || s.dx < INT16_MIN || s.dx > INT16_MAX)
      throw InvalidConfig("shift does not fit the container's 16-bit fields");
    out.i16(static_cast<std::int16_t>(s.dy));
    out.i16(static_cast<std::int16_t>(s.dx));
    out.u8(static_cast<std::uint8_t>(s.mode));
  }
  out.u8(static_cast<std::uint8_t>(ps.codec.codec_id));
  out.u16(static_cast<std::uint16_t>(ps.codec.block_size));
  out.f64(ps.codec.theta);
  for (const auto& p : ps.packets) {
    out.u32(static_cast<std::uint32_t>(p.bytes.size()));
    out.raw(p.bytes);
  }
  return out.take();
}

inline PacketSet load_packet_set(std::span<const std::uint8_t> bytes) {
  ByteReader<ContainerError> in(bytes);
  if (!in.tag("HOLO")) throw ContainerError("bad container magic");
  if (in.u8() != kContainerVersion) throw ContainerError("unsupported container version");
  PacketSet ps;
  ps.original_dims.height = in.u16();
  ps.original_dims.width = in.u16();
  const int k = in.u8();
  ps.mode = SetMode::from_tag(in.u8());
  if (ps.original_dims.height < 1 || ps.original_dims.width < 1) throw ContainerError("bad image dimensions");
  if (k < 1) throw ContainerError("container holds no packets");
  if (ps.mode.kind == SetMode::Kind::Optimized && ps.mode.m > k) throw ContainerError("bad mode tag");
  for (int i = 0; i < k; ++i) {
    ShiftSpec s;
    s.dy = in.i16();
    s.dx = in.i16();
    const auto mode = in.u8();
    if (mode > 1) throw ContainerError("bad shift mode");
    s.mode = static_cast<ShiftMode>(mode);
    if (s.mode == ShiftMode::ReplicatePad && (s.dy < 0 || s.dx < 0)) throw ContainerError("bad pad shift");
    ps.shifts.push_back(s);
  }
  const auto codec_id = in.u8();
  if (codec_id > 1) throw ContainerError("bad codec id");
  ps.codec.codec_id = static_cast<CodecId>(codec_id);
  ps.codec.block_size = in.u16();
  ps.codec.theta = in.f64();
  try {
    ps.codec.validate();
  } catch (const InvalidConfig& e) {
    throw ContainerError(std::string("bad codec parameters: ") + e.what());
  }
  for (int i = 0; i < k; ++i) {
    const auto len = in.u32();
    const auto raw = in.raw(len);
    ps.packets.push_back(Packet{{raw.begin(), raw.end()}});
  }
  if (in.remaining() != 0) throw ContainerError("trailing bytes after last packet");
  return ps;
}

/// Bytes of the container that are not packet payload.
inline std::size_t container_overhead_bytes(const PacketSet& ps) {
  return 4 + 1 + 2 + 2 + 1 + 1 + 5 * ps.shifts.size() + 1 + 2 + 8 + 4 * ps.packets.size();
}

}  // namespace holo
