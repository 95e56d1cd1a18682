#pragma once

// Shift-based holographic encoding and the averaging reconstruction.

#include <algorithm>
#include <span>
#include <vector>

#include "holo/any_codec.hpp"
#include "holo/codec.hpp"
#include "holo/error.hpp"
#include "holo/image.hpp"
#include "holo/packet_set.hpp"
#include "holo/shift.hpp"

namespace holo {

/// K byte-identical copies of one compressed image.
template <ImageCodec C>
PacketSet encode_duplicate(const Image& x, int k, const C& codec, const CodecParams& params) {
  if (k < 1 || k > 255) throw InvalidConfig("K must be in [1, 255]");
  params.validate();
  Packet p = codec.compress(x, params.theta);
  PacketSet ps{x.dims(), std::vector<ShiftSpec>(k, ShiftSpec{}), params, std::vector<Packet>(k, p),
               SetMode::duplicate()};
  return ps;
}

inline PacketSet encode_duplicate(const Image& x, int k, const CodecParams& params) {
  return encode_duplicate(x, k, Codec::for_params(params), params);
}

inline void require_distinct_shifts(std::span<const ShiftSpec> shifts) {
  if (shifts.empty()) throw InvalidConfig("at least one shift is required");
  if (shifts.size() > 255) throw InvalidConfig("at most 255 shifts are supported");
  for (std::size_t i = 0; i < shifts.size(); ++i)
    for (std::size_t j = i + 1; j < shifts.size(); ++j)
      if (shifts[i] == shifts[j]) throw InvalidConfig("shift list contains duplicates");
}

/// Packet i is the compression of the i-th shifted image.
template <ImageCodec C>
PacketSet encode_baseline(const Image& x, std::span<const ShiftSpec> shifts, const C& codec,
                          const CodecParams& params) {
  require_distinct_shifts(shifts);
  params.validate();
  PacketSet ps{x.dims(), {shifts.begin(), shifts.end()}, params, {}, SetMode::baseline()};
  for (const auto& s : shifts) ps.packets.push_back(codec.compress(apply_shift(x, s), params.theta));
  return ps;
}

inline PacketSet encode_baseline(const Image& x, std::span<const ShiftSpec> shifts, const CodecParams& params) {
  return encode_baseline(x, shifts, Codec::for_params(params), params);
}

/// Validates 1-based indices and returns them as sorted 0-based indices.
inline std::vector<int> normalize_subset(std::span<const int> one_based, int k) {
  if (one_based.empty()) throw InvalidSubset("subset must not be empty");
  std::vector<int> idx;
  idx.reserve(one_based.size());
  for (int i : one_based) {
    if (i < 1 || i > k) throw InvalidSubset("packet index " + std::to_string(i) + " outside [1, " + std::to_string(k) + "]");
    idx.push_back(i - 1);
  }
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) throw InvalidSubset("repeated packet index");
  return idx;
}

/// Pairwise (tree) sum over images in the given order.
inline Image pairwise_sum(std::span<const Image* const> images) {
  if (images.size() == 1) return *images[0];
  const std::size_t half = images.size() / 2;
  Image left = pairwise_sum(images.first(half));
  add_scaled(left, pairwise_sum(images.subspan(half)));
  return left;
}

/// Decompresses one packet and maps it back onto the original support.
template <ImageCodec C>
Image back_shifted_packet(const PacketSet& ps, int zero_based, const C& codec) {
  const Image y = codec.decompress(ps.packets[zero_based]);
  const auto& s = ps.shifts[zero_based];
  if (y.dims() != shifted_dims(ps.original_dims, s))
    throw DecodeError("packet " + std::to_string(zero_based + 1) + " decodes to unexpected dimensions");
  return apply_inverse_shift(y, s, ps.original_dims);
}

/// All packets decompressed and back-shifted, in packet order.
template <ImageCodec C>
std::vector<Image> back_shifted_packets(const PacketSet& ps, const C& codec) {
  std::vector<Image> out;
  out.reserve(ps.packets.size());
  for (int i = 0; i < ps.k(); ++i) out.push_back(back_shifted_packet(ps, i, codec));
  return out;
}

inline std::vector<Image> back_shifted_packets(const PacketSet& ps) {
  return back_shifted_packets(ps, Codec::for_params(ps.codec));
}

/// Mean of already back-shifted packets selected by sorted 0-based indices.
/// Computed as first + pairwise_sum(others - first) / m, so a subset of
/// identical images averages to that image bit for bit.
inline Image average_subset(std::span<const Image> back_shifted, std::span<const int> sorted_zero_based) {
  const Image& first = back_shifted[sorted_zero_based.front()];
  if (sorted_zero_based.size() == 1) return first;
  std::vector<Image> diffs;
  diffs.reserve(sorted_zero_based.size() - 1);
  for (std::size_t j = 1; j < sorted_zero_based.size(); ++j) diffs.push_back(back_shifted[sorted_zero_based[j]] - first);
  std::vector<const Image*> sel;
  for (const auto& d : diffs) sel.push_back(&d);
  Image out = first;
  add_scaled(out, pairwise_sum(sel), 1.0 / static_cast<double>(sorted_zero_based.size()));
  return out;
}

/// m-packet reconstruction: average of the back-shifted decompressed packets
/// named by 1-based `subset`. Independent of index order.
template <ImageCodec C>
Image reconstruct(const PacketSet& ps, std::span<const int> subset, const C& codec) {
  const auto idx = normalize_subset(subset, ps.k());
  std::vector<Image> decoded;
  decoded.reserve(idx.size());
  for (int i : idx) decoded.push_back(back_shifted_packet(ps, i, codec));
  std::vector<int> positions(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) positions[j] = static_cast<int>(j);
  return average_subset(decoded, positions);
}

inline Image reconstruct(const PacketSet& ps, std::span<const int> subset) {
  return reconstruct(ps, subset, Codec::for_params(ps.codec));
}

}  // namespace holo
