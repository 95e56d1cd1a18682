#pragma once

#include <cstdint>
#include <vector>

#include "holo/error.hpp"
#include "holo/image.hpp"

namespace holo {

enum class ShiftMode : std::uint8_t { Cyclic = 0, ReplicatePad = 1 };

/// 2-D displacement. `dy` is downward, `dx` rightward.
///
/// Cyclic: output(r, c) = input((r + dy) mod H, (c + dx) mod W), i.e. the
/// image content moves up/left by (dy, dx).
/// ReplicatePad: the upper-left corner is offset by (dy, dx); the image gains
/// dy duplicated top rows and dx duplicated left columns.
struct ShiftSpec {
  int dy = 0;
  int dx = 0;
  ShiftMode mode = ShiftMode::Cyclic;

  friend bool operator==(const ShiftSpec&, const ShiftSpec&) = default;
};

namespace shift_detail {

inline int wrap(long v, int n) {
  long r = v % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

inline void check_pad(const ShiftSpec& s) {
  if (s.dy < 0 || s.dx < 0) throw InvalidShift("replicate-pad shift requires non-negative offsets");
}

}  // namespace shift_detail

/// Dimensions of the shifted image.
inline Dims shifted_dims(Dims original, const ShiftSpec& s) {
  if (s.mode == ShiftMode::Cyclic) return original;
  shift_detail::check_pad(s);
  return {original.height + s.dy, original.width + s.dx};
}

inline Image apply_shift(const Image& img, const ShiftSpec& s) {
  const int h = img.height();
  const int w = img.width();
  if (s.mode == ShiftMode::Cyclic) {
    Image out(h, w);
    const int oy = shift_detail::wrap(s.dy, h);
    const int ox = shift_detail::wrap(s.dx, w);
    for (int r = 0; r < h; ++r) {
      const int sr = (r + oy) % h;
      for (int c = 0; c < w; ++c) out(r, c) = img(sr, (c + ox) % w);
    }
    return out;
  }
  shift_detail::check_pad(s);
  Image out(h + s.dy, w + s.dx);
  for (int r = 0; r < out.height(); ++r) {
    const int sr = r < s.dy ? 0 : r - s.dy;
    for (int c = 0; c < out.width(); ++c) out(r, c) = img(sr, c < s.dx ? 0 : c - s.dx);
  }
  return out;
}

/// Inverse of apply_shift. In pad mode this crops the bottom-right region of
/// size `original`.
inline Image apply_inverse_shift(const Image& img, const ShiftSpec& s, Dims original) {
  if (s.mode == ShiftMode::Cyclic) {
    if (img.dims() != original) throw InvalidShift("cyclic inverse shift: dimension mismatch");
    const int h = img.height();
    const int w = img.width();
    Image out(h, w);
    const int oy = shift_detail::wrap(s.dy, h);
    const int ox = shift_detail::wrap(s.dx, w);
    for (int r = 0; r < h; ++r) {
      const int dr = (r + oy) % h;
      for (int c = 0; c < w; ++c) out(dr, (c + ox) % w) = img(r, c);
    }
    return out;
  }
  shift_detail::check_pad(s);
  if (original.height < 1 || original.width < 1 || img.height() != original.height + s.dy ||
      img.width() != original.width + s.dx)
    throw InvalidShift("replicate-pad inverse shift: dimension mismatch");
  Image out(original.height, original.width);
  for (int r = 0; r < original.height; ++r)
    for (int c = 0; c < original.width; ++c) out(r, c) = img(r + s.dy, c + s.dx);
  return out;
}

/// Upper-left offset presets: K=4 uses (0,0),(3,0),(0,3),(3,3); K=9 the
/// 3x3 grid of multiples of 3 in row-major order. All replicate-pad.
inline std::vector<ShiftSpec> standard_shift_grid(int k) {
  constexpr auto pad = ShiftMode::ReplicatePad;
  if (k == 4) return {{0, 0, pad}, {3, 0, pad}, {0, 3, pad}, {3, 3, pad}};
  if (k == 9) {
    std::vector<ShiftSpec> grid;
    for (int gy = 0; gy < 3; ++gy)
      for (int gx = 0; gx < 3; ++gx) grid.push_back({3 * gy, 3 * gx, pad});
    return grid;
  }
  throw InvalidConfig("standard shift grid is defined for K = 4 or K = 9 only");
}

}  // namespace holo
