#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace holo {

/// Orthonormal 2-D DCT-II on square n x n tiles (row-major).
class BlockDct {
 public:
  explicit BlockDct(int n) : n_(n), basis_(static_cast<std::size_t>(n) * n), tmp_(basis_.size()) {
    for (int k = 0; k < n; ++k) {
      const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
      for (int i = 0; i < n; ++i)
        basis_[k * n + i] = scale * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
    }
  }

  int size() const { return n_; }

  // out = B * in * B^T
  void forward(std::span<const double> in, std::span<double> out) {
    for (int k = 0; k < n_; ++k)
      for (int c = 0; c < n_; ++c) {
        double s = 0.0;
        for (int r = 0; r < n_; ++r) s += basis_[k * n_ + r] * in[r * n_ + c];
        tmp_[k * n_ + c] = s;
      }
    for (int k = 0; k < n_; ++k)
      for (int l = 0; l < n_; ++l) {
        double s = 0.0;
        for (int c = 0; c < n_; ++c) s += tmp_[k * n_ + c] * basis_[l * n_ + c];
        out[k * n_ + l] = s;
      }
  }

  // out = B^T * in * B
  void inverse(std::span<const double> in, std::span<double> out) {
    for (int r = 0; r < n_; ++r)
      for (int l = 0; l < n_; ++l) {
        double s = 0.0;
        for (int k = 0; k < n_; ++k) s += basis_[k * n_ + r] * in[k * n_ + l];
        tmp_[r * n_ + l] = s;
      }
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c) {
        double s = 0.0;
        for (int l = 0; l < n_; ++l) s += tmp_[r * n_ + l] * basis_[l * n_ + c];
        out[r * n_ + c] = s;
      }
  }

 private:
  int n_;
  std::vector<double> basis_;
  std::vector<double> tmp_;
};

/// Zigzag scan order for an n x n tile: entry k is the raster index of the
/// k-th scanned coefficient.
inline std::vector<int> zigzag_order(int n) {
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n) * n);
  for (int d = 0; d < 2 * n - 1; ++d) {
    if (d % 2 == 0) {
      for (int r = std::min(d, n - 1); r >= 0 && d - r < n; --r) order.push_back(r * n + (d - r));
    } else {
      for (int c = std::min(d, n - 1); c >= 0 && d - c < n; --c) order.push_back((d - c) * n + c);
    }
  }
  return order;
}

}  // namespace holo
