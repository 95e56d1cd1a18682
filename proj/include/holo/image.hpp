#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "holo/error.hpp"

namespace holo {

struct Dims {
  int height = 0;
  int width = 0;

  std::size_t pixels() const { return static_cast<std::size_t>(height) * static_cast<std::size_t>(width); }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Grayscale image with real-valued samples stored row-major.
///
/// Samples nominally live in [0, 255] but nothing enforces it: intermediate
/// signals of the optimizer (auxiliary and dual variables) are unbounded.
/// Quantization to 8 bits happens only when writing a file.
class Image {
 public:
  Image() = default;

  Image(int height, int width, double fill = 0.0) : dims_{height, width} {
    check_dims();
    samples_.assign(dims_.pixels(), fill);
  }

  Image(int height, int width, std::vector<double> samples) : dims_{height, width}, samples_(std::move(samples)) {
    check_dims();
    if (samples_.size() != dims_.pixels()) throw InvalidInput("image sample count does not match height x width");
  }

  int height() const { return dims_.height; }
  int width() const { return dims_.width; }
  Dims dims() const { return dims_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  double& operator()(int r, int c) {
    assert(r >= 0 && r < dims_.height && c >= 0 && c < dims_.width);
    return samples_[static_cast<std::size_t>(r) * dims_.width + c];
  }
  double operator()(int r, int c) const {
    assert(r >= 0 && r < dims_.height && c >= 0 && c < dims_.width);
    return samples_[static_cast<std::size_t>(r) * dims_.width + c];
  }

  double& operator[](std::size_t i) { return samples_[i]; }
  double operator[](std::size_t i) const { return samples_[i]; }

  std::span<double> samples() { return samples_; }
  std::span<const double> samples() const { return samples_; }

  auto begin() { return samples_.begin(); }
  auto end() { return samples_.end(); }
  auto begin() const { return samples_.begin(); }
  auto end() const { return samples_.end(); }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  void check_dims() const {
    if (dims_.height < 1 || dims_.width < 1) throw InvalidInput("image dimensions must be positive");
  }

  Dims dims_{};
  std::vector<double> samples_;
};

inline void require_same_dims(const Image& a, const Image& b) {
  if (a.dims() != b.dims()) throw InvalidInput("image dimensions differ");
}

// a += scale * b
inline void add_scaled(Image& a, const Image& b, double scale = 1.0) {
  require_same_dims(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
}

inline Image operator+(Image a, const Image& b) {
  add_scaled(a, b, 1.0);
  return a;
}

inline Image operator-(Image a, const Image& b) {
  add_scaled(a, b, -1.0);
  return a;
}

inline Image operator*(double s, Image a) {
  for (double& v : a) v *= s;
  return a;
}

inline double squared_error(const Image& a, const Image& b) {
  require_same_dims(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

inline double mse(const Image& a, const Image& b) { return squared_error(a, b) / static_cast<double>(a.size()); }

inline constexpr double kPeak = 255.0;

/// PSNR in dB for 8-bit data. A zero MSE maps to +infinity.
inline double psnr_from_mse(double mse_value) {
  if (mse_value <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(kPeak * kPeak / mse_value);
}

inline double mse_from_psnr(double psnr_db) { return kPeak * kPeak * std::pow(10.0, -psnr_db / 10.0); }

inline double psnr(const Image& reference, const Image& test) { return psnr_from_mse(mse(reference, test)); }

}  // namespace holo
