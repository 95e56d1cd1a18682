#pragma once

// Quality and diversity statistics of m-packet reconstructions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "holo/any_codec.hpp"
#include "holo/combinatorics.hpp"
#include "holo/error.hpp"
#include "holo/holographic.hpp"
#include "holo/image.hpp"
#include "holo/packet_set.hpp"

namespace holo {

struct SubsetResult {
  IndexTuple indices;  // 1-based
  double mse = 0.0;
  double psnr = 0.0;
};

struct SubsetStats {
  int m = 0;
  double mean_mse = 0.0;
  double var_mse = 0.0;  // population variance over the C(K, m) subsets
  double mean_psnr = 0.0;
  double std_psnr = 0.0;  // population std, dB
  std::vector<SubsetResult> per_subset;
};

struct EvaluationReport {
  std::vector<SubsetStats> per_m;  // per_m[m - 1]
  bool progressive_refinement = false;
  std::vector<double> mean_mse_sequence;
  double sigma = 0.0;
  std::vector<bool> sigma_similar;  // per m: var_mse <= sigma^2
  CodecParams codec;
  SetMode mode;
  int k = 0;
};

/// Population mean and standard deviation.
inline std::pair<double, double> mean_and_std(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double e : v) ss += (e - mean) * (e - mean);
  return {mean, std::sqrt(ss / n)};
}

/// MSE of the reconstruction from `indices` (1-based) against x.
inline double subset_mse(const Image& x, std::span<const Image> back_shifted, std::span<const int> indices) {
  const auto idx = normalize_subset(indices, static_cast<int>(back_shifted.size()));
  return mse(x, average_subset(back_shifted, idx));
}

template <ImageCodec C>
double subset_mse(const Image& x, const PacketSet& ps, std::span<const int> indices, const C& codec) {
  if (x.dims() != ps.original_dims) throw InvalidInput("original image does not match packet set dimensions");
  return mse(x, reconstruct(ps, indices, codec));
}

inline double subset_mse(const Image& x, const PacketSet& ps, std::span<const int> indices) {
  return subset_mse(x, ps, indices, Codec::for_params(ps.codec));
}

/// Statistics for every m from already back-shifted packets.
inline EvaluationReport evaluate_decoded(const Image& x, std::span<const Image> back_shifted, double sigma) {
  if (!(sigma >= 0.0)) throw InvalidConfig("sigma must be non-negative");
  const int k = static_cast<int>(back_shifted.size());
  if (k < 1) throw InvalidConfig("nothing to evaluate");
  EvaluationReport rep;
  rep.k = k;
  rep.sigma = sigma;
  for (int m = 1; m <= k; ++m) {
    SubsetStats st;
    st.m = m;
    std::vector<double> mses, psnrs;
    std::vector<int> zero(m);
    for (auto& tuple : enumerate_subsets(k, m)) {
      for (int j = 0; j < m; ++j) zero[j] = tuple[j] - 1;
      const double e = mse(x, average_subset(back_shifted, zero));
      mses.push_back(e);
      psnrs.push_back(psnr_from_mse(e));
      st.per_subset.push_back({std::move(tuple), e, psnrs.back()});
    }
    const auto [mm, ms] = mean_and_std(mses);
    st.mean_mse = mm;
    st.var_mse = ms * ms;
    // Exact values when all subsets agree, independent of summation rounding.
    if (std::all_of(mses.begin(), mses.end(), [&](double e) { return e == mses.front(); })) {
      st.mean_mse = mses.front();
      st.var_mse = 0.0;
    }
    if (std::all_of(psnrs.begin(), psnrs.end(), [](double v) { return std::isfinite(v); })) {
      const auto [pm, ps] = mean_and_std(psnrs);
      st.mean_psnr = pm;
      st.std_psnr = ps;
      if (std::all_of(psnrs.begin(), psnrs.end(), [&](double v) { return v == psnrs.front(); })) {
        st.mean_psnr = psnrs.front();
        st.std_psnr = 0.0;
      }
    } else {
      st.mean_psnr = std::numeric_limits<double>::infinity();
      st.std_psnr = std::numeric_limits<double>::quiet_NaN();
    }
    rep.mean_mse_sequence.push_back(st.mean_mse);
    rep.sigma_similar.push_back(st.var_mse <= sigma * sigma);
    rep.per_m.push_back(std::move(st));
  }
  rep.progressive_refinement = true;
  for (int m = 1; m < k; ++m)
    if (!(rep.mean_mse_sequence[m] < rep.mean_mse_sequence[m - 1])) rep.progressive_refinement = false;
  if (k == 1) rep.progressive_refinement = false;
  return rep;
}

template <ImageCodec C>
EvaluationReport evaluate(const Image& x, const PacketSet& ps, double sigma, const C& codec) {
  if (x.dims() != ps.original_dims) throw InvalidInput("original image does not match packet set dimensions");
  const auto back = back_shifted_packets(ps, codec);
  auto rep = evaluate_decoded(x, back, sigma);
  rep.codec = ps.codec;
  rep.mode = ps.mode;
  return rep;
}

inline EvaluationReport evaluate(const Image& x, const PacketSet& ps, double sigma) {
  return evaluate(x, ps, sigma, Codec::for_params(ps.codec));
}

struct CurvePoint {
  std::uint64_t order_id = 0;  // rank of the permutation in lexicographic order
  int m = 0;
  double psnr = 0.0;
};

inline constexpr int kMaxCurveK = 9;

/// PSNR of the prefix reconstructions for every packet-append order (K!
/// curves of K points). Prefixes with equal composition share one
/// evaluation.
inline std::vector<CurvePoint> psnr_order_curves_decoded(const Image& x, std::span<const Image> back_shifted) {
  const int k = static_cast<int>(back_shifted.size());
  if (k < 1 || k > kMaxCurveK) throw InvalidConfig("order curves are limited to 1 <= K <= 9");
  std::unordered_map<std::uint32_t, double> cache;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<CurvePoint> out;
  std::uint64_t order = 0;
  do {
    std::uint32_t mask = 0;
    for (int m = 1; m <= k; ++m) {
      mask |= 1u << perm[m - 1];
      auto it = cache.find(mask);
      if (it == cache.end()) {
        std::vector<int> idx;
        for (int j = 0; j < k; ++j)
          if (mask & (1u << j)) idx.push_back(j);
        it = cache.emplace(mask, psnr(x, average_subset(back_shifted, idx))).first;
      }
      out.push_back({order, m, it->second});
    }
    ++order;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

template <ImageCodec C>
std::vector<CurvePoint> psnr_order_curves(const Image& x, const PacketSet& ps, const C& codec) {
  if (ps.k() > kMaxCurveK) throw InvalidConfig("order curves are limited to K <= 9");
  if (x.dims() != ps.original_dims) throw InvalidInput("original image does not match packet set dimensions");
  return psnr_order_curves_decoded(x, back_shifted_packets(ps, codec));
}

inline std::vector<CurvePoint> psnr_order_curves(const Image& x, const PacketSet& ps) {
  return psnr_order_curves(x, ps, Codec::for_params(ps.codec));
}

namespace report_detail {

inline std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace report_detail

inline std::string curves_to_csv(std::span<const CurvePoint> curves) {
  std::ostringstream os;
  os << "order_id,m,psnr\n";
  for (const auto& c : curves) os << c.order_id << ',' << c.m << ',' << report_detail::num(c.psnr) << '\n';
  return os.str();
}

/// One row per (m, subset); indices joined with '-'.
inline std::string report_to_csv(const EvaluationReport& rep) {
  std::ostringstream os;
  os << "m,subset,mse,psnr\n";
  for (const auto& st : rep.per_m)
    for (const auto& s : st.per_subset) {
      os << st.m << ',';
      for (std::size_t j = 0; j < s.indices.size(); ++j) os << (j ? "-" : "") << s.indices[j];
      os << ',' << report_detail::num(s.mse) << ',' << report_detail::num(s.psnr) << '\n';
    }
  return os.str();
}

/// Table-style summary: mean and std of PSNR per m.
inline std::string report_summary(const EvaluationReport& rep) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "mode " << rep.mode.name() << ", K = " << rep.k << "\n";
  os << "  m   mean PSNR   std PSNR    mean MSE     var MSE\n";
  for (const auto& st : rep.per_m)
    os << std::setw(3) << st.m << std::setw(12) << st.mean_psnr << std::setw(11) << st.std_psnr << std::setw(12)
       << st.mean_mse << std::setw(12) << st.var_mse << "\n";
  os << "progressive refinement: " << (rep.progressive_refinement ? "yes" : "no") << "\n";
  return os.str();
}

}  // namespace holo
