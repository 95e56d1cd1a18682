#pragma once

// ADMM holographic compression optimized for m-packet reconstructions.
//
// Minimizes  sum_i R(y_i) + mu * mean_{|I|=m} D(x; I) + lambda * mean_i D(x; {i})
// over decompressed packets y_i. Variable splitting y_i = z_i turns every
// iteration into one standard compression per packet (the rate term) and a
// closed-form quadratic update of z_i (the distortion terms), swept over the
// packets in order so later packets see the already-updated earlier ones.

#include <cmath>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "holo/codec.hpp"
#include "holo/combinatorics.hpp"
#include "holo/error.hpp"
#include "holo/holographic.hpp"
#include "holo/image.hpp"
#include "holo/packet_set.hpp"
#include "holo/shift.hpp"

namespace holo {

/// Parameter presets: Opt2 targets 2-packet reconstructions, OptK the full set.
enum class Profile { Opt2, OptK };

struct OptimizerParams {
  int m = 2;
  int k = 4;
  double mu = 0.0;
  double lambda = 0.0;
  double beta = 1.0;
  int iterations = 35;
  double theta = 0.0;  // frozen codec rate parameter; must be set before optimize()

  void validate() const {
    if (k < 2 || k > 255) throw InvalidConfig("optimizer needs 2 <= K <= 255");
    if (m < 2 || m > k) throw InvalidConfig("optimizer needs 2 <= m <= K");
    if (!(mu >= 0.0) || !(lambda >= 0.0)) throw InvalidConfig("mu and lambda must be non-negative");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidConfig("beta must be positive");
    if (iterations < 1) throw InvalidConfig("iterations must be at least 1");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw InvalidConfig("theta must be positive (freeze it first)");
  }
};

/// Experimental presets. `pixels` is the unpadded image size H*W.
///
/// Opt2: mu = 25 K C(K,2), beta = 90/N, lambda = 5 K^2 (K^2 when K = 9).
/// OptK: mu = 125 K, beta = 50/N, lambda = 2.5 K^2.
/// At ratio 25 with K = 4, beta becomes 65/N (Opt2) and 120/N (OptK). Other
/// (ratio, K) pairs use the ratio-50 formulas. theta is left unset.
inline OptimizerParams default_params(Profile profile, int k, std::size_t pixels, double ratio) {
  if (k < 2) throw InvalidConfig("optimizer presets need K >= 2");
  const double n = static_cast<double>(pixels);
  const bool ratio25 = std::abs(ratio - 25.0) < 1e-9 && k == 4;
  OptimizerParams p;
  p.k = k;
  p.iterations = 35;
  const double kk = static_cast<double>(k);
  if (profile == Profile::Opt2) {
    p.m = 2;
    p.mu = 25.0 * kk * static_cast<double>(binomial(k, 2));
    p.beta = (ratio25 ? 65.0 : 90.0) / n;
    p.lambda = (k == 9 ? 1.0 : 5.0) * kk * kk;
  } else {
    p.m = k;
    p.mu = 125.0 * kk * static_cast<double>(binomial(k, k));
    p.beta = (ratio25 ? 120.0 : 50.0) / n;
    p.lambda = 2.5 * kk * kk;
  }
  return p;
}

/// Same, with an explicit m that must agree with the profile (Opt2: 2, OptK: K).
inline OptimizerParams default_params(Profile profile, int k, int m, std::size_t pixels, double ratio) {
  if (m != (profile == Profile::Opt2 ? 2 : k)) throw InvalidConfig("m does not match the optimizer profile");
  return default_params(profile, k, pixels, ratio);
}

/// Residual aggregate over all m-combinations containing packet `i`
/// (0-based), on the original support:
///   w_i = C(K-1, m-1) * m * x - C(K-2, m-2) * sum_{j != i} zb_j
/// where zb_j = S_j^T z_j are the latest back-shifted auxiliaries. Every
/// j != i appears in C(K-2, m-2) of those combinations. For m = K this is
/// K x - sum_{j != i} zb_j.
inline Image aggregate_w_backshifted(int i, const Image& x, std::span<const Image> z_back, int m) {
  const int k = static_cast<int>(z_back.size());
  if (m == k) {
    Image w = static_cast<double>(k) * x;
    for (int j = 0; j < k; ++j)
      if (j != i) add_scaled(w, z_back[j], -1.0);
    return w;
  }
  const double containing = static_cast<double>(binomial(k - 1, m - 1));
  const double pair_count = static_cast<double>(binomial(k - 2, m - 2));
  Image others(x.height(), x.width());
  for (int j = 0; j < k; ++j)
    if (j != i) add_scaled(others, z_back[j]);
  Image w = containing * static_cast<double>(m) * x;
  add_scaled(w, others, -pair_count);
  return w;
}

/// Same as above with shifted-domain auxiliaries.
inline Image aggregate_w(int i, const Image& x, std::span<const Image> z_hat, std::span<const ShiftSpec> shifts,
                         int m) {
  std::vector<Image> back;
  back.reserve(z_hat.size());
  for (std::size_t j = 0; j < z_hat.size(); ++j) back.push_back(apply_inverse_shift(z_hat[j], shifts[j], x.dims()));
  return aggregate_w_backshifted(i, x, back, m);
}

/// Closed-form minimizer of the z_i subproblem, evaluated on the original
/// support and mapped back through S_i:
///   S_i^T z_i = (N b S_i^T y~_i + (l/K) x + c w_i) / (N b + l/K + c C(K-1, m-1)),
///   c = mu / (m^2 C(K, m)).
/// In replicate-pad mode the border of z_i is the replicate-pad of that
/// result.
inline Image z_update_backshifted(int i, const Image& x, const Image& y_tilde_back, std::span<const Image> z_back,
                                  const OptimizerParams& p) {
  const double n = static_cast<double>(x.size());
  const double nb = n * p.beta;
  const double fid = p.lambda / static_cast<double>(p.k);
  const double c = p.mu / (static_cast<double>(p.m) * p.m * static_cast<double>(binomial(p.k, p.m)));
  const double den = nb + fid + c * static_cast<double>(binomial(p.k - 1, p.m - 1));

  Image core = (nb / den) * y_tilde_back;
  if (fid != 0.0) add_scaled(core, x, fid / den);
  if (c != 0.0) add_scaled(core, aggregate_w_backshifted(i, x, z_back, p.m), c / den);
  return core;
}

inline Image z_update(int i, const Image& x, const Image& y_tilde, std::span<const Image> z_hat,
                      const OptimizerParams& p, std::span<const ShiftSpec> shifts) {
  std::vector<Image> back;
  back.reserve(z_hat.size());
  for (std::size_t j = 0; j < z_hat.size(); ++j) back.push_back(apply_inverse_shift(z_hat[j], shifts[j], x.dims()));
  const Image core = z_update_backshifted(i, x, apply_inverse_shift(y_tilde, shifts[i], x.dims()), back, p);
  return apply_shift(core, shifts[i]);
}

struct CostRecord {
  int iteration = 0;
  std::int64_t total_bits = 0;
  double avg_m_mse = 0.0;
  double avg_1_mse = 0.0;
  double lagrangian = 0.0;
};

struct CostTrace {
  std::vector<CostRecord> records;

  std::string to_csv() const {
    std::ostringstream os;
    os << "iteration,total_bits,avg_m_mse,avg_1_mse,lagrangian\n";
    os << std::setprecision(17);
    for (const auto& r : records)
      os << r.iteration << ',' << r.total_bits << ',' << r.avg_m_mse << ',' << r.avg_1_mse << ',' << r.lagrangian
         << '\n';
    return os.str();
  }
};

struct AdmmState {
  std::vector<Image> z_hat;  // shifted domain
  std::vector<Image> u;      // scaled duals
  std::vector<Image> y_hat;  // decompressed packets
  int t = 0;
};

struct OptimizationResult {
  PacketSet packets;
  CostTrace trace;
  AdmmState state;
};

/// Mean m-packet MSE over every m-subset, from back-shifted decoded packets.
inline double mean_subset_mse(const Image& x, std::span<const Image> back, int m) {
  const auto subsets = enumerate_subsets(static_cast<int>(back.size()), m);
  double sum = 0.0;
  std::vector<int> zero(m);
  for (const auto& s : subsets) {
    for (int j = 0; j < m; ++j) zero[j] = s[j] - 1;
    sum += mse(x, average_subset(back, zero));
  }
  return sum / static_cast<double>(subsets.size());
}

/// Runs the ADMM iterations for a fixed iteration count with the codec
/// theta frozen to `p.theta`. Returns the last iteration's packets.
template <ImageCodec C>
OptimizationResult optimize(const Image& x, std::span<const ShiftSpec> shifts, const C& codec,
                            const CodecParams& codec_params, const OptimizerParams& p) {
  p.validate();
  if (static_cast<int>(shifts.size()) != p.k) throw InvalidConfig("shift count must equal K");
  require_distinct_shifts(shifts);
  const int k = p.k;
  const Dims dims = x.dims();

  CodecParams frozen = codec_params;
  frozen.theta = p.theta;
  frozen.validate();

  AdmmState st;
  std::vector<Image> z_back;
  for (const auto& s : shifts) {
    st.z_hat.push_back(apply_shift(x, s));
    st.u.emplace_back(st.z_hat.back().height(), st.z_hat.back().width(), 0.0);
    z_back.push_back(x);
  }
  st.y_hat.resize(k);

  std::vector<Packet> packets(k);
  std::vector<Image> y_back(k);
  CostTrace trace;

  for (int t = 1; t <= p.iterations; ++t) {
    st.t = t;
    for (int i = 0; i < k; ++i) {
      try {
        const Image z_tilde = st.z_hat[i] - st.u[i];
        packets[i] = codec.compress(z_tilde, p.theta);
        st.y_hat[i] = codec.decompress(packets[i]);
        if (st.y_hat[i].dims() != z_tilde.dims()) throw DecodeError("decompressed packet has unexpected dimensions");
      } catch (const Error&) {
        std::throw_with_nested(Error("optimize: codec failure at iteration " + std::to_string(t) + ", packet " +
                                     std::to_string(i + 1)));
      }
      const Image y_tilde = st.y_hat[i] + st.u[i];
      y_back[i] = apply_inverse_shift(st.y_hat[i], shifts[i], dims);
      const Image core = z_update_backshifted(i, x, apply_inverse_shift(y_tilde, shifts[i], dims), z_back, p);
      st.z_hat[i] = apply_shift(core, shifts[i]);
      z_back[i] = core;
      add_scaled(st.u[i], st.y_hat[i]);
      add_scaled(st.u[i], st.z_hat[i], -1.0);
    }

    CostRecord rec;
    rec.iteration = t;
    for (const auto& pk : packets) rec.total_bits += pk.bit_cost();
    rec.avg_m_mse = mean_subset_mse(x, y_back, p.m);
    rec.avg_1_mse = mean_subset_mse(x, y_back, 1);
    rec.lagrangian = static_cast<double>(rec.total_bits) + p.mu * rec.avg_m_mse + p.lambda * rec.avg_1_mse;
    trace.records.push_back(rec);
  }

  PacketSet ps{dims, {shifts.begin(), shifts.end()}, frozen, std::move(packets), SetMode::optimized_for(p.m)};
  return {std::move(ps), std::move(trace), std::move(st)};
}

}  // namespace holo
