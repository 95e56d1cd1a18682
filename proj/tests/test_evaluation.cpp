#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "holo/combinatorics.hpp"
#include "holo/evaluation.hpp"
#include "holo/holographic.hpp"
#include "holo/pgm.hpp"
#include "holo/rate.hpp"
#include "holo/report_json.hpp"
#include "oracles.hpp"

using namespace holo;

namespace {

const Image& camera() {
  static const Image img = load_pgm(oracle::data_path("camera256.pgm"));
  return img;
}

const PacketSet& camera_baseline() {
  static const PacketSet ps = [] {
    CodecParams p;
    p.theta = compress_to_ratio(camera(), 50, p).theta;
    return encode_baseline(camera(), standard_shift_grid(4), p);
  }();
  return ps;
}

}  // namespace

TEST(Subsets, Examples) {
  EXPECT_EQ(enumerate_subsets(4, 2),
            (std::vector<IndexTuple>{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}));
  EXPECT_EQ(enumerate_subsets(4, 4), (std::vector<IndexTuple>{{1, 2, 3, 4}}));
  const auto singles = enumerate_subsets(9, 1);
  ASSERT_EQ(singles.size(), 9u);
  for (int i = 0; i < 9; ++i) EXPECT_EQ(singles[i], IndexTuple{i + 1});
  EXPECT_THROW(enumerate_subsets(4, 0), InvalidConfig);
  EXPECT_THROW(enumerate_subsets(4, 5), InvalidConfig);
}

TEST(Subsets, CountsAndOrder) {
  for (int k = 1; k <= 9; ++k)
    for (int m = 1; m <= k; ++m) {
      const auto s = enumerate_subsets(k, m);
      EXPECT_EQ(s.size(), binomial(k, m));
      EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
      EXPECT_EQ(std::set<IndexTuple>(s.begin(), s.end()).size(), s.size());
      for (const auto& t : s) EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
    }
  EXPECT_EQ(binomial(9, 4), 126u);
  EXPECT_EQ(binomial(4, 5), 0u);
}

TEST(Evaluation, PopulationStatistics) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto [mean, sd] = mean_and_std(v);
  EXPECT_DOUBLE_EQ(mean, 2.5);
  EXPECT_DOUBLE_EQ(sd, std::sqrt(1.25));
}

TEST(Evaluation, PsnrConventions) {
  EXPECT_TRUE(std::isinf(psnr_from_mse(0.0)));
  EXPECT_NEAR(psnr_from_mse(mse_from_psnr(29.73)), 29.73, 1e-12);
  EXPECT_NEAR(mse_from_psnr(29.73), 69.2, 0.05);
}

TEST(Evaluation, DuplicateSetIsFlat) {
  CodecParams p;
  p.theta = compress_to_ratio(camera(), 50, p).theta;
  const PacketSet ps = encode_duplicate(camera(), 4, p);
  const auto rep = evaluate(camera(), ps, 0.0);
  ASSERT_EQ(rep.per_m.size(), 4u);
  for (const auto& st : rep.per_m) {
    EXPECT_EQ(st.var_mse, 0.0);
    EXPECT_EQ(st.std_psnr, 0.0);
    EXPECT_EQ(st.mean_psnr, rep.per_m[0].mean_psnr);
    EXPECT_EQ(st.mean_mse, rep.per_m[0].mean_mse);
    EXPECT_EQ(st.per_subset.size(), binomial(4, st.m));
  }
  EXPECT_FALSE(rep.progressive_refinement);
  EXPECT_TRUE(std::all_of(rep.sigma_similar.begin(), rep.sigma_similar.end(), [](bool b) { return b; }));
  EXPECT_EQ(rep.mode, SetMode::duplicate());
}

TEST(Evaluation, BaselineReport) {
  const auto rep = evaluate(camera(), camera_baseline(), 1.0);
  EXPECT_EQ(rep.k, 4);
  EXPECT_EQ(rep.per_m.back().var_mse, 0.0);
  EXPECT_EQ(rep.per_m.back().std_psnr, 0.0);
  EXPECT_TRUE(rep.progressive_refinement);
  for (int m = 1; m < 4; ++m) EXPECT_LT(rep.mean_mse_sequence[m], rep.mean_mse_sequence[m - 1]);
  for (const auto& st : rep.per_m) {
    double sum = 0, sq = 0;
    for (const auto& s : st.per_subset) sum += s.mse;
    const double mean = sum / st.per_subset.size();
    for (const auto& s : st.per_subset) sq += (s.mse - mean) * (s.mse - mean);
    EXPECT_NEAR(st.mean_mse, mean, 1e-9);
    EXPECT_NEAR(st.var_mse, sq / st.per_subset.size(), 1e-9);
  }
}

TEST(Evaluation, MatchesBruteForceReconstruction) {
  const Image x = load_pgm(oracle::data_path("coins256.pgm"));
  for (int k = 2; k <= 5; ++k) {
    std::vector<ShiftSpec> shifts;
    for (int i = 0; i < k; ++i) shifts.push_back({i, (2 * i) % 5, ShiftMode::ReplicatePad});
    const PacketSet ps = encode_baseline(x, shifts, CodecParams{CodecId::InternalBlockDCT, 90.0, 8});
    const auto rep = evaluate(x, ps, 0.0);
    for (int m = 1; m <= k; ++m) {
      double sum = 0;
      int count = 0;
      for (unsigned mask = 1; mask < (1u << k); ++mask) {
        if (std::popcount(mask) != m) continue;
        std::vector<int> subset;
        for (int j = 0; j < k; ++j)
          if (mask & (1u << j)) subset.push_back(j + 1);
        const Image rec = reconstruct(ps, subset);
        double se = 0;
        for (std::size_t p = 0; p < x.size(); ++p) se += (x[p] - rec[p]) * (x[p] - rec[p]);
        sum += se / static_cast<double>(x.size());
        ++count;
      }
      EXPECT_NEAR(rep.per_m[m - 1].mean_mse, sum / count, 1e-9 * sum / count) << k << "," << m;
    }
  }
}

TEST(Evaluation, SinglePacketMseMatchesDirectDecode) {
  const PacketSet& ps = camera_baseline();
  for (int i = 1; i <= 4; ++i) {
    const Image y = apply_inverse_shift(decompress(ps.packets[i - 1]), ps.shifts[i - 1], camera().dims());
    EXPECT_DOUBLE_EQ(subset_mse(camera(), ps, std::vector<int>{i}), mse(camera(), y));
  }
}

TEST(Evaluation, LosslessLimit) {
  std::mt19937 rng(41);
  const Image x = oracle::random_byte_image(16, 16, rng);
  const PacketSet ps = encode_baseline(x, standard_shift_grid(4), CodecParams{CodecId::InternalBlockDCT, 1e-7, 8});
  const auto rep = evaluate(x, ps, 0.0);
  for (const auto& st : rep.per_m) EXPECT_LT(st.mean_mse, 1e-10);
}

TEST(Evaluation, ExactReconstructionGivesInfinitePsnr) {
  const Image x(8, 8, 128.0);
  const PacketSet ps = encode_duplicate(x, 3, CodecParams{});
  const auto rep = evaluate(x, ps, 0.0);
  EXPECT_TRUE(std::isinf(rep.per_m[0].mean_psnr));
  const auto j = report_to_json(rep);
  EXPECT_TRUE(j["per_m"][0]["mean_psnr"].is_null());
  EXPECT_TRUE(j["config"]["ratio"].is_null());
  EXPECT_EQ(report_to_json(rep, 50.0)["config"]["ratio"], 50.0);
}

TEST(Evaluation, RejectsMismatchedOriginal) {
  EXPECT_THROW(evaluate(Image(8, 8), camera_baseline(), 0.0), InvalidInput);
  EXPECT_THROW(evaluate(camera(), camera_baseline(), -1.0), InvalidConfig);
}

TEST(Curves, FourPacketCardinalityAndCaching) {
  const auto curves = psnr_order_curves(camera(), camera_baseline());
  ASSERT_EQ(curves.size(), 24u * 4u);
  const std::vector<int> base_perm{0, 1, 2, 3};
  std::map<unsigned, double> by_set;
  std::vector<int> perm = base_perm;
  std::size_t row = 0;
  for (std::uint64_t order = 0; order < 24; ++order) {
    unsigned mask = 0;
    for (int m = 1; m <= 4; ++m, ++row) {
      const auto& c = curves[row];
      EXPECT_EQ(c.order_id, order);
      EXPECT_EQ(c.m, m);
      mask |= 1u << perm[m - 1];
      auto [it, fresh] = by_set.emplace(mask, c.psnr);
      if (!fresh) EXPECT_EQ(it->second, c.psnr);
    }
    std::next_permutation(perm.begin(), perm.end());
  }
  EXPECT_EQ(by_set.size(), 15u);
  EXPECT_EQ(by_set.at(0b0011), psnr(camera(), reconstruct(camera_baseline(), std::vector<int>{1, 2})));
}

TEST(Curves, DuplicateCurvesAreFlat) {
  const PacketSet ps = encode_duplicate(camera(), 4, CodecParams{CodecId::InternalBlockDCT, 100.0, 8});
  const auto curves = psnr_order_curves(camera(), ps);
  for (const auto& c : curves) EXPECT_EQ(c.psnr, curves.front().psnr);
}

TEST(Curves, TwoPackets) {
  const std::vector<ShiftSpec> s{{0, 0, ShiftMode::ReplicatePad}, {3, 3, ShiftMode::ReplicatePad}};
  const PacketSet ps = encode_baseline(camera(), s, CodecParams{CodecId::InternalBlockDCT, 100.0, 8});
  const auto curves = psnr_order_curves(camera(), ps);
  ASSERT_EQ(curves.size(), 4u);
  EXPECT_EQ(curves[1].psnr, curves[3].psnr);
  EXPECT_NE(curves[0].psnr, curves[2].psnr);
  const std::string csv = curves_to_csv(curves);
  EXPECT_EQ(csv.rfind("order_id,m,psnr\n0,1,", 0), 0u);
}

TEST(Curves, RefusesLargeK) {
  std::vector<Image> back(10, Image(2, 2));
  EXPECT_THROW(psnr_order_curves_decoded(Image(2, 2), back), InvalidConfig);
}

TEST(Reports, CsvLayout) {
  const auto rep = evaluate(camera(), camera_baseline(), 0.0);
  const std::string csv = report_to_csv(rep);
  EXPECT_EQ(csv.rfind("m,subset,mse,psnr\n1,1,", 0), 0u);
  EXPECT_NE(csv.find("\n2,1-3,"), std::string::npos);
  EXPECT_NE(csv.find("\n4,1-2-3-4,"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 15);
  EXPECT_EQ(report_to_csv(evaluate(camera(), camera_baseline(), 0.0)), csv);
}
