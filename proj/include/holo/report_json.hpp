#pragma once

// JSON export of evaluation reports (nlohmann/json). Infinite or NaN values
// are written as null.

#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

#include "holo/evaluation.hpp"

namespace holo {

namespace json_detail {

inline nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

inline const char* codec_name(CodecId id) { return id == CodecId::InternalBlockDCT ? "internal-block-dct" : "external"; }

}  // namespace json_detail

inline nlohmann::json report_to_json(const EvaluationReport& rep, std::optional<double> ratio = std::nullopt) {
  using json_detail::finite_or_null;
  nlohmann::json j;
  j["config"] = {{"mode", rep.mode.name()},
                 {"K", rep.k},
                 {"codec", json_detail::codec_name(rep.codec.codec_id)},
                 {"theta", rep.codec.theta},
                 {"block_size", rep.codec.block_size},
                 {"ratio", ratio ? finite_or_null(*ratio) : nlohmann::json()}};
  j["sigma"] = rep.sigma;
  j["progressive_refinement"] = rep.progressive_refinement;
  j["mean_mse_sequence"] = rep.mean_mse_sequence;
  nlohmann::json per_m = nlohmann::json::array();
  for (std::size_t i = 0; i < rep.per_m.size(); ++i) {
    const auto& st = rep.per_m[i];
    nlohmann::json subsets = nlohmann::json::array();
    for (const auto& s : st.per_subset)
      subsets.push_back({{"indices", s.indices}, {"mse", s.mse}, {"psnr", finite_or_null(s.psnr)}});
    per_m.push_back({{"m", st.m},
                     {"mean_mse", st.mean_mse},
                     {"var_mse", st.var_mse},
                     {"mean_psnr", finite_or_null(st.mean_psnr)},
                     {"std_psnr", finite_or_null(st.std_psnr)},
                     {"sigma_similar", static_cast<bool>(rep.sigma_similar[i])},
                     {"subsets", std::move(subsets)}});
  }
  j["per_m"] = std::move(per_m);
  return j;
}

}  // namespace holo
