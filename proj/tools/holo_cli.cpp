// holo: command-line front end for shift-based holographic compression.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holo/holo.hpp"
#include "holo/report_json.hpp"

namespace fs = std::filesystem;
using namespace holo;

namespace {

enum class Mode { Duplicate, Baseline, Opt2, OptK };

struct EncodeOptions {
  std::string input;
  std::string output;
  std::string mode = "baseline";
  std::optional<int> k;  // default: length of --shifts, else 4
  double ratio = 50.0;
  std::string shifts;  // "dy,dx;dy,dx;..."
  bool cyclic = false;
  std::string codec = "internal";
  int block_size = 8;
  std::optional<double> theta;
  std::optional<double> mu, lambda, beta;
  std::optional<int> iterations;
  std::string trace;
};

Mode parse_mode(const std::string& s) {
  if (s == "duplicate") return Mode::Duplicate;
  if (s == "baseline") return Mode::Baseline;
  if (s == "opt2") return Mode::Opt2;
  if (s == "optk") return Mode::OptK;
  throw InvalidConfig("unknown mode '" + s + "'");
}

std::vector<int> parse_int_list(const std::string& s, char sep) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw InvalidSubset("cannot parse '" + item + "' as an integer");
    }
    if (used != item.size()) throw InvalidSubset("cannot parse '" + item + "' as an integer");
    out.push_back(v);
  }
  return out;
}

std::vector<ShiftSpec> resolve_shifts(const EncodeOptions& o) {
  const ShiftMode mode = o.cyclic ? ShiftMode::Cyclic : ShiftMode::ReplicatePad;
  std::vector<ShiftSpec> shifts;
  if (!o.shifts.empty()) {
    std::stringstream ss(o.shifts);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
      std::vector<int> v;
      try {
        v = parse_int_list(pair, ',');
      } catch (const InvalidSubset& e) {
        throw InvalidConfig(std::string("bad --shifts: ") + e.what());
      }
      if (v.size() != 2) throw InvalidConfig("each shift needs two integers dy,dx");
      shifts.push_back({v[0], v[1], mode});
    }
    if (o.k && static_cast<int>(shifts.size()) != *o.k) throw InvalidConfig("--shifts must list exactly K shifts");
  } else {
    shifts = standard_shift_grid(o.k.value_or(4));
    for (auto& s : shifts) s.mode = mode;
  }
  return shifts;
}

CodecParams base_codec_params(const std::string& codec, int block_size) {
  CodecParams p;
  if (codec == "internal")
    p.codec_id = CodecId::InternalBlockDCT;
  else if (codec == "external")
    p.codec_id = CodecId::External;
  else
    throw InvalidConfig("unknown codec '" + codec + "'");
  p.block_size = block_size;
  return p;
}

// Writes to a sibling temporary file and renames, so the target only
// appears once complete.
void write_atomically(const std::string& path, const std::string& content) {
  const fs::path target(path);
  const fs::path tmp = target.string() + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidInput("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

void write_atomically(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  write_atomically(path, std::string(bytes.begin(), bytes.end()));
}

struct EncodeResult {
  PacketSet set;
  std::optional<CostTrace> trace;
  double theta = 0.0;
};

EncodeResult run_encode(const Image& x, const EncodeOptions& o) {
  const Mode mode = parse_mode(o.mode);
  CodecParams params = base_codec_params(o.codec, o.block_size);
  const Codec codec = Codec::for_params({params.codec_id, 1.0, params.block_size});

  std::vector<ShiftSpec> shifts;
  if (mode == Mode::Duplicate) {
    if (o.k.value_or(4) < 1) throw InvalidConfig("K must be positive");
    shifts.assign(1, ShiftSpec{});
  } else {
    shifts = resolve_shifts(o);
  }

  EncodeResult r;
  r.theta = o.theta ? *o.theta : codec.compress_to_ratio(apply_shift(x, shifts[0]), o.ratio).theta;
  params.theta = r.theta;
  params.validate();

  switch (mode) {
    case Mode::Duplicate: r.set = encode_duplicate(x, o.k.value_or(4), codec, params); break;
    case Mode::Baseline: r.set = encode_baseline(x, shifts, codec, params); break;
    case Mode::Opt2:
    case Mode::OptK: {
      OptimizerParams p = default_params(mode == Mode::Opt2 ? Profile::Opt2 : Profile::OptK,
                                         static_cast<int>(shifts.size()), x.size(), o.ratio);
      if (o.mu) p.mu = *o.mu;
      if (o.lambda) p.lambda = *o.lambda;
      if (o.beta) p.beta = *o.beta;
      if (o.iterations) p.iterations = *o.iterations;
      p.theta = r.theta;
      auto res = optimize(x, shifts, codec, params, p);
      r.set = std::move(res.packets);
      r.trace = std::move(res.trace);
      break;
    }
  }
  return r;
}

void print_packet_rates(const PacketSet& ps) {
  const double pixels = static_cast<double>(ps.original_dims.pixels());
  std::int64_t total = 0;
  for (int i = 0; i < ps.k(); ++i) {
    const auto bits = ps.packets[i].bit_cost();
    total += bits;
    std::printf("packet %d: %lld bits, %.4f bpp\n", i + 1, static_cast<long long>(bits), bits / pixels);
  }
  std::printf("total: %lld bits, %.4f bpp\n", static_cast<long long>(total), total / pixels);
  const auto overhead = 8 * container_overhead_bytes(ps);
  std::printf("container header: %zu bits (%.4f bpp)\n", overhead, overhead / pixels);
}

void add_encode_flags(CLI::App* cmd, EncodeOptions& o, bool require_output) {
  cmd->add_option("-i,--input", o.input, "Input PGM image")->required();
  auto* out = cmd->add_option("-o,--output", o.output, require_output ? "Output .holo container" : "Output CSV file");
  if (require_output) out->required();
  cmd->add_option("-K", o.k, "Number of packets (default 4, or the --shifts count)");
  cmd->add_option("--ratio", o.ratio, "Compression ratio (8 bpp reference)")->capture_default_str();
  cmd->add_option("--shifts", o.shifts, "Explicit shifts 'dy,dx;dy,dx;...' (default: standard grid for K)");
  cmd->add_flag("--cyclic", o.cyclic, "Use cyclic shifts instead of replicate padding");
  cmd->add_option("--codec", o.codec, "internal | external (HOLO_EXT_ENCODE / HOLO_EXT_DECODE)")
      ->capture_default_str();
  cmd->add_option("--block-size", o.block_size, "Internal codec tile size")->capture_default_str();
  cmd->add_option("--theta", o.theta, "Codec rate parameter (skips the ratio search)");
  cmd->add_option("--mu", o.mu, "Override mu");
  cmd->add_option("--lambda", o.lambda, "Override lambda");
  cmd->add_option("--beta", o.beta, "Override beta");
  cmd->add_option("--iterations", o.iterations, "Override the iteration count");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shift-based holographic image compression"};
  app.require_subcommand(1);

  EncodeOptions enc;
  auto* encode = app.add_subcommand("encode", "Encode an image into K packets");
  add_encode_flags(encode, enc, true);
  encode->add_option("--mode", enc.mode, "duplicate | baseline | opt2 | optk")->capture_default_str();
  encode->add_option("--trace", enc.trace, "Also write the optimization cost trace (CSV)");

  std::string dec_in, dec_out, dec_use, dec_original;
  auto* decode = app.add_subcommand("decode", "Reconstruct from a subset of packets");
  decode->add_option("-i,--input", dec_in, "Input .holo container")->required();
  decode->add_option("-o,--output", dec_out, "Output PGM")->required();
  decode->add_option("--use", dec_use, "1-based packet indices, e.g. 1,3 (default: all)");
  decode->add_option("--original", dec_original, "Original PGM; prints the PSNR");

  std::string ev_in, ev_original, ev_json, ev_csv;
  double ev_sigma = 0.0;
  auto* eval = app.add_subcommand("eval", "Mean/std statistics for every subset size");
  eval->add_option("-i,--input", ev_in, "Input .holo container")->required();
  eval->add_option("--original", ev_original, "Original PGM")->required();
  eval->add_option("--json", ev_json, "Write the full report as JSON");
  eval->add_option("--csv", ev_csv, "Write one row per (m, subset)");
  eval->add_option("--sigma", ev_sigma, "Similar-usefulness threshold (MSE std)")->capture_default_str();

  std::string cv_in, cv_original, cv_out;
  auto* curves = app.add_subcommand("curves", "PSNR versus packet count for every append order");
  curves->add_option("-i,--input", cv_in, "Input .holo container")->required();
  curves->add_option("--original", cv_original, "Original PGM")->required();
  curves->add_option("-o,--output", cv_out, "Output CSV")->required();

  EncodeOptions tr;
  tr.mode = "optk";
  std::string tr_holo;
  auto* trace = app.add_subcommand("trace", "Run the optimizer and export its cost trace");
  add_encode_flags(trace, tr, true);
  trace->add_option("--mode", tr.mode, "opt2 | optk")->capture_default_str();
  trace->add_option("--holo", tr_holo, "Also write the optimized container");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*encode) {
      const Image x = load_pgm(enc.input);
      auto r = run_encode(x, enc);
      write_atomically(enc.output, save_packet_set(r.set));
      if (!enc.trace.empty() && r.trace) write_atomically(enc.trace, r.trace->to_csv());
      std::printf("mode %s, K = %d, theta = %.6g\n", r.set.mode.name().c_str(), r.set.k(), r.theta);
      print_packet_rates(r.set);
    } else if (*decode) {
      const PacketSet ps = load_packet_set(read_file_bytes(dec_in));
      std::vector<int> use;
      if (dec_use.empty()) {
        for (int i = 1; i <= ps.k(); ++i) use.push_back(i);
      } else {
        use = parse_int_list(dec_use, ',');
      }
      const Image rec = reconstruct(ps, use);
      write_atomically(dec_out, write_pgm(rec));
      if (!dec_original.empty()) std::printf("PSNR %.2f dB\n", psnr(load_pgm(dec_original), rec));
    } else if (*eval) {
      const PacketSet ps = load_packet_set(read_file_bytes(ev_in));
      const Image x = load_pgm(ev_original);
      const auto rep = evaluate(x, ps, ev_sigma);
      if (!ev_json.empty()) write_atomically(ev_json, report_to_json(rep).dump(2) + "\n");
      if (!ev_csv.empty()) write_atomically(ev_csv, report_to_csv(rep));
      std::cout << report_summary(rep);
    } else if (*curves) {
      const PacketSet ps = load_packet_set(read_file_bytes(cv_in));
      const Image x = load_pgm(cv_original);
      write_atomically(cv_out, curves_to_csv(psnr_order_curves(x, ps)));
    } else if (*trace) {
      const Mode mode = parse_mode(tr.mode);
      if (mode != Mode::Opt2 && mode != Mode::OptK) throw InvalidConfig("trace needs --mode opt2 or optk");
      const Image x = load_pgm(tr.input);
      auto r = run_encode(x, tr);
      write_atomically(tr.output, r.trace->to_csv());
      if (!tr_holo.empty()) write_atomically(tr_holo, save_packet_set(r.set));
      const auto& last = r.trace->records.back();
      std::printf("%zu iterations, final lagrangian %.6g\n", r.trace->records.size(), last.lagrangian);
    }
  } catch (const InvalidSubset& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ContainerError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const ExternalCodecError& e) {
    std::fprintf(stderr, "error: %s\n%s", e.what(), e.diagnostics().c_str());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
