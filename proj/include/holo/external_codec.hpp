#pragma once

// Adapter running command-line encoder/decoder tools (e.g. a JPEG2000
// implementation) as the black-box codec. Command templates may contain
// {in}, {out} and {ratio}; the encoder reads a PGM and writes a bitstream,
// the decoder reads the bitstream and writes a PGM.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include <sys/wait.h>
#include <unistd.h>

#include "holo/codec.hpp"
#include "holo/error.hpp"
#include "holo/image.hpp"
#include "holo/pgm.hpp"

namespace holo {

struct ExternalCommands {
  std::string encode;
  std::string decode;

  /// Reads HOLO_EXT_ENCODE / HOLO_EXT_DECODE. Empty when either is unset.
  static std::optional<ExternalCommands> from_env() {
    const char* enc = std::getenv("HOLO_EXT_ENCODE");
    const char* dec = std::getenv("HOLO_EXT_DECODE");
    if (enc == nullptr || dec == nullptr || *enc == '\0' || *dec == '\0') return std::nullopt;
    return ExternalCommands{enc, dec};
  }
};

namespace ext_detail {

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'')
      q += "'\\''";
    else
      q += c;
  }
  return q + "'";
}

inline std::string substitute(std::string tmpl, const std::string& in, const std::string& out, double ratio) {
  auto replace_all = [&](const std::string& key, const std::string& value) {
    for (std::size_t pos = 0; (pos = tmpl.find(key, pos)) != std::string::npos; pos += value.size())
      tmpl.replace(pos, key.size(), value);
  };
  replace_all("{in}", quote(in));
  replace_all("{out}", quote(out));
  replace_all("{ratio}", format_number(ratio));
  return tmpl;
}

// Owns a private temporary directory for the lifetime of one call.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "holo-ext-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) throw ExternalCodecError("cannot create temporary directory", "");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const char* name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void run_tool(const std::string& command, const std::filesystem::path& log, const char* stage) {
  const std::string full = "(" + command + ") >" + quote(log.string()) + " 2>&1";
  const int status = std::system(full.c_str());
  if (status == -1) throw ExternalCodecError(std::string(stage) + ": failed to launch tool", "");
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    throw ExternalCodecError(std::string(stage) + " exited with status " + std::to_string(code), slurp(log));
  }
}

}  // namespace ext_detail

class ExternalCodec {
 public:
  explicit ExternalCodec(ExternalCommands cmds) : cmds_(std::move(cmds)) {}

  const ExternalCommands& commands() const { return cmds_; }

  /// `ratio` is substituted for {ratio}. Input samples are quantized to 8 bits.
  Packet compress(const Image& img, double ratio) const {
    if (img.empty()) throw InvalidInput("cannot compress an empty image");
    ext_detail::TempDir dir;
    const auto in = dir / "input.pgm";
    const auto out = dir / "packet.bin";
    save_pgm(in, img);
    ext_detail::run_tool(ext_detail::substitute(cmds_.encode, in.string(), out.string(), ratio), dir / "log.txt",
                         "external encoder");
    if (!std::filesystem::exists(out))
      throw ExternalCodecError("external encoder produced no output file", ext_detail::slurp(dir / "log.txt"));
    return Packet{read_file_bytes(out)};
  }

  Image decompress(const Packet& pkt) const {
    ext_detail::TempDir dir;
    const auto in = dir / "packet.bin";
    const auto out = dir / "decoded.pgm";
    write_file_bytes(in, pkt.bytes);
    ext_detail::run_tool(ext_detail::substitute(cmds_.decode, in.string(), out.string(), 0.0), dir / "log.txt",
                         "external decoder");
    if (!std::filesystem::exists(out))
      throw ExternalCodecError("external decoder produced no output file", ext_detail::slurp(dir / "log.txt"));
    try {
      return load_pgm(out);
    } catch (const Error& e) {
      throw ExternalCodecError(std::string("external decoder output unreadable: ") + e.what(), "");
    }
  }

 private:
  ExternalCommands cmds_;
};

/// Encodes with the external tool and immediately decodes the result.
inline std::pair<Packet, Image> external_codec_roundtrip(const Image& img, const CodecParams& p,
                                                         const std::string& encode_cmd,
                                                         const std::string& decode_cmd) {
  p.validate();
  const ExternalCodec codec(ExternalCommands{encode_cmd, decode_cmd});
  Packet pkt = codec.compress(img, p.theta);
  Image decoded = codec.decompress(pkt);
  return {std::move(pkt), std::move(decoded)};
}

}  // namespace holo
