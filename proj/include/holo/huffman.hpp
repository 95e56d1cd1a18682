#pragma once

// Canonical prefix-free codes over 16-bit symbol ids.

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <span>
#include <vector>

#include "holo/bytes.hpp"
#include "holo/error.hpp"

namespace holo::huffman {

inline constexpr int kMaxCodeLength = 57;

struct CodeEntry {
  std::uint16_t symbol = 0;
  std::uint8_t length = 0;

  friend bool operator==(const CodeEntry&, const CodeEntry&) = default;
};

/// Code lengths from symbol frequencies. Ties are broken by node creation
/// order, so the result depends only on the (symbol, count) map.
inline std::vector<CodeEntry> build_lengths(const std::map<std::uint16_t, std::uint64_t>& freq) {
  std::vector<CodeEntry> table;
  if (freq.empty()) return table;
  if (freq.size() == 1) {
    table.push_back({freq.begin()->first, 1});
    return table;
  }

  struct Node {
    std::uint64_t weight;
    std::size_t order;
    int left, right;  // -1 for leaves
  };
  std::vector<Node> nodes;
  std::vector<std::uint16_t> leaf_symbol;
  using Item = std::pair<std::uint64_t, std::size_t>;  // (weight, node index)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (const auto& [sym, count] : freq) {
    nodes.push_back({count, nodes.size(), -1, -1});
    leaf_symbol.push_back(sym);
    heap.push({count, nodes.size() - 1});
  }
  while (heap.size() > 1) {
    const auto a = heap.top();
    heap.pop();
    const auto b = heap.top();
    heap.pop();
    nodes.push_back({a.first + b.first, nodes.size(), static_cast<int>(a.second), static_cast<int>(b.second)});
    heap.push({a.first + b.first, nodes.size() - 1});
  }

  std::vector<int> depth(nodes.size(), 0);
  for (std::size_t n = nodes.size(); n-- > 0;) {
    if (nodes[n].left >= 0) {
      depth[nodes[n].left] = depth[n] + 1;
      depth[nodes[n].right] = depth[n] + 1;
    }
  }
  for (std::size_t leaf = 0; leaf < leaf_symbol.size(); ++leaf) {
    if (depth[leaf] > kMaxCodeLength) throw InvalidInput("prefix code too deep");
    table.push_back({leaf_symbol[leaf], static_cast<std::uint8_t>(depth[leaf])});
  }
  std::sort(table.begin(), table.end(), [](const CodeEntry& a, const CodeEntry& b) {
    return a.length != b.length ? a.length < b.length : a.symbol < b.symbol;
  });
  return table;
}

/// Encoder side: symbol -> (code, length), assigned canonically.
class Encoder {
 public:
  explicit Encoder(std::span<const CodeEntry> table) {
    std::uint64_t code = 0;
    int prev_len = 0;
    for (const auto& e : table) {
      code <<= (e.length - prev_len);
      codes_[e.symbol] = {code, e.length};
      ++code;
      prev_len = e.length;
    }
  }

  void write(BitWriter& out, std::uint16_t symbol) const {
    const auto it = codes_.find(symbol);
    const auto [code, len] = it->second;
    out.put(code, len);
  }

 private:
  std::map<std::uint16_t, std::pair<std::uint64_t, int>> codes_;
};

/// Decoder side. Validates the table (lengths in range, unique symbols,
/// canonical ordering, Kraft inequality) and throws DecodeError otherwise.
class Decoder {
 public:
  explicit Decoder(std::span<const CodeEntry> table) : symbols_(table.size()) {
    if (table.empty()) throw DecodeError("empty code table");
    std::uint64_t kraft = 0;  // in units of 2^-kMaxCodeLength
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto& e = table[i];
      if (e.length < 1 || e.length > kMaxCodeLength) throw DecodeError("code length out of range");
      if (i > 0) {
        const auto& p = table[i - 1];
        if (p.length > e.length || (p.length == e.length && p.symbol >= e.symbol))
          throw DecodeError("code table not in canonical order");
      }
      kraft += std::uint64_t{1} << (kMaxCodeLength - e.length);
      if (kraft > (std::uint64_t{1} << kMaxCodeLength)) throw DecodeError("code table violates Kraft inequality");
      symbols_[i] = e.symbol;
      ++count_[e.length];
    }
    std::uint64_t code = 0;
    std::size_t index = 0;
    for (int len = 1; len <= kMaxCodeLength; ++len) {
      first_code_[len] = code;
      first_index_[len] = index;
      code = (code + count_[len]) << 1;
      index += count_[len];
    }
    std::vector<std::uint16_t> sorted = symbols_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw DecodeError("duplicate code symbol");
  }

  template <class Reader>
  std::uint16_t read(Reader& in) const {
    std::uint64_t code = 0;
    for (int len = 1; len <= kMaxCodeLength; ++len) {
      code = (code << 1) | in.bit();
      if (code - first_code_[len] < count_[len]) return symbols_[first_index_[len] + (code - first_code_[len])];
    }
    throw DecodeError("invalid prefix code in bitstream");
  }

 private:
  std::vector<std::uint16_t> symbols_;
  std::uint64_t count_[kMaxCodeLength + 1] = {};
  std::uint64_t first_code_[kMaxCodeLength + 1] = {};
  std::size_t first_index_[kMaxCodeLength + 1] = {};
};

}  // namespace holo::huffman
