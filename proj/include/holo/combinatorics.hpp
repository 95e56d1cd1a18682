#pragma once

#include <cstdint>
#include <vector>

#include "holo/error.hpp"

namespace holo {

using IndexTuple = std::vector<int>;

constexpr std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

/// All m-combinations of {1..K} as strictly increasing tuples, in
/// lexicographic order.
inline std::vector<IndexTuple> enumerate_subsets(int k, int m) {
  if (k < 1 || m < 1 || m > k) throw InvalidConfig("subset size must satisfy 1 <= m <= K");
  std::vector<IndexTuple> out;
  out.reserve(binomial(k, m));
  IndexTuple cur(m);
  for (int i = 0; i < m; ++i) cur[i] = i + 1;
  while (true) {
    out.push_back(cur);
    int pos = m - 1;
    while (pos >= 0 && cur[pos] == k - (m - 1 - pos)) --pos;
    if (pos < 0) break;
    ++cur[pos];
    for (int j = pos + 1; j < m; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace holo
