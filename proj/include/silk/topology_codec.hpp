// Copyright 2026 The Silkmesh Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Row codes for the two adjacency matrices.
//
// Self-layer rows: a W-bit window over cyclic offsets 1..W (bit k set means
// a connection to row (i + k + 1) mod M) plus one extra token per
// connection the window cannot reach. Every unordered entry {i, j} is
// written exactly once: by the row whose forward cyclic offset to the other
// is smaller (ties to the lower row) when that offset is <= W, otherwise as
// an extra on the lower row with value j - (i + 1 + W).
//
// Between-layer rows: the first connected column x followed by a length-W'
// window. Admissible windows are those where "1" + window has at most two
// runs of ones; there are Y(W') of them, numbered in ascending binary order
// (first cell most significant). token = x * Y + pattern index. Columns are
// read cyclically so that the first vertex of a layer can connect to both
// the first and the last vertex of the previous one.
//
// A row that no single window covers (a vertex whose previous-layer
// neighbours lie on both sides of a cap, or where two layer fronts meet on
// a torus) is written as several tokens whose columns are united.
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "silk/error.hpp"
#include "silk/layering.hpp"

namespace silk {

struct SelfRowCode {
  int windowToken = 0;
  std::vector<int> extraTokens;  // strictly increasing

  bool operator==(const SelfRowCode&) const = default;
};

/// Encodes every row of `s`. Throws kCapacityExceeded if an extra distance
/// does not fit in [0, m).
inline std::vector<SelfRowCode> EncodeSelfLayer(const SelfLayerMatrix& s, int window,
                                                int m) {
  const int size = s.size;
  std::vector<SelfRowCode> rows(size);
  for (auto [i, j] : s.entries) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= size || i == j) {
      throw Error(ErrorKind::kInvalidArgument, "self-layer entry out of range");
    }
    const int forward = j - i;          // offset from i to j
    const int backward = size - forward;  // offset from j to i
    const int owner = forward <= backward ? i : j;
    const int offset = forward <= backward ? forward : backward;
    if (offset <= window) {
      rows[owner].windowToken |= 1 << (offset - 1);
      continue;
    }
    const int extra = j - (i + 1 + window);
    if (extra >= m) {
      throw Error(ErrorKind::kCapacityExceeded,
                  "self-layer connection distance " + std::to_string(extra) +
                      " exceeds the extra-token range");
    }
    rows[i].extraTokens.push_back(extra);
  }
  for (auto& r : rows) std::sort(r.extraTokens.begin(), r.extraTokens.end());
  return rows;
}

inline SelfRowCode EncodeSelfRow(const SelfLayerMatrix& s, int i, int window, int m) {
  return EncodeSelfLayer(s, window, m).at(i);
}

/// Appends the entries of one row. All-or-nothing: throws kInvalidToken,
/// leaving `entries` untouched, when a window bit or an extra points at or
/// beyond `size`.
inline void DecodeSelfRow(const SelfRowCode& code, int row, int size, int window, int m,
                          std::vector<std::pair<int, int>>& entries) {
  if (code.windowToken < 0 || code.windowToken >= (1 << window)) {
    throw Error(ErrorKind::kInvalidToken, "self window token out of range");
  }
  std::vector<std::pair<int, int>> found;
  for (int k = 0; k < window; ++k) {
    if (!(code.windowToken >> k & 1)) continue;
    if (k + 1 >= size) {
      throw Error(ErrorKind::kInvalidToken, "self window offset " + std::to_string(k + 1) +
                                                " in a layer of " + std::to_string(size));
    }
    found.push_back({row, (row + k + 1) % size});
  }
  for (int e : code.extraTokens) {
    const int j = row + 1 + window + e;
    if (e < 0 || e >= m || j >= size) {
      throw Error(ErrorKind::kInvalidToken,
                  "self extra token " + std::to_string(e) + " points past the layer");
    }
    found.push_back({row, j});
  }
  entries.insert(entries.end(), found.begin(), found.end());
}

/// Inverse of EncodeSelfLayer.
inline SelfLayerMatrix DecodeSelfTokens(const std::vector<SelfRowCode>& rows, int window,
                                        int m, int layer = 0) {
  SelfLayerMatrix s;
  s.layer = layer;
  s.size = static_cast<int>(rows.size());
  for (int r = 0; r < s.size; ++r) DecodeSelfRow(rows[r], r, s.size, window, m, s.entries);
  s.Normalize();
  return s;
}

/// Binomial coefficient, 0 when k > n.
inline long long Binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Y(W') = 2 W' + 2 C(W'-1, 2) + C(W'-1, 3).
inline int BetweenPatternCount(int window) {
  return static_cast<int>(2LL * window + 2 * Binomial(window - 1, 2) +
                          Binomial(window - 1, 3));
}

class BetweenCodebook {
 public:
  explicit BetweenCodebook(int window) : window_(window) {
    if (window < 1 || window > 16) {
      throw Error(ErrorKind::kInvalidArgument, "between window must be in [1, 16]");
    }
    index_.assign(std::size_t{1} << window, -1);
    for (std::uint32_t p = 0; p < (1u << window); ++p) {
      if (!Admissible(p)) continue;
      index_[p] = static_cast<int>(patterns_.size());
      patterns_.push_back(p);
    }
    if (static_cast<int>(patterns_.size()) != BetweenPatternCount(window)) {
      throw Error(ErrorKind::kInvalidArgument, "between codebook size mismatch");
    }
  }

  int window() const { return window_; }
  int size() const { return static_cast<int>(patterns_.size()); }

  /// Window bits with cell k (offset k + 1 after the leading one) at bit
  /// window - 1 - k.
  std::uint32_t Pattern(int index) const { return patterns_.at(index); }

  /// -1 when the pattern is not admissible.
  int IndexOf(std::uint32_t pattern) const {
    return pattern < index_.size() ? index_[pattern] : -1;
  }

  bool Cell(std::uint32_t pattern, int k) const {
    return pattern >> (window_ - 1 - k) & 1;
  }

 private:
  bool Admissible(std::uint32_t pattern) const {
    int runs = 1;  // the leading one
    bool previous = true;
    for (int k = 0; k < window_; ++k) {
      const bool bit = Cell(pattern, k);
      if (bit && !previous) ++runs;
      previous = bit;
    }
    return runs <= 2;
  }

  int window_;
  std::vector<std::uint32_t> patterns_;
  std::vector<int> index_;
};

/// Token for one between-layer row over `cols` columns. Throws
/// kUnencodableRow when the row is empty or does not fit one window.
inline int EncodeBetweenRow(const std::vector<int>& row, int cols,
                            const BetweenCodebook& book) {
  auto describe = [&]() {
    std::string s = "{";
    for (std::size_t k = 0; k < row.size(); ++k) {
      s += (k ? "," : "") + std::to_string(row[k]);
    }
    return s + "} over " + std::to_string(cols) + " columns";
  };
  if (row.empty()) throw Error(ErrorKind::kUnencodableRow, "empty row " + describe());
  const int w = book.window();
  for (int x : row) {
    std::uint32_t pattern = 0;
    bool fits = true;
    for (int c : row) {
      if (c < 0 || c >= cols) {
        throw Error(ErrorKind::kInvalidArgument, "column out of range in " + describe());
      }
      const int k = ((c - x) % cols + cols) % cols;
      if (k == 0) continue;
      if (k > w) {
        fits = false;
        break;
      }
      pattern |= 1u << (w - k);
    }
    if (!fits) continue;
    const int index = book.IndexOf(pattern);
    if (index < 0) continue;
    return x * book.size() + index;
  }
  throw Error(ErrorKind::kUnencodableRow, "row " + describe() + " fits no pattern");
}

/// Sorted columns for a between token. Throws kInvalidToken if the start or
/// a window cell falls outside `cols` columns.
inline std::vector<int> DecodeBetweenToken(int token, int cols, const BetweenCodebook& book) {
  if (token < 0) throw Error(ErrorKind::kInvalidToken, "negative between token");
  const int x = token / book.size();
  const std::uint32_t pattern = book.Pattern(token % book.size());
  if (x >= cols) {
    throw Error(ErrorKind::kInvalidToken, "between start column " + std::to_string(x) +
                                              " beyond " + std::to_string(cols) +
                                              " columns");
  }
  std::vector<int> row = {x};
  for (int k = 1; k <= book.window(); ++k) {
    if (!book.Cell(pattern, k - 1)) continue;
    if (k >= cols) {
      throw Error(ErrorKind::kInvalidToken, "between window wraps past its start");
    }
    row.push_back((x + k) % cols);
  }
  std::sort(row.begin(), row.end());
  return row;
}

/// Tokens for one between-layer row: a single token whenever one window
/// covers the row (identical to EncodeBetweenRow), otherwise a greedy cover.
/// Each step starts at the uncovered column whose window takes the most
/// uncovered columns (ties to the lowest column).
inline std::vector<int> EncodeBetweenRowTokens(const std::vector<int>& row, int cols,
                                               const BetweenCodebook& book) {
  try {
    return {EncodeBetweenRow(row, cols, book)};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kUnencodableRow || row.empty()) throw;
  }
  const int w = book.window();
  std::vector<int> left = row;
  std::sort(left.begin(), left.end());
  left.erase(std::unique(left.begin(), left.end()), left.end());
  std::vector<int> tokens;
  while (!left.empty()) {
    int bestX = -1, bestCount = -1;
    std::uint32_t bestPattern = 0;
    for (int x : left) {
      std::vector<bool> at(w + 1, false);
      for (int c : left) {
        const int k = ((c - x) % cols + cols) % cols;
        if (k >= 1 && k <= w) at[k] = true;
      }
      // Take cells in offset order while "1" + window keeps two runs.
      std::uint32_t pattern = 0;
      int runs = 1, count = 1;
      bool previous = true;
      for (int k = 1; k <= w; ++k) {
        bool bit = at[k];
        if (bit && !previous && runs == 2) bit = false;
        if (bit && !previous) ++runs;
        if (bit) {
          pattern |= 1u << (w - k);
          ++count;
        }
        previous = bit;
      }
      if (count > bestCount) {
        bestX = x;
        bestCount = count;
        bestPattern = pattern;
      }
    }
    tokens.push_back(bestX * book.size() + book.IndexOf(bestPattern));
    const auto covered = DecodeBetweenToken(tokens.back(), cols, book);
    std::erase_if(left, [&](int c) {
      return std::binary_search(covered.begin(), covered.end(), c);
    });
  }
  return tokens;
}

}  // namespace silk
