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

// Token id layout.
//
//   0          C  (component start)
//   1          U  (next layer)
//   2          E  (component end)
//   3..        4096 block tokens, 8^3 cells of the 128^3 grid
//   4099..     512 offset tokens, position inside a block
//   4611..     2^W self window tokens, then m extra self tokens
//   ..         m * Y between tokens
//
// With W = 8, W' = 5, m = 200 the total is 10,267. Axes are packed
// x-major: block = bx * 256 + by * 16 + bz, offset = ox * 64 + oy * 8 + oz.
#pragma once

#include <string>

#include "silk/config.hpp"
#include "silk/error.hpp"
#include "silk/mesh.hpp"
#include "silk/topology_codec.hpp"

namespace silk {

constexpr int kGridResolution = 128;
constexpr int kBlockSize = 8;
constexpr int kBlocksPerAxis = kGridResolution / kBlockSize;

enum class TokenClass {
  kStart,
  kUp,
  kEnd,
  kBlock,
  kOffset,
  kSelfWindow,
  kSelfExtra,
  kBetween,
  kInvalid,
};

inline const char* TokenClassName(TokenClass c) {
  switch (c) {
    case TokenClass::kStart: return "C";
    case TokenClass::kUp: return "U";
    case TokenClass::kEnd: return "E";
    case TokenClass::kBlock: return "block";
    case TokenClass::kOffset: return "offset";
    case TokenClass::kSelfWindow: return "self";
    case TokenClass::kSelfExtra: return "self_extra";
    case TokenClass::kBetween: return "between";
    case TokenClass::kInvalid: return "invalid";
  }
  return "invalid";
}

class Vocabulary {
 public:
  static constexpr int kStart = 0;
  static constexpr int kUp = 1;
  static constexpr int kEnd = 2;
  static constexpr int kBlockBase = 3;
  static constexpr int kBlockCount = kBlocksPerAxis * kBlocksPerAxis * kBlocksPerAxis;
  static constexpr int kOffsetBase = kBlockBase + kBlockCount;
  static constexpr int kOffsetCount = kBlockSize * kBlockSize * kBlockSize;
  static constexpr int kSelfBase = kOffsetBase + kOffsetCount;
  static constexpr int kMaxTotal = 1 << 16;  // tokens are stored as u16

  explicit Vocabulary(const CodecConfig& config = {})
      : selfWindow_(config.selfWindow),
        maxLayerWidth_(config.maxLayerWidth),
        betweenWindow_(config.betweenWindow),
        betweenPatterns_(BetweenPatternCount(config.betweenWindow)) {
    config.Validate();
    if (Total() > kMaxTotal) {
      throw Error(ErrorKind::kInvalidArgument,
                  "vocabulary of " + std::to_string(Total()) +
                      " tokens does not fit 16-bit token ids");
    }
  }

  int selfWindow() const { return selfWindow_; }
  int betweenWindow() const { return betweenWindow_; }
  int maxLayerWidth() const { return maxLayerWidth_; }
  int betweenPatterns() const { return betweenPatterns_; }

  long long SelfWindowCount() const { return 1LL << selfWindow_; }
  long long SelfCount() const { return SelfWindowCount() + maxLayerWidth_; }
  long long SelfExtraBase() const { return kSelfBase + SelfWindowCount(); }
  long long BetweenBase() const { return kSelfBase + SelfCount(); }
  long long BetweenCount() const {
    return static_cast<long long>(maxLayerWidth_) * betweenPatterns_;
  }
  long long Total() const { return BetweenBase() + BetweenCount(); }

  TokenClass Classify(long long token) const {
    if (token < 0) return TokenClass::kInvalid;
    if (token == kStart) return TokenClass::kStart;
    if (token == kUp) return TokenClass::kUp;
    if (token == kEnd) return TokenClass::kEnd;
    if (token < kOffsetBase) return TokenClass::kBlock;
    if (token < kSelfBase) return TokenClass::kOffset;
    if (token < SelfExtraBase()) return TokenClass::kSelfWindow;
    if (token < BetweenBase()) return TokenClass::kSelfExtra;
    if (token < Total()) return TokenClass::kBetween;
    return TokenClass::kInvalid;
  }

 private:
  int selfWindow_;
  int maxLayerWidth_;
  int betweenWindow_;
  int betweenPatterns_;
};

/// Block and offset indices of one grid vertex; the emitted token ids are
/// kBlockBase + block and kOffsetBase + offset.
struct VertexTokenPair {
  int block = 0;
  int offset = 0;

  bool operator==(const VertexTokenPair&) const = default;
};

inline VertexTokenPair VertexToTokens(const Vec3i& q) {
  for (int d = 0; d < 3; ++d) {
    if (q[d] < 0 || q[d] >= kGridResolution) {
      throw Error(ErrorKind::kInvalidArgument, "grid coordinate out of [0, 128)");
    }
  }
  const int n = kBlocksPerAxis, s = kBlockSize;
  const int block = (q[0] / s) * n * n + (q[1] / s) * n + q[2] / s;
  const int offset = (q[0] % s) * s * s + (q[1] % s) * s + q[2] % s;
  return {block, offset};
}

inline Vec3i TokensToVertex(const VertexTokenPair& t) {
  const int block = t.block, offset = t.offset;
  if (block < 0 || block >= Vocabulary::kBlockCount || offset < 0 ||
      offset >= Vocabulary::kOffsetCount) {
    throw Error(ErrorKind::kInvalidToken, "not a block/offset token pair");
  }
  const int n = kBlocksPerAxis, s = kBlockSize;
  return {(block / (n * n)) * s + offset / (s * s),
          (block / n % n) * s + offset / s % s,
          (block % n) * s + offset % s};
}

}  // namespace silk
