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

// Mesh <-> token sequence.
//
// Per component:
//   C block offset U  group+ U  group+ U ... group+ E
// where the first vertex (layer 0) has no topology tokens and every later
// vertex is one group: block offset self extra* between+. Components appear
// in ascending order of their start half-edge key.
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "silk/config.hpp"
#include "silk/error.hpp"
#include "silk/faces.hpp"
#include "silk/halfedge.hpp"
#include "silk/layering.hpp"
#include "silk/manifold.hpp"
#include "silk/mesh.hpp"
#include "silk/topology_codec.hpp"
#include "silk/vocabulary.hpp"

namespace silk {

using TokenSequence = std::vector<int>;

/// Side results of EncodeMesh.
struct EncodeTrace {
  // Input vertex id of each encoded vertex, in stream order. Decoding
  // assigns ids in the same order.
  std::vector<int> vertexOrder;
  std::vector<LayeredLabeling> labelings;
  std::vector<LayeredComponent> components;  // input vertex ids
  // The input as the decoder will reproduce it: vertices in stream order,
  // faces in derivation order and winding.
  QuantizedMesh canonical;
  int flippedFaces = 0;  // faces re-wound to make each component consistent
  int selfRows = 0;
  int selfRowsWithExtras = 0;
  int extraSelfTokens = 0;
  int extraBetweenTokens = 0;  // between tokens beyond one per row
  int maxLayerWidth = 0;
};

namespace detail {

inline std::string Where(int component, int layer, int row) {
  std::string s = "component " + std::to_string(component);
  if (layer >= 0) s += ", layer " + std::to_string(layer);
  if (row >= 0) s += ", row " + std::to_string(row);
  return s;
}

inline bool SameOrientedFaces(std::vector<Face> a, std::vector<Face> b) {
  for (auto& f : a) f = CanonicalRotation(f);
  for (auto& f : b) f = CanonicalRotation(f);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace detail

/// Encodes a manifold grid mesh. Vertices without faces are not encoded.
/// Throws kNonManifold/kNonOrientable for unsuitable meshes,
/// kCapacityExceeded for layers wider than m, kUnencodableRow for
/// between-layer rows outside the codebook and kAmbiguousTopology when the
/// faces cannot be recovered from the encoded edges.
inline TokenSequence EncodeMesh(const QuantizedMesh& mesh, const CodecConfig& config = {},
                                EncodeTrace* trace = nullptr) {
  const Vocabulary vocab(config);
  const BetweenCodebook book(config.betweenWindow);
  if (mesh.resolution != kGridResolution) {
    throw Error(ErrorKind::kInvalidArgument, "token layout requires a 128-level grid");
  }
  const HalfEdgeMesh he = HalfEdgeMesh::Build(mesh);
  const ComponentLabels labels = ConnectedComponents(he.Faces(), he.VertexCount());
  std::vector<std::vector<int>> componentFaces(labels.componentCount);
  for (int f = 0; f < he.FaceCount(); ++f) {
    componentFaces[labels.componentOf[he.Faces()[f][0]]].push_back(f);
  }
  struct Pending {
    StartHalfEdge start;
    std::vector<int> faces;
  };
  std::vector<Pending> pending;
  for (auto& faces : componentFaces) {
    if (faces.empty()) continue;
    pending.push_back({SelectStartHalfEdge(he, mesh.vertices, faces), std::move(faces)});
  }
  std::sort(pending.begin(), pending.end(), [&](const Pending& a, const Pending& b) {
    return std::make_tuple(detail::StartKey(mesh.vertices, a.start.origin, a.start.destination),
                           a.start.origin, a.start.destination) <
           std::make_tuple(detail::StartKey(mesh.vertices, b.start.origin, b.start.destination),
                           b.start.origin, b.start.destination);
  });

  EncodeTrace local;
  local.flippedFaces = he.FlippedFaces();
  TokenSequence tokens;
  const int w = config.selfWindow, m = config.maxLayerWidth;
  auto emitVertex = [&](int v) {
    const VertexTokenPair t = VertexToTokens(mesh.vertices[v]);
    tokens.push_back(Vocabulary::kBlockBase + t.block);
    tokens.push_back(Vocabulary::kOffsetBase + t.offset);
    local.vertexOrder.push_back(v);
  };
  std::vector<int> newId(mesh.VertexCount(), -1);
  for (int ci = 0; ci < static_cast<int>(pending.size()); ++ci) {
    const Pending& p = pending[ci];
    LayeredLabeling labeling;
    try {
      labeling = LabelComponent(he, mesh.vertices, p.faces, m);
    } catch (const Error& e) {
      throw Error(e.kind(), detail::Where(ci, -1, -1) + ": " + e.message());
    }
    std::vector<Face> faces;
    for (int f : p.faces) faces.push_back(he.Faces()[f]);
    const LayerMatrices matrices = BuildMatrices(labeling, UniqueEdges(faces));
    local.maxLayerWidth = std::max(local.maxLayerWidth, labeling.MaxWidth());

    tokens.push_back(Vocabulary::kStart);
    emitVertex(labeling.layers[0][0]);
    tokens.push_back(Vocabulary::kUp);
    const int layerCount = labeling.LayerCount();
    for (int l = 1; l < layerCount; ++l) {
      std::vector<SelfRowCode> selfRows;
      try {
        selfRows = EncodeSelfLayer(matrices.self[l], w, m);
      } catch (const Error& e) {
        throw Error(e.kind(), detail::Where(ci, l, -1) + ": " + e.message());
      }
      const auto& between = matrices.between[l];
      for (int i = 0; i < static_cast<int>(labeling.layers[l].size()); ++i) {
        emitVertex(labeling.layers[l][i]);
        tokens.push_back(static_cast<int>(Vocabulary::kSelfBase + selfRows[i].windowToken));
        for (int e : selfRows[i].extraTokens) {
          tokens.push_back(static_cast<int>(vocab.SelfExtraBase() + e));
        }
        ++local.selfRows;
        local.selfRowsWithExtras += !selfRows[i].extraTokens.empty();
        local.extraSelfTokens += static_cast<int>(selfRows[i].extraTokens.size());
        std::vector<int> codes;
        try {
          codes = EncodeBetweenRowTokens(between.rows[i], between.cols, book);
        } catch (const Error& e) {
          throw Error(e.kind(), detail::Where(ci, l, i) + ": " + e.message());
        }
        for (int b : codes) tokens.push_back(static_cast<int>(vocab.BetweenBase() + b));
        local.extraBetweenTokens += static_cast<int>(codes.size()) - 1;
      }
      tokens.push_back(l + 1 < layerCount ? Vocabulary::kUp : Vocabulary::kEnd);
    }

    LayeredComponent component{labeling.layers, matrices};
    FaceDerivation derived = DeriveFaces(component);
    if (config.verifyFaces && !detail::SameOrientedFaces(derived.faces, faces)) {
      throw Error(ErrorKind::kAmbiguousTopology,
                  detail::Where(ci, -1, -1) + ": " + std::to_string(faces.size()) +
                      " faces do not survive reconstruction from edges");
    }
    for (const auto& layer : labeling.layers) {
      for (int v : layer) {
        newId[v] = local.canonical.VertexCount();
        local.canonical.vertices.push_back(mesh.vertices[v]);
      }
    }
    for (const Face& f : derived.faces) {
      local.canonical.faces.push_back({newId[f[0]], newId[f[1]], newId[f[2]]});
    }
    local.labelings.push_back(std::move(labeling));
    local.components.push_back(std::move(component));
  }
  local.canonical.resolution = mesh.resolution;
  local.canonical.transform = mesh.transform;
  if (trace) *trace = std::move(local);
  return tokens;
}

enum class DecodeMode { kStrict, kSalvage };

struct DecodedMesh {
  QuantizedMesh mesh;
  std::vector<LayeredComponent> components;  // decoded vertex ids
  int orientationFixes = 0;
  bool truncated = false;         // salvage stopped before the end
  std::size_t validTokens = 0;    // length of the prefix that was used
  std::vector<std::string> warnings;
};

namespace detail {

struct ParsedGroup {
  Vec3i position;
  SelfRowCode self;
  std::vector<int> between;  // at least one
  std::size_t selfPos = 0;
  std::size_t betweenPos = 0;
};

struct ParsedComponent {
  Vec3i origin;
  std::vector<std::vector<ParsedGroup>> layers;  // layers[0] unused
  bool closed = false;
};

class TokenParser {
 public:
  TokenParser(const TokenSequence& tokens, const Vocabulary& vocab)
      : tokens_(tokens), vocab_(vocab) {}

  // Parses everything and throws on the first violation. On failure `out`
  // still holds what was parsed (a partial last component included) and
  // `validEnd` the end of the last complete group.
  void Parse(std::vector<ParsedComponent>& out, std::size_t& validEnd) {
    validEnd = 0;
    while (pos_ < tokens_.size()) {
      out.emplace_back();
      ParsedComponent& c = out.back();
      Expect(TokenClass::kStart, "C");
      c.origin = ReadVertex();
      Expect(TokenClass::kUp, "U");
      c.layers.resize(2);
      while (true) {
        ParsedGroup g;
        g.position = ReadVertex();
        g.selfPos = pos_;
        g.self.windowToken =
            static_cast<int>(Expect(TokenClass::kSelfWindow, "self token") - Vocabulary::kSelfBase);
        while (Peek() == TokenClass::kSelfExtra) {
          g.self.extraTokens.push_back(static_cast<int>(tokens_[pos_++] - vocab_.SelfExtraBase()));
        }
        g.betweenPos = pos_;
        g.between.push_back(
            static_cast<int>(Expect(TokenClass::kBetween, "between token") - vocab_.BetweenBase()));
        while (Peek() == TokenClass::kBetween) {
          g.between.push_back(static_cast<int>(tokens_[pos_++] - vocab_.BetweenBase()));
        }
        c.layers.back().push_back(std::move(g));
        validEnd = pos_;
        const TokenClass next = Peek();
        if (next == TokenClass::kBlock) continue;
        if (next == TokenClass::kUp) {
          ++pos_;
          c.layers.emplace_back();
          continue;
        }
        Expect(TokenClass::kEnd, "block, U or E");
        c.closed = true;
        validEnd = pos_;
        break;
      }
    }
  }

 private:
  TokenClass Peek() const {
    return pos_ < tokens_.size() ? vocab_.Classify(tokens_[pos_]) : TokenClass::kInvalid;
  }

  long long Expect(TokenClass want, const char* what) {
    if (pos_ >= tokens_.size()) {
      throw Error(ErrorKind::kGrammar,
                  std::string("sequence ends where ") + what + " is expected", pos_);
    }
    const TokenClass got = vocab_.Classify(tokens_[pos_]);
    if (got == TokenClass::kInvalid) {
      throw Error(ErrorKind::kInvalidToken,
                  "token " + std::to_string(tokens_[pos_]) + " outside the vocabulary at " +
                      std::to_string(pos_),
                  pos_);
    }
    if (got != want) {
      throw Error(ErrorKind::kGrammar,
                  std::string("expected ") + what + " at " + std::to_string(pos_) +
                      ", found " + TokenClassName(got),
                  pos_);
    }
    return tokens_[pos_++];
  }

  Vec3i ReadVertex() {
    VertexTokenPair t;
    t.block = static_cast<int>(Expect(TokenClass::kBlock, "block token") - Vocabulary::kBlockBase);
    t.offset =
        static_cast<int>(Expect(TokenClass::kOffset, "offset token") - Vocabulary::kOffsetBase);
    return TokensToVertex(t);
  }

  const TokenSequence& tokens_;
  const Vocabulary& vocab_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Rebuilds a mesh from tokens. Strict mode throws kGrammar/kInvalidToken
/// with the offending position. Salvage mode keeps every complete vertex
/// group before the first violation, drops connections that point outside
/// the decoded layers, and reports what it dropped in `warnings`.
inline DecodedMesh DecodeTokens(const TokenSequence& tokens, const CodecConfig& config = {},
                                DecodeMode mode = DecodeMode::kStrict) {
  const Vocabulary vocab(config);
  const BetweenCodebook book(config.betweenWindow);
  const bool strict = mode == DecodeMode::kStrict;
  DecodedMesh out;
  out.mesh.resolution = kGridResolution;

  std::vector<detail::ParsedComponent> parsed;
  std::size_t validEnd = 0;
  detail::TokenParser parser(tokens, vocab);
  try {
    parser.Parse(parsed, validEnd);
    out.validTokens = tokens.size();
  } catch (const Error& e) {
    if (strict) throw;
    out.truncated = true;
    out.validTokens = validEnd;
    out.warnings.push_back(std::string("truncated: ") + e.what());
  }

  for (std::size_t ci = 0; ci < parsed.size(); ++ci) {
    auto& pc = parsed[ci];
    while (!pc.layers.empty() && pc.layers.back().empty()) pc.layers.pop_back();
    if (pc.layers.size() < 2) continue;  // no face can exist
    LayeredComponent comp;
    const int layerCount = static_cast<int>(pc.layers.size());
    comp.layers.resize(layerCount);
    comp.matrices.self.resize(layerCount);
    comp.matrices.between.resize(layerCount);
    comp.layers[0] = {out.mesh.VertexCount()};
    out.mesh.vertices.push_back(pc.origin);
    comp.matrices.self[0].size = 1;
    comp.matrices.between[0].rows.resize(1);
    for (int l = 1; l < layerCount; ++l) {
      const auto& groups = pc.layers[l];
      const int size = static_cast<int>(groups.size());
      const int cols = static_cast<int>(comp.layers[l - 1].size());
      auto& self = comp.matrices.self[l];
      auto& between = comp.matrices.between[l];
      self.layer = between.layer = l;
      self.size = size;
      between.cols = cols;
      between.rows.resize(size);
      for (int i = 0; i < size; ++i) {
        const auto& g = groups[i];
        comp.layers[l].push_back(out.mesh.VertexCount());
        out.mesh.vertices.push_back(g.position);
        try {
          std::vector<int> row;
          for (int b : g.between) {
            const auto part = DecodeBetweenToken(b, cols, book);
            row.insert(row.end(), part.begin(), part.end());
          }
          std::sort(row.begin(), row.end());
          row.erase(std::unique(row.begin(), row.end()), row.end());
          between.rows[i] = std::move(row);
        } catch (const Error& e) {
          if (strict) throw Error(e.kind(), e.message(), g.betweenPos);
          out.warnings.push_back("dropped between row at " + std::to_string(g.betweenPos));
        }
        // Rows are decoded one at a time so that salvage can drop just the
        // rows that point out of range.
        try {
          DecodeSelfRow(g.self, i, size, config.selfWindow, config.maxLayerWidth, self.entries);
        } catch (const Error& e) {
          if (strict) throw Error(e.kind(), e.message(), g.selfPos);
          out.warnings.push_back("dropped self row at " + std::to_string(g.selfPos));
        }
      }
      self.Normalize();
    }
    const FaceDerivation derived = DeriveFaces(comp);
    out.orientationFixes += derived.orientationFixes;
    out.mesh.faces.insert(out.mesh.faces.end(), derived.faces.begin(), derived.faces.end());
    out.components.push_back(std::move(comp));
  }
  return out;
}

/// Re-derives faces of every component (after editing their matrices).
inline void RebuildFaces(DecodedMesh& decoded) {
  decoded.mesh.faces.clear();
  decoded.orientationFixes = 0;
  for (const auto& comp : decoded.components) {
    const FaceDerivation derived = DeriveFaces(comp);
    decoded.orientationFixes += derived.orientationFixes;
    decoded.mesh.faces.insert(decoded.mesh.faces.end(), derived.faces.begin(),
                              derived.faces.end());
  }
}

struct SequenceStats {
  std::size_t tokens = 0;
  int faces = 0;
  int vertices = 0;
  int components = 0;
  double tokensPerFace = 0.0;
  double compressionRatio = 0.0;  // tokens / (9 * faces)
  std::map<std::string, int> histogram;
};

inline SequenceStats ComputeSequenceStats(const TokenSequence& tokens, int faceCount,
                                          const CodecConfig& config = {}) {
  const Vocabulary vocab(config);
  SequenceStats s;
  s.tokens = tokens.size();
  s.faces = faceCount;
  for (int t : tokens) {
    const TokenClass c = vocab.Classify(t);
    ++s.histogram[TokenClassName(c)];
    s.components += c == TokenClass::kStart;
    s.vertices += c == TokenClass::kBlock;
  }
  if (faceCount > 0) {
    s.tokensPerFace = static_cast<double>(s.tokens) / faceCount;
    s.compressionRatio = static_cast<double>(s.tokens) / (9.0 * faceCount);
  }
  return s;
}

inline SequenceStats ComputeSequenceStats(const TokenSequence& tokens,
                                          const QuantizedMesh& mesh,
                                          const CodecConfig& config = {}) {
  return ComputeSequenceStats(tokens, mesh.FaceCount(), config);
}

// Token files: "SILK", version (u8) = 1, reserved (u8) = 0, count (u32 LE),
// then count u16 LE tokens. The text form has one decimal token per line.
enum class TokenFormat { kBinary, kText };

constexpr std::uint8_t kTokenFileVersion = 1;
constexpr std::size_t kTokenHeaderBytes = 10;

inline std::string SerializeTokens(const TokenSequence& tokens,
                                   TokenFormat format = TokenFormat::kBinary) {
  std::string out;
  if (format == TokenFormat::kText) {
    for (int t : tokens) out += std::to_string(t) + '\n';
    return out;
  }
  out.reserve(kTokenHeaderBytes + 2 * tokens.size());
  out += "SILK";
  out += static_cast<char>(kTokenFileVersion);
  out += '\0';
  const auto count = static_cast<std::uint32_t>(tokens.size());
  for (int b = 0; b < 4; ++b) out += static_cast<char>(count >> (8 * b) & 0xff);
  for (int t : tokens) {
    if (t < 0 || t > 0xffff) {
      throw Error(ErrorKind::kInvalidToken, "token " + std::to_string(t) + " exceeds 16 bits");
    }
    out += static_cast<char>(t & 0xff);
    out += static_cast<char>(t >> 8 & 0xff);
  }
  return out;
}

/// Parses a token file body. Tokens must be below `vocabularyTotal`. With
/// `allowTruncated`, a binary body shorter than its count yields the whole
/// tokens that are present (for salvage decoding).
inline TokenSequence DeserializeTokens(const std::string& data, long long vocabularyTotal,
                                       TokenFormat format = TokenFormat::kBinary,
                                       bool allowTruncated = false) {
  TokenSequence tokens;
  auto check = [&](long long t, std::size_t index) {
    if (t < 0 || t >= vocabularyTotal) {
      throw Error(ErrorKind::kInvalidToken,
                  "token " + std::to_string(t) + " at " + std::to_string(index) +
                      " is outside the vocabulary",
                  index);
    }
  };
  if (format == TokenFormat::kText) {
    std::istringstream in(data);
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
      ++lineNo;
      line = detail::Trim(line);
      if (line.empty()) continue;
      long long t = 0;
      auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), t);
      if (ec != std::errc() || ptr != line.data() + line.size()) {
        throw Error(ErrorKind::kFormat, "bad token on line " + std::to_string(lineNo), lineNo);
      }
      check(t, tokens.size());
      tokens.push_back(static_cast<int>(t));
    }
    return tokens;
  }
  if (data.size() < kTokenHeaderBytes || data.compare(0, 4, "SILK") != 0) {
    throw Error(ErrorKind::kFormat, "bad magic, not a token file");
  }
  const auto byte = [&](std::size_t i) { return static_cast<std::uint8_t>(data[i]); };
  if (byte(4) != kTokenFileVersion) {
    throw Error(ErrorKind::kFormat, "unsupported token file version " + std::to_string(byte(4)));
  }
  if (byte(5) != 0) throw Error(ErrorKind::kFormat, "reserved header byte is not zero");
  std::uint32_t count = 0;
  for (int b = 0; b < 4; ++b) count |= static_cast<std::uint32_t>(byte(6 + b)) << (8 * b);
  const std::size_t expected = kTokenHeaderBytes + 2ull * count;
  if (data.size() < expected && allowTruncated) {
    count = static_cast<std::uint32_t>((data.size() - kTokenHeaderBytes) / 2);
  } else if (data.size() != expected) {
    throw Error(ErrorKind::kFormat, "token file length does not match its count");
  }
  tokens.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t at = kTokenHeaderBytes + 2 * i;
    const int t = byte(at) | byte(at + 1) << 8;
    check(t, i);
    tokens.push_back(t);
  }
  return tokens;
}

inline void SaveTokens(const TokenSequence& tokens, const std::string& path,
                       TokenFormat format = TokenFormat::kBinary) {
  const std::string data = SerializeTokens(tokens, format);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorKind::kIo, "write failed for " + path);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorKind::kIo, "cannot move " + tmp + " to " + path);
  }
}

inline TokenSequence LoadTokens(const std::string& path, long long vocabularyTotal,
                                TokenFormat format = TokenFormat::kBinary,
                                bool allowTruncated = false) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return DeserializeTokens(data, vocabularyTotal, format, allowTruncated);
}

}  // namespace silk
