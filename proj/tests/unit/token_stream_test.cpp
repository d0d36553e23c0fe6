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

#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "silk/pipeline.hpp"
#include "silk/token_stream.hpp"
#include "support/fixtures.hpp"

namespace silk {
namespace {

using Triple = std::array<Vec3i, 3>;

// Faces as position triples, rotated so the smallest position leads. Two
// meshes with distinct vertex positions agree on this iff they have the
// same oriented faces.
std::multiset<Triple> OrientedPositions(const QuantizedMesh& m) {
  std::multiset<Triple> out;
  for (const Face& f : m.faces) {
    Triple t = {m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]]};
    const auto lead = std::min_element(t.begin(), t.end()) - t.begin();
    std::rotate(t.begin(), t.begin() + lead, t.end());
    out.insert(t);
  }
  return out;
}

std::multiset<Vec3i> UsedPositions(const QuantizedMesh& m) {
  std::set<int> used;
  for (const Face& f : m.faces) used.insert(f.begin(), f.end());
  std::multiset<Vec3i> out;
  for (int v : used) out.insert(m.vertices[v]);
  return out;
}

QuantizedMesh Prepared(const RawMesh& raw) { return PrepareMesh(raw).mesh; }

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kIo;
}

TEST(VocabularyTest, DefaultLayout) {
  const Vocabulary v;
  EXPECT_EQ(v.SelfCount(), 456);
  EXPECT_EQ(v.betweenPatterns(), 26);
  EXPECT_EQ(v.BetweenCount(), 5200);
  EXPECT_EQ(Vocabulary::kBlockBase, 3);
  EXPECT_EQ(Vocabulary::kOffsetBase, 4099);
  EXPECT_EQ(Vocabulary::kSelfBase, 4611);
  EXPECT_EQ(v.BetweenBase(), 5067);
  EXPECT_EQ(v.Total(), 3 + 4096 + 512 + 456 + 5200);
  EXPECT_EQ(v.Total(), 10267);
}

TEST(VocabularyTest, ClassesAreContiguous) {
  const Vocabulary v;
  TokenClass previous = v.Classify(0);
  int changes = 0;
  for (long long t = 1; t < v.Total(); ++t) {
    const TokenClass c = v.Classify(t);
    ASSERT_NE(c, TokenClass::kInvalid);
    if (c != previous) ++changes;
    previous = c;
  }
  EXPECT_EQ(changes, 7);
  EXPECT_EQ(v.Classify(v.Total()), TokenClass::kInvalid);
  EXPECT_EQ(v.Classify(-1), TokenClass::kInvalid);
}

TEST(VocabularyTest, RejectsTablesPastSixteenBits) {
  CodecConfig c;
  c.selfWindow = 16;
  EXPECT_THROW(Vocabulary{c}, Error);
}

TEST(VertexTokenTest, Examples) {
  EXPECT_EQ(VertexToTokens({0, 0, 0}), (VertexTokenPair{0, 0}));
  EXPECT_EQ(VertexToTokens({64, 64, 64}), (VertexTokenPair{8 * 256 + 8 * 16 + 8, 0}));
  EXPECT_EQ(VertexToTokens({64, 64, 64}).block, 2184);
  EXPECT_EQ(VertexToTokens({127, 127, 127}), (VertexTokenPair{4095, 511}));
  EXPECT_THROW(VertexToTokens({128, 0, 0}), Error);
  EXPECT_THROW(VertexToTokens({0, -1, 0}), Error);
  EXPECT_THROW(TokensToVertex({4096, 0}), Error);
}

TEST(VertexTokenTest, ExhaustiveBijection) {
  std::vector<bool> seen(4096 * 512, false);
  for (int x = 0; x < 128; ++x) {
    for (int y = 0; y < 128; ++y) {
      for (int z = 0; z < 128; ++z) {
        const VertexTokenPair t = VertexToTokens({x, y, z});
        const int key = t.block * 512 + t.offset;
        ASSERT_FALSE(seen[key]);
        seen[key] = true;
        ASSERT_EQ(TokensToVertex(t), (Vec3i{x, y, z}));
      }
    }
  }
}

TEST(EncodeTest, TriangleIsThirteenTokens) {
  const QuantizedMesh q = Prepared(testing::Triangle());
  const TokenSequence t = EncodeMesh(q);
  ASSERT_EQ(t.size(), 13u);
  const Vocabulary v;
  const std::vector<TokenClass> expected = {
      TokenClass::kStart,  TokenClass::kBlock,      TokenClass::kOffset,  TokenClass::kUp,
      TokenClass::kBlock,  TokenClass::kOffset,     TokenClass::kSelfWindow, TokenClass::kBetween,
      TokenClass::kBlock,  TokenClass::kOffset,     TokenClass::kSelfWindow, TokenClass::kBetween,
      TokenClass::kEnd};
  for (std::size_t k = 0; k < t.size(); ++k) EXPECT_EQ(v.Classify(t[k]), expected[k]) << k;
  // The first layer-1 vertex carries the edge to the second.
  EXPECT_EQ(t[6], Vocabulary::kSelfBase + 1);
}

TEST(EncodeTest, TwoTrianglesAreTwoBlocks) {
  const RawMesh two = testing::Merge(
      {testing::Triangle(), testing::Translated(testing::Triangle(), {3, 0, 0})});
  const TokenSequence t = EncodeMesh(Prepared(two));
  ASSERT_EQ(t.size(), 26u);
  EXPECT_EQ(std::count(t.begin(), t.end(), Vocabulary::kStart), 2);
  EXPECT_EQ(std::count(t.begin(), t.end(), Vocabulary::kEnd), 2);
}

TEST(EncodeTest, WideLayerIsCapacityError) {
  EXPECT_EQ(KindOf([] { EncodeMesh(Prepared(testing::WideFan(201))); }),
            ErrorKind::kCapacityExceeded);
  EXPECT_NO_THROW(EncodeMesh(Prepared(testing::WideFan(200))));
}

TEST(EncodeTest, TokenAccounting) {
  for (const RawMesh& raw : {testing::Triangle(), testing::Octahedron(), testing::Icosphere(2),
                             testing::Torus(), testing::RandomManifold(3)}) {
    const QuantizedMesh q = Prepared(raw);
    EncodeTrace trace;
    const TokenSequence t = EncodeMesh(q, {}, &trace);
    std::size_t expected = 0;
    for (const auto& l : trace.labelings) {
      int vertices = 0;
      for (const auto& layer : l.layers) vertices += static_cast<int>(layer.size());
      const int upper = vertices - 1;
      expected += 2 + (l.LayerCount() - 1) + 2 * vertices + upper + upper;
    }
    expected += trace.extraSelfTokens + trace.extraBetweenTokens;
    EXPECT_EQ(t.size(), expected);
  }
}

TEST(RoundTripTest, FixturesReproduceFaces) {
  std::vector<RawMesh> corpus = {testing::Triangle(), testing::QuadFan(), testing::Tetrahedron(),
                                 testing::Octahedron(), testing::Cube(), testing::Icosphere(2),
                                 testing::Torus(), testing::FlatGrid()};
  for (std::uint64_t s = 0; s < 6; ++s) corpus.push_back(testing::RandomManifold(s));
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const QuantizedMesh q = Prepared(corpus[k]);
    const DecodedMesh d = DecodeTokens(EncodeMesh(q));
    EXPECT_EQ(UsedPositions(d.mesh), UsedPositions(q)) << "mesh " << k;
    EXPECT_EQ(OrientedPositions(d.mesh), OrientedPositions(q)) << "mesh " << k;
    EXPECT_EQ(CountWindingConflicts(d.mesh.faces), 0) << "mesh " << k;
  }
}

TEST(RoundTripTest, OctahedronIsOutward) {
  const QuantizedMesh q = Prepared(testing::Octahedron());
  const DecodedMesh d = DecodeTokens(EncodeMesh(q));
  EXPECT_EQ(d.mesh.FaceCount(), 8);
  EXPECT_EQ(CountBoundaryEdges(d.mesh.faces), 0);
  EXPECT_GT(SignedVolume6(d.mesh.vertices, d.mesh.faces), 0.0);
  // Every face normal points away from the centre.
  Vec3d centre = {0, 0, 0};
  for (const Vec3i& p : d.mesh.vertices) centre = centre + (1.0 / 6.0) * ToVec3d(p);
  for (const Face& f : d.mesh.faces) {
    const Vec3d a = ToVec3d(d.mesh.vertices[f[0]]), b = ToVec3d(d.mesh.vertices[f[1]]),
                c = ToVec3d(d.mesh.vertices[f[2]]);
    const Vec3d centroid = (1.0 / 3.0) * (a + b + c);
    EXPECT_GT(Dot(Cross(b - a, c - a), centroid - centre), 0.0);
  }
}

TEST(RoundTripTest, InwardInputStaysInward) {
  RawMesh inward = testing::Icosphere(1);
  for (Face& f : inward.faces) std::swap(f[1], f[2]);
  const QuantizedMesh q = Prepared(inward);
  const DecodedMesh d = DecodeTokens(EncodeMesh(q));
  EXPECT_LT(SignedVolume6(d.mesh.vertices, d.mesh.faces), 0.0);
  EXPECT_EQ(OrientedPositions(d.mesh), OrientedPositions(q));
}

TEST(RoundTripTest, Icosphere4TokensPerFace) {
  const QuantizedMesh q = Prepared(testing::Icosphere(4));
  const TokenSequence t = EncodeMesh(q);
  const double perFace = static_cast<double>(t.size()) / q.FaceCount();
  EXPECT_GE(perFace, 1.8);
  EXPECT_LE(perFace, 2.4);
}

TEST(DecodeTest, MissingEndIsGrammarErrorAtEnd) {
  TokenSequence t = EncodeMesh(Prepared(testing::Triangle()));
  t.pop_back();
  try {
    DecodeTokens(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGrammar);
    EXPECT_EQ(e.position(), t.size());
  }
}

TEST(DecodeTest, WrongClassReportsPosition) {
  TokenSequence t = EncodeMesh(Prepared(testing::Triangle()));
  t[3] = Vocabulary::kEnd;
  try {
    DecodeTokens(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGrammar);
    EXPECT_EQ(e.position(), 3u);
  }
  t[3] = 20000;
  EXPECT_EQ(KindOf([&] { DecodeTokens(t); }), ErrorKind::kInvalidToken);
}

TEST(DecodeTest, SalvageKeepsCompleteGroups) {
  const QuantizedMesh q = Prepared(testing::Icosphere(2));
  TokenSequence t = EncodeMesh(q);
  t.resize(t.size() / 2);
  EXPECT_THROW(DecodeTokens(t), Error);
  const DecodedMesh d = DecodeTokens(t, {}, DecodeMode::kSalvage);
  EXPECT_TRUE(d.truncated);
  EXPECT_LE(d.validTokens, t.size());
  EXPECT_FALSE(d.warnings.empty());
  EXPECT_GT(d.mesh.FaceCount(), 0);
  EXPECT_LT(d.mesh.FaceCount(), q.FaceCount());
  // Every salvaged face is a face of the input.
  const auto all = OrientedPositions(q);
  for (const Triple& f : OrientedPositions(d.mesh)) EXPECT_TRUE(all.count(f));
}

TEST(DecodeTest, EmptySequenceIsEmptyMesh) {
  const DecodedMesh d = DecodeTokens({});
  EXPECT_EQ(d.mesh.FaceCount(), 0);
}

TEST(DecodeTest, FuzzedStringsFailWithPosition) {
  const Vocabulary v;
  const TokenSequence base = EncodeMesh(Prepared(testing::Icosphere(1)));
  std::mt19937_64 rng(5);
  int accepted = 0, rejected = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    TokenSequence t;
    if (trial % 2 == 0) {
      const int n = static_cast<int>(rng() % 40);
      for (int k = 0; k < n; ++k) t.push_back(static_cast<int>(rng() % v.Total()));
    } else {
      t = base;
      const int edits = 1 + static_cast<int>(rng() % 3);
      for (int k = 0; k < edits; ++k) {
        t[rng() % t.size()] = static_cast<int>(rng() % v.Total());
      }
    }
    try {
      const DecodedMesh d = DecodeTokens(t);
      for (const Face& f : d.mesh.faces) {
        for (int c : f) ASSERT_LT(c, d.mesh.VertexCount());
      }
      ++accepted;
    } catch (const Error& e) {
      ASSERT_NE(e.position(), Error::npos) << e.what();
      ASSERT_LE(e.position(), t.size());
      ++rejected;
    }
    EXPECT_NO_THROW(DecodeTokens(t, {}, DecodeMode::kSalvage));
  }
  EXPECT_GT(rejected, 0);
  EXPECT_GT(accepted + rejected, 0);
}

TEST(FileFormatTest, EmptySequenceIsHeaderOnly) {
  const std::string data = SerializeTokens({});
  EXPECT_EQ(data.size(), kTokenHeaderBytes);
  EXPECT_TRUE(DeserializeTokens(data, 10267).empty());
}

TEST(FileFormatTest, TriangleFileLayout) {
  const TokenSequence t = EncodeMesh(Prepared(testing::Triangle()));
  const std::string data = SerializeTokens(t);
  ASSERT_EQ(data.size(), 10u + 26u);
  EXPECT_EQ(data.substr(0, 4), "SILK");
  EXPECT_EQ(data[4], 1);
  EXPECT_EQ(data[5], 0);
  EXPECT_EQ(static_cast<unsigned char>(data[6]), 13);
  EXPECT_EQ(data[7] | data[8] | data[9], 0);
  // Little-endian u16 payload.
  const int last = static_cast<unsigned char>(data[34]) | static_cast<unsigned char>(data[35]) << 8;
  EXPECT_EQ(last, Vocabulary::kEnd);
  const int second = static_cast<unsigned char>(data[12]) | static_cast<unsigned char>(data[13]) << 8;
  EXPECT_EQ(second, t[1]);
  EXPECT_EQ(DeserializeTokens(data, 10267), t);
}

TEST(FileFormatTest, CorruptFilesAreRejected) {
  const std::string good = SerializeTokens(EncodeMesh(Prepared(testing::Triangle())));
  std::string bad = good;
  bad[0] = 'X';
  EXPECT_EQ(KindOf([&] { DeserializeTokens(bad, 10267); }), ErrorKind::kFormat);
  bad = good;
  bad[4] = 2;
  EXPECT_EQ(KindOf([&] { DeserializeTokens(bad, 10267); }), ErrorKind::kFormat);
  bad = good;
  bad[5] = 1;
  EXPECT_EQ(KindOf([&] { DeserializeTokens(bad, 10267); }), ErrorKind::kFormat);
  EXPECT_EQ(KindOf([&] { DeserializeTokens(good + "x", 10267); }), ErrorKind::kFormat);
  EXPECT_EQ(KindOf([&] { DeserializeTokens(good.substr(0, 5), 10267); }), ErrorKind::kFormat);
  bad = good;
  bad[34] = static_cast<char>(0xff);
  bad[35] = static_cast<char>(0xff);
  try {
    DeserializeTokens(bad, 10267);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidToken);
    EXPECT_EQ(e.position(), 12u);
  }
}

TEST(FileFormatTest, TruncatedBodyOnlyWithSalvage) {
  const TokenSequence t = EncodeMesh(Prepared(testing::Octahedron()));
  const std::string cut = SerializeTokens(t).substr(0, kTokenHeaderBytes + 2 * 10 + 1);
  EXPECT_EQ(KindOf([&] { DeserializeTokens(cut, 10267); }), ErrorKind::kFormat);
  const TokenSequence prefix = DeserializeTokens(cut, 10267, TokenFormat::kBinary, true);
  EXPECT_EQ(prefix, TokenSequence(t.begin(), t.begin() + 10));
}

TEST(FileFormatTest, TextFormat) {
  const TokenSequence t = {0, 3, 4099, 1, 2};
  EXPECT_EQ(SerializeTokens(t, TokenFormat::kText), "0\n3\n4099\n1\n2\n");
  EXPECT_EQ(DeserializeTokens("0\n 3 \n\n4099\n1\n2", 10267, TokenFormat::kText), t);
  EXPECT_EQ(KindOf([] { DeserializeTokens("0\nx\n", 10267, TokenFormat::kText); }),
            ErrorKind::kFormat);
  EXPECT_EQ(KindOf([] { DeserializeTokens("99999\n", 10267, TokenFormat::kText); }),
            ErrorKind::kInvalidToken);
}

TEST(FileFormatTest, SaveLoadRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "silk_tokens_test.silk";
  const TokenSequence t = EncodeMesh(Prepared(testing::Icosphere(1)));
  SaveTokens(t, path.string());
  EXPECT_EQ(LoadTokens(path.string(), 10267), t);
  std::filesystem::remove(path);
  EXPECT_EQ(KindOf([&] { LoadTokens(path.string(), 10267); }), ErrorKind::kIo);
}

TEST(StatsTest, RatioExamples) {
  const TokenSequence t(2000, 0);
  const SequenceStats s = ComputeSequenceStats(t, 1000);
  EXPECT_NEAR(s.compressionRatio, 2.0 / 9.0, 1e-12);
  EXPECT_NEAR(s.compressionRatio, 0.2222, 5e-5);
  EXPECT_DOUBLE_EQ(s.tokensPerFace, 2.0);

  const QuantizedMesh q = Prepared(testing::Triangle());
  const SequenceStats tri = ComputeSequenceStats(EncodeMesh(q), q);
  EXPECT_EQ(tri.tokens, 13u);
  EXPECT_EQ(tri.faces, 1);
  EXPECT_DOUBLE_EQ(tri.tokensPerFace, 13.0);
  EXPECT_EQ(tri.histogram.at("C"), 1);
  EXPECT_EQ(tri.histogram.at("block"), 3);
  EXPECT_EQ(tri.histogram.at("between"), 2);
}

}  // namespace
}  // namespace silk
