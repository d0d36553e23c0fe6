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

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "silk/halfedge.hpp"
#include "silk/layering.hpp"
#include "support/fixtures.hpp"

namespace silk {
namespace {

std::vector<int> AllFaces(const HalfEdgeMesh& he) {
  std::vector<int> faces(he.FaceCount());
  std::iota(faces.begin(), faces.end(), 0);
  return faces;
}

LayeredLabeling Label(const QuantizedMesh& q, int maxWidth = 200) {
  const HalfEdgeMesh he = HalfEdgeMesh::Build(q);
  return LabelComponent(he, q.vertices, AllFaces(he), maxWidth);
}

// Oracle: the smallest (origin y, z, x, destination y, z, x) over every
// directed edge of the faces, both directions included.
std::pair<int, int> BruteForceStart(const std::vector<Vec3i>& p, const std::vector<Face>& faces) {
  std::pair<int, int> best{-1, -1};
  std::array<int, 6> bestKey{};
  for (const Face& f : faces) {
    for (int k = 0; k < 3; ++k) {
      for (auto [o, d] : {std::pair{f[k], f[(k + 1) % 3]}, std::pair{f[(k + 1) % 3], f[k]}}) {
        const std::array<int, 6> key = {p[o][1], p[o][2], p[o][0], p[d][1], p[d][2], p[d][0]};
        if (best.first < 0 || key < bestKey) {
          bestKey = key;
          best = {o, d};
        }
      }
    }
  }
  return best;
}

// Oracle: all-pairs shortest paths by Floyd-Warshall.
std::vector<int> BruteForceDistances(const std::vector<Face>& faces, int n, int from) {
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int v = 0; v < n; ++v) d[v][v] = 0;
  for (const Face& f : faces) {
    for (int k = 0; k < 3; ++k) d[f[k]][f[(k + 1) % 3]] = d[f[(k + 1) % 3]][f[k]] = 1;
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d[from];
}

TEST(StartHalfEdgeTest, TriangleStartsAtSmallestYzx) {
  QuantizedMesh q;
  q.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  q.faces = {{0, 1, 2}};
  const HalfEdgeMesh he = HalfEdgeMesh::Build(q);
  const StartHalfEdge s = SelectStartHalfEdge(he, q.vertices, {0});
  const auto oracle = BruteForceStart(q.vertices, q.faces);
  EXPECT_EQ(s.origin, 0);
  EXPECT_EQ(s.destination, 1);
  EXPECT_EQ(std::pair(s.origin, s.destination), oracle);
}

TEST(StartHalfEdgeTest, DuplicateOriginsTieBreakOnDestination) {
  QuantizedMesh q;
  q.vertices = {{0, 0, 0}, {5, 0, 0}, {5, 9, 0}, {0, 0, 0}, {2, 0, 0}, {2, 9, 0}};
  q.faces = {{0, 1, 2}, {3, 4, 5}};
  const HalfEdgeMesh he = HalfEdgeMesh::Build(q);
  const StartHalfEdge s = SelectStartHalfEdge(he, q.vertices, {0, 1});
  EXPECT_EQ(s.origin, 3);
  EXPECT_EQ(s.destination, 4);
  EXPECT_EQ(std::pair(s.origin, s.destination), BruteForceStart(q.vertices, q.faces));
}

TEST(StartHalfEdgeTest, MatchesBruteForceUnderAxisSwap) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    QuantizedMesh q = testing::Grid(testing::RandomManifold(seed));
    for (int pass = 0; pass < 2; ++pass) {
      const HalfEdgeMesh he = HalfEdgeMesh::Build(q);
      const StartHalfEdge s = SelectStartHalfEdge(he, q.vertices, AllFaces(he));
      EXPECT_EQ(std::pair(s.origin, s.destination), BruteForceStart(q.vertices, q.faces))
          << "seed " << seed << " pass " << pass;
      for (Vec3i& p : q.vertices) std::swap(p[0], p[1]);
    }
  }
}

TEST(LayerVerticesTest, TriangleAndPath) {
  const std::vector<std::vector<int>> triangle = {{1, 2}, {0, 2}, {0, 1}};
  EXPECT_EQ(LayerVertices(triangle, 0), (std::vector<int>{0, 1, 1}));
  const std::vector<std::vector<int>> path = {{1}, {0, 2}, {1, 3}, {2}};
  EXPECT_EQ(LayerVertices(path, 0), (std::vector<int>{0, 1, 2, 3}));
}

TEST(LayerVerticesTest, OctahedronWidthsMatchShortestPaths) {
  const QuantizedMesh q = testing::Grid(testing::Octahedron());
  for (int origin = 0; origin < q.VertexCount(); ++origin) {
    const auto adjacency = VertexAdjacency(q.faces, q.VertexCount());
    const std::vector<int> layers = LayerVertices(adjacency, origin);
    EXPECT_EQ(layers, BruteForceDistances(q.faces, q.VertexCount(), origin));
    std::vector<int> widths(3, 0);
    for (int l : layers) ++widths[l];
    EXPECT_EQ(widths, (std::vector<int>{1, 4, 1}));
  }
}

TEST(SortLayersTest, TriangleOrder) {
  QuantizedMesh q;
  q.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  q.faces = {{0, 1, 2}};
  const LayeredLabeling l = Label(q);
  ASSERT_EQ(l.LayerCount(), 2);
  EXPECT_EQ(l.layers[0], (std::vector<int>{0}));
  EXPECT_EQ(l.layers[1], (std::vector<int>{1, 2}));
  EXPECT_EQ(l.orderOf[1], 1);
  EXPECT_EQ(l.orderOf[2], 2);
}

// Vertex a's fan, counter-clockwise: o, x1, g, h, b, x2. The start half-edge
// is o -> a, so a is the first vertex of layer 1 and its next-layer
// neighbours come out as g, h, b.
TEST(SortLayersTest, FanAroundVertexGivesCounterClockwiseOrder) {
  enum { o, a, x1, x2, g, h, b };
  QuantizedMesh q;
  q.vertices = {{10, 0, 0}, {10, 10, 0}, {20, 20, 0}, {0, 20, 0},
                {25, 30, 0}, {10, 35, 0}, {0, 30, 5}};
  q.faces = {{a, o, x1}, {a, x1, g}, {a, g, h}, {a, h, b}, {a, b, x2}, {a, x2, o}};
  const LayeredLabeling l = Label(q);
  ASSERT_EQ(l.start.origin, o);
  ASSERT_EQ(l.start.destination, a);
  ASSERT_EQ(l.LayerCount(), 3);
  EXPECT_EQ(l.layers[2], (std::vector<int>{g, h, b}));
}

TEST(SortLayersTest, MirrorReversesCyclicOrder) {
  // Only meshes whose start half-edge survives the mirror are comparable
  // (an x tie in the start key flips with it).
  std::vector<RawMesh> corpus = {testing::Octahedron(), testing::Icosphere(0)};
  for (std::uint64_t seed = 0; seed < 12; ++seed) corpus.push_back(testing::RandomManifold(seed));
  int compared = 0;
  for (const RawMesh& raw : corpus) {
    const QuantizedMesh q = testing::Grid(raw);
    QuantizedMesh mirror = q;
    for (Vec3i& p : mirror.vertices) p[0] = 127 - p[0];
    for (Face& f : mirror.faces) std::swap(f[1], f[2]);
    const LayeredLabeling l = Label(q), m = Label(mirror);
    if (l.start.origin != m.start.origin || l.start.destination != m.start.destination) continue;
    ++compared;
    ASSERT_EQ(l.LayerCount(), m.LayerCount());
    // Layer 1 is a ring around the origin starting at the destination.
    std::vector<int> reversed = l.layers[1];
    std::reverse(reversed.begin() + 1, reversed.end());
    EXPECT_EQ(m.layers[1], reversed);
    for (int L = 0; L < l.LayerCount(); ++L) {
      EXPECT_EQ(std::set<int>(l.layers[L].begin(), l.layers[L].end()),
                std::set<int>(m.layers[L].begin(), m.layers[L].end()));
    }
  }
  EXPECT_GE(compared, 3);
}

TEST(SortLayersTest, WidthAboveCapacityIsError) {
  const QuantizedMesh q = testing::Grid(testing::WideFan(201));
  try {
    Label(q, 200);
    FAIL() << "expected a capacity error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCapacityExceeded);
  }
  EXPECT_EQ(Label(q, 201).MaxWidth(), 201);
}

TEST(BuildMatricesTest, Triangle) {
  QuantizedMesh q;
  q.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  q.faces = {{0, 1, 2}};
  const LayerMatrices m = BuildMatrices(Label(q), UniqueEdges(q.faces));
  ASSERT_EQ(m.self.size(), 2u);
  EXPECT_TRUE(m.self[0].entries.empty());
  EXPECT_EQ(m.self[1].entries, (std::vector<std::pair<int, int>>{{0, 1}}));
  EXPECT_EQ(m.between[1].rows, (std::vector<std::vector<int>>{{0}, {0}}));
}

TEST(BuildMatricesTest, PathHasOnlyBetweenEntries) {
  const std::vector<std::vector<int>> path = {{1}, {0, 2}, {1, 3}, {2}};
  const LayeredLabeling l = SortLayers(path, LayerVertices(path, 0), 0);
  const LayerMatrices m = BuildMatrices(l, {{0, 1}, {1, 2}, {2, 3}});
  for (const auto& s : m.self) EXPECT_TRUE(s.entries.empty());
  for (int L = 1; L < 4; ++L) EXPECT_EQ(m.between[L].EntryCount(), 1);
}

TEST(BuildMatricesTest, OctahedronEquatorIsFourCycle) {
  const QuantizedMesh q = testing::Grid(testing::Octahedron());
  const LayeredLabeling l = Label(q);
  const LayerMatrices m = BuildMatrices(l, UniqueEdges(q.faces));
  // Oracle: adjacency between consecutive ring positions of layer 1.
  const auto edges = UniqueEdges(q.faces);
  std::vector<std::pair<int, int>> expected;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (std::binary_search(edges.begin(), edges.end(), MakeEdge(l.layers[1][i], l.layers[1][j]))) {
        expected.push_back({i, j});
      }
    }
  }
  EXPECT_EQ(m.self[1].entries, expected);
  EXPECT_EQ(m.self[1].entries, (std::vector<std::pair<int, int>>{{0, 1}, {0, 3}, {1, 2}, {2, 3}}));
}

// Structural invariants over generated meshes.
TEST(LayeringPropertyTest, Invariants) {
  std::vector<QuantizedMesh> corpus;
  for (std::uint64_t seed = 0; seed < 12; ++seed) corpus.push_back(testing::Grid(testing::RandomManifold(seed)));
  corpus.push_back(testing::Grid(testing::Torus()));
  corpus.push_back(testing::Grid(testing::FlatGrid()));
  for (const QuantizedMesh& q : corpus) {
    const LayeredLabeling l = Label(q);
    const auto edges = UniqueEdges(q.faces);
    EXPECT_EQ(l.layerOf[l.start.origin], 0);
    EXPECT_EQ(l.layerOf[l.start.destination], 1);
    EXPECT_EQ(l.orderOf[l.start.destination], 1);
    for (auto [u, v] : edges) EXPECT_LE(std::abs(l.layerOf[u] - l.layerOf[v]), 1);
    std::set<std::pair<int, int>> coords;
    for (int v = 0; v < q.VertexCount(); ++v) coords.insert({l.layerOf[v], l.orderOf[v]});
    EXPECT_EQ(static_cast<int>(coords.size()), q.VertexCount());
    EXPECT_EQ(l.VertexCount(), q.VertexCount());
    const LayerMatrices m = BuildMatrices(l, edges);
    EXPECT_EQ(m.EntryCount(), static_cast<int>(edges.size()));
    for (int L = 1; L < l.LayerCount(); ++L) {
      for (const auto& row : m.between[L].rows) EXPECT_FALSE(row.empty());
    }
    const LayeredLabeling again = Label(q);
    EXPECT_EQ(again.layers, l.layers);
  }
}

TEST(LayeringPropertyTest, RelabelingIsIsomorphic) {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const QuantizedMesh q = testing::Grid(testing::RandomManifold(seed));
    std::vector<int> perm(q.VertexCount());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    QuantizedMesh p = q;
    for (int v = 0; v < q.VertexCount(); ++v) p.vertices[perm[v]] = q.vertices[v];
    for (Face& f : p.faces) {
      for (int& c : f) c = perm[c];
    }
    const LayeredLabeling a = Label(q), b = Label(p);
    ASSERT_EQ(a.LayerCount(), b.LayerCount());
    for (int L = 0; L < a.LayerCount(); ++L) {
      ASSERT_EQ(a.layers[L].size(), b.layers[L].size());
      for (std::size_t i = 0; i < a.layers[L].size(); ++i) {
        EXPECT_EQ(perm[a.layers[L][i]], b.layers[L][i]);
      }
    }
  }
}

}  // namespace
}  // namespace silk
