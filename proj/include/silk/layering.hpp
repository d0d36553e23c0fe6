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

// Vertex layering and sorting.
//
// Each connected component gets a start half-edge (smallest by the y-z-x
// key of origin then destination), layers by breadth-first distance from
// the start origin, and a within-layer order obtained by walking every
// layer-(L-1) vertex's one-ring counter-clockwise and appending layer-L
// neighbors on first sight.
//
// Orders (the `i` of a (L, i) coordinate) are 1-based in LayeredLabeling.
// Matrix rows and columns are 0-based: row r of layer L is the vertex with
// order r + 1.
#pragma once

#include <algorithm>
#include <array>
#include <climits>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "silk/error.hpp"
#include "silk/halfedge.hpp"
#include "silk/mesh.hpp"

namespace silk {

struct StartHalfEdge {
  int halfEdge = -1;
  int origin = -1;
  int destination = -1;
};

struct LayeredLabeling {
  StartHalfEdge start;
  std::vector<int> layerOf;  // per mesh vertex; -1 outside the component
  std::vector<int> orderOf;  // per mesh vertex, 1-based; 0 outside
  std::vector<std::vector<int>> layers;

  int LayerCount() const { return static_cast<int>(layers.size()); }
  int VertexCount() const {
    int n = 0;
    for (const auto& layer : layers) n += static_cast<int>(layer.size());
    return n;
  }
  int MaxWidth() const {
    int w = 0;
    for (const auto& layer : layers) w = std::max(w, static_cast<int>(layer.size()));
    return w;
  }
};

/// Symmetric 0-1 matrix of one layer, stored as its upper-triangle entries.
struct SelfLayerMatrix {
  int layer = 0;
  int size = 0;
  std::vector<std::pair<int, int>> entries;  // i < j, sorted

  bool Has(int i, int j) const {
    const auto key = i < j ? std::pair{i, j} : std::pair{j, i};
    return std::binary_search(entries.begin(), entries.end(), key);
  }
  void Normalize() {
    for (auto& [i, j] : entries) {
      if (i > j) std::swap(i, j);
    }
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  }
};

/// Connections from layer L (rows) to layer L-1 (columns).
struct BetweenLayerMatrix {
  int layer = 0;
  int cols = 0;
  std::vector<std::vector<int>> rows;  // sorted column ids per row

  int RowCount() const { return static_cast<int>(rows.size()); }
  int EntryCount() const {
    int n = 0;
    for (const auto& r : rows) n += static_cast<int>(r.size());
    return n;
  }
};

/// Per-layer matrices of one component. Index L holds S_L and B_L; B_0 has
/// one empty row and no columns.
struct LayerMatrices {
  std::vector<SelfLayerMatrix> self;
  std::vector<BetweenLayerMatrix> between;

  int EntryCount() const {
    int n = 0;
    for (const auto& s : self) n += static_cast<int>(s.entries.size());
    for (const auto& b : between) n += b.EntryCount();
    return n;
  }
};

namespace detail {

inline std::array<int, 6> StartKey(const std::vector<Vec3i>& positions, int o, int d) {
  const Vec3i& a = positions[o];
  const Vec3i& b = positions[d];
  return {a[1], a[2], a[0], b[1], b[2], b[0]};
}

}  // namespace detail

/// Smallest face half-edge of the given faces by (origin y, z, x,
/// destination y, z, x), with vertex ids breaking exact ties (coincident
/// duplicates created by repair).
inline StartHalfEdge SelectStartHalfEdge(const HalfEdgeMesh& he,
                                         const std::vector<Vec3i>& positions,
                                         const std::vector<int>& faces) {
  if (faces.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "component has no faces");
  }
  StartHalfEdge best;
  std::tuple<std::array<int, 6>, int, int> bestKey;
  for (int f : faces) {
    for (int k = 0; k < 3; ++k) {
      const int h = 3 * f + k;
      const int o = he.Origin(h), d = he.Dest(h);
      auto key = std::make_tuple(detail::StartKey(positions, o, d), o, d);
      if (best.halfEdge < 0 || key < bestKey) {
        bestKey = key;
        best = {h, o, d};
      }
    }
  }
  return best;
}

/// Breadth-first distance from `origin` over an adjacency list; -1 for
/// unreachable vertices.
inline std::vector<int> LayerVertices(const std::vector<std::vector<int>>& adjacency,
                                      int origin) {
  std::vector<int> layerOf(adjacency.size(), -1);
  std::queue<int> queue;
  layerOf[origin] = 0;
  queue.push(origin);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int u : adjacency[v]) {
      if (layerOf[u] < 0) {
        layerOf[u] = layerOf[v] + 1;
        queue.push(u);
      }
    }
  }
  return layerOf;
}

/// Vertex adjacency (sorted, distinct) from faces.
inline std::vector<std::vector<int>> VertexAdjacency(const std::vector<Face>& faces,
                                                     int vertexCount) {
  std::vector<std::vector<int>> adjacency(vertexCount);
  for (const auto& [a, b] : UniqueEdges(faces)) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  for (auto& list : adjacency) std::sort(list.begin(), list.end());
  return adjacency;
}

namespace detail {

// Shared ordering loop. `ring(p, predecessor)` yields p's neighbors in
// enumeration order.
template <typename Ring>
LayeredLabeling OrderLayers(const std::vector<int>& layerOf, const StartHalfEdge& start,
                            int maxWidth, Ring&& ring) {
  LayeredLabeling out;
  out.start = start;
  out.layerOf = layerOf;
  out.orderOf.assign(layerOf.size(), 0);
  int maxLayer = 0;
  for (int l : layerOf) maxLayer = std::max(maxLayer, l);
  std::vector<int> width(maxLayer + 1, 0);
  for (int l : layerOf) {
    if (l >= 0) ++width[l];
  }
  for (int l = 0; l <= maxLayer; ++l) {
    if (width[l] > maxWidth) {
      throw Error(ErrorKind::kCapacityExceeded,
                  "layer " + std::to_string(l) + " has " + std::to_string(width[l]) +
                      " vertices, more than the maximum of " + std::to_string(maxWidth));
    }
  }
  std::vector<int> predecessor(layerOf.size(), -1);
  out.layers.assign(maxLayer + 1, {});
  out.layers[0] = {start.origin};
  out.orderOf[start.origin] = 1;
  for (int l = 1; l <= maxLayer; ++l) {
    auto& layer = out.layers[l];
    for (int p : out.layers[l - 1]) {
      for (int u : ring(p, predecessor[p])) {
        if (layerOf[u] != l || out.orderOf[u] != 0) continue;
        layer.push_back(u);
        out.orderOf[u] = static_cast<int>(layer.size());
        predecessor[u] = p;
      }
    }
    if (static_cast<int>(layer.size()) != width[l]) {
      throw Error(ErrorKind::kInvalidArgument,
                  "layer " + std::to_string(l) + " has vertices without a parent");
    }
  }
  return out;
}

inline void RotateTo(std::vector<int>& ring, int first) {
  auto it = std::find(ring.begin(), ring.end(), first);
  if (it != ring.end()) std::rotate(ring.begin(), it, ring.end());
}

}  // namespace detail

/// Orders each layer by counter-clockwise one-ring walks. Around the start
/// origin the walk begins at the start destination; around an interior
/// vertex it begins at the vertex's own predecessor; around a boundary
/// vertex it runs from the clockwise-most to the counter-clockwise-most
/// neighbor. Throws kCapacityExceeded if a layer is wider than maxWidth.
inline LayeredLabeling SortLayers(const HalfEdgeMesh& he, const std::vector<int>& layerOf,
                                  const StartHalfEdge& start, int maxWidth) {
  return detail::OrderLayers(layerOf, start, maxWidth, [&](int p, int pred) {
    std::vector<int> ring = he.NeighborsCcw(p);
    if (p == start.origin) {
      detail::RotateTo(ring, start.destination);
    } else if (!he.IsBoundaryVertex(p)) {
      detail::RotateTo(ring, pred);
    }
    return ring;
  });
}

/// Same ordering over a plain adjacency list (neighbors visited in list
/// order). Used for graphs without a surface, such as paths.
inline LayeredLabeling SortLayers(const std::vector<std::vector<int>>& adjacency,
                                  const std::vector<int>& layerOf, int origin,
                                  int maxWidth = INT_MAX) {
  StartHalfEdge start{-1, origin, -1};
  return detail::OrderLayers(layerOf, start, maxWidth,
                             [&](int p, int) { return adjacency[p]; });
}

/// Start half-edge, layers and orders for the component made of `faces`.
inline LayeredLabeling LabelComponent(const HalfEdgeMesh& he,
                                      const std::vector<Vec3i>& positions,
                                      const std::vector<int>& faces, int maxWidth) {
  const StartHalfEdge start = SelectStartHalfEdge(he, positions, faces);
  std::vector<Face> componentFaces;
  componentFaces.reserve(faces.size());
  for (int f : faces) componentFaces.push_back(he.Faces()[f]);
  const auto adjacency = VertexAdjacency(componentFaces, he.VertexCount());
  return SortLayers(he, LayerVertices(adjacency, start.origin), start, maxWidth);
}

/// Splits every edge between labeled vertices into exactly one self-layer
/// or between-layer entry. Throws if an edge spans more than one layer.
inline LayerMatrices BuildMatrices(const LayeredLabeling& labeling,
                                   const std::vector<Edge>& edges) {
  LayerMatrices m;
  const int n = labeling.LayerCount();
  m.self.resize(n);
  m.between.resize(n);
  for (int l = 0; l < n; ++l) {
    m.self[l].layer = l;
    m.self[l].size = static_cast<int>(labeling.layers[l].size());
    m.between[l].layer = l;
    m.between[l].cols = l > 0 ? static_cast<int>(labeling.layers[l - 1].size()) : 0;
    m.between[l].rows.assign(labeling.layers[l].size(), {});
  }
  for (auto [a, b] : edges) {
    int la = labeling.layerOf[a], lb = labeling.layerOf[b];
    if (la < 0 || lb < 0) continue;
    if (la > lb) {
      std::swap(a, b);
      std::swap(la, lb);
    }
    const int ia = labeling.orderOf[a] - 1, ib = labeling.orderOf[b] - 1;
    if (la == lb) {
      m.self[la].entries.push_back({std::min(ia, ib), std::max(ia, ib)});
    } else if (lb == la + 1) {
      m.between[lb].rows[ib].push_back(ia);
    } else {
      throw Error(ErrorKind::kInvalidArgument, "edge spans more than one layer");
    }
  }
  for (auto& s : m.self) s.Normalize();
  for (auto& b : m.between) {
    for (auto& row : b.rows) {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
    }
  }
  return m;
}

}  // namespace silk
