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

// Hole detection and repair on decoded meshes.
//
// A topology token that dropped a connection (a 1 read as 0) removes the
// faces that edge bounded and leaves a boundary loop. Since decoding keeps
// the layer structure, the missing entry can be searched for directly: two
// vertices a, b on a loop, joined along the loop through a common vertex,
// not connected, at most one layer apart. Such a pair is a suspect when
// adding its entry and re-deriving faces
//   - keeps every existing face,
//   - strictly lowers the number of boundary edges,
//   - creates no edge with three faces,
//   - and creates no folded or flat face: each new face has nonzero area
//     and its normal agrees (cosine >= -0.5) with every neighbor across a
//     shared edge.
// Loops without suspects are left alone; on genuinely open meshes that is
// the expected outcome. Repair only ever adds entries.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "silk/config.hpp"
#include "silk/faces.hpp"
#include "silk/mesh.hpp"
#include "silk/token_stream.hpp"

namespace silk {

enum class MatrixKind { kSelf, kBetween };

inline const char* MatrixKindName(MatrixKind k) {
  return k == MatrixKind::kSelf ? "self" : "between";
}

/// One matrix cell. Self: i < j, both in `layer`. Between: row i of `layer`,
/// column j of layer - 1.
struct MatrixEntry {
  MatrixKind kind = MatrixKind::kSelf;
  int component = 0;
  int layer = 0;
  int i = 0;
  int j = 0;

  auto Key() const { return std::tuple{component, layer, i, j, kind}; }
  bool operator==(const MatrixEntry& o) const { return Key() == o.Key(); }
  bool operator<(const MatrixEntry& o) const { return Key() < o.Key(); }
};

struct SuspectEntry {
  MatrixEntry entry;
  int reduction = 0;  // boundary edges closed by adding the entry
};

struct HoleReport {
  std::vector<std::vector<int>> boundaryLoops;  // vertex ids along each loop
  std::vector<SuspectEntry> suspectEntries;     // best first
  int boundaryEdges = 0;

  bool Watertight() const { return boundaryEdges == 0; }
};

/// Boundary edges chained into loops by following face winding. A walk that
/// cannot continue (inconsistent winding) is reported as an open chain.
inline std::vector<std::vector<int>> BoundaryLoops(const std::vector<Face>& faces) {
  const auto counts = EdgeFaceCounts(faces);
  std::map<int, std::vector<int>> next;  // origin -> destinations
  for (const Face& f : faces) {
    for (int k = 0; k < 3; ++k) {
      const int u = f[k], v = f[(k + 1) % 3];
      if (counts.at(MakeEdge(u, v)) == 1) next[u].push_back(v);
    }
  }
  for (auto& [u, list] : next) std::sort(list.begin(), list.end());
  std::vector<std::vector<int>> loops;
  for (auto& [start, list] : next) {
    while (!list.empty()) {
      std::vector<int> loop = {start};
      int at = start;
      while (true) {
        auto it = next.find(at);
        if (it == next.end() || it->second.empty()) break;
        const int to = it->second.front();
        it->second.erase(it->second.begin());
        if (to == start) break;
        loop.push_back(to);
        at = to;
      }
      loops.push_back(std::move(loop));
    }
  }
  return loops;
}

inline bool HasEntry(const DecodedMesh& d, const MatrixEntry& e) {
  const auto& m = d.components.at(e.component).matrices;
  if (e.kind == MatrixKind::kSelf) return m.self.at(e.layer).Has(e.i, e.j);
  const auto& row = m.between.at(e.layer).rows.at(e.i);
  return std::binary_search(row.begin(), row.end(), e.j);
}

/// Sets or clears one entry in a component's matrices. Faces are not
/// touched; call RebuildFaces afterwards.
inline void SetEntry(LayeredComponent& c, const MatrixEntry& e, bool value) {
  const int layers = static_cast<int>(c.layers.size());
  if (e.layer < 0 || e.layer >= layers) {
    throw Error(ErrorKind::kInvalidArgument, "entry layer out of range");
  }
  if (e.kind == MatrixKind::kSelf) {
    auto& s = c.matrices.self[e.layer];
    const int size = static_cast<int>(c.layers[e.layer].size());
    if (e.i < 0 || e.j < 0 || e.i >= size || e.j >= size || e.i == e.j) {
      throw Error(ErrorKind::kInvalidArgument, "self entry out of range");
    }
    const auto key = std::pair{std::min(e.i, e.j), std::max(e.i, e.j)};
    auto it = std::lower_bound(s.entries.begin(), s.entries.end(), key);
    const bool present = it != s.entries.end() && *it == key;
    if (value && !present) s.entries.insert(it, key);
    if (!value && present) s.entries.erase(it);
    return;
  }
  if (e.layer == 0 || e.i < 0 || e.i >= static_cast<int>(c.layers[e.layer].size()) ||
      e.j < 0 || e.j >= static_cast<int>(c.layers[e.layer - 1].size())) {
    throw Error(ErrorKind::kInvalidArgument, "between entry out of range");
  }
  auto& row = c.matrices.between[e.layer].rows[e.i];
  auto it = std::lower_bound(row.begin(), row.end(), e.j);
  const bool present = it != row.end() && *it == e.j;
  if (value && !present) row.insert(it, e.j);
  if (!value && present) row.erase(it);
}

inline void SetEntry(DecodedMesh& d, const MatrixEntry& e, bool value) {
  SetEntry(d.components.at(e.component), e, value);
}

/// Every set entry of every component, in key order.
inline std::vector<MatrixEntry> PresentEntries(const DecodedMesh& d) {
  std::vector<MatrixEntry> out;
  for (int c = 0; c < static_cast<int>(d.components.size()); ++c) {
    const auto& m = d.components[c].matrices;
    for (int l = 0; l < static_cast<int>(d.components[c].layers.size()); ++l) {
      for (auto [i, j] : m.self[l].entries) out.push_back({MatrixKind::kSelf, c, l, i, j});
      if (l == 0) continue;
      const auto& rows = m.between[l].rows;
      for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        for (int j : rows[i]) out.push_back({MatrixKind::kBetween, c, l, i, j});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

struct Slot {
  int component = -1;
  int layer = -1;
  int index = -1;
};

inline std::vector<Slot> VertexSlots(const DecodedMesh& d) {
  std::vector<Slot> slots(d.mesh.VertexCount());
  for (int c = 0; c < static_cast<int>(d.components.size()); ++c) {
    const auto& layers = d.components[c].layers;
    for (int l = 0; l < static_cast<int>(layers.size()); ++l) {
      for (int i = 0; i < static_cast<int>(layers[l].size()); ++i) {
        slots[layers[l][i]] = {c, l, i};
      }
    }
  }
  return slots;
}

inline bool EntryFor(const Slot& a, const Slot& b, MatrixEntry& e) {
  if (a.component < 0 || a.component != b.component) return false;
  e.component = a.component;
  if (a.layer == b.layer) {
    e.kind = MatrixKind::kSelf;
    e.layer = a.layer;
    e.i = std::min(a.index, b.index);
    e.j = std::max(a.index, b.index);
    return true;
  }
  if (std::abs(a.layer - b.layer) != 1) return false;
  const Slot& upper = a.layer > b.layer ? a : b;
  const Slot& lower = a.layer > b.layer ? b : a;
  e.kind = MatrixKind::kBetween;
  e.layer = upper.layer;
  e.i = upper.index;
  e.j = lower.index;
  return true;
}

// Self entries the token stream can carry: a window bit or an extra token
// below m. Between rows take any number of tokens, so every between entry
// is encodable.
inline bool Encodable(const MatrixEntry& e, int layerSize, const CodecConfig& config) {
  if (e.kind == MatrixKind::kBetween) return true;
  const int forward = e.j - e.i;
  const int offset = std::min(forward, layerSize - forward);
  return offset <= config.selfWindow || e.j - (e.i + 1 + config.selfWindow) < config.maxLayerWidth;
}

inline Vec3d FaceNormal(const std::vector<Vec3i>& p, const Face& f) {
  const Vec3d a = ToVec3d(p[f[0]]), b = ToVec3d(p[f[1]]), c = ToVec3d(p[f[2]]);
  return Cross(b - a, c - a);
}

// Fold test for the added faces against every neighbor across an edge.
inline bool FoldFree(const std::vector<Vec3i>& positions, const std::vector<Face>& faces,
                     const std::vector<int>& added) {
  std::map<Edge, std::vector<int>> byEdge;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    for (int k = 0; k < 3; ++k) byEdge[MakeEdge(faces[f][k], faces[f][(k + 1) % 3])].push_back(f);
  }
  for (int f : added) {
    const Vec3d n = FaceNormal(positions, faces[f]);
    const double len = Norm(n);
    if (len == 0.0) return false;
    for (int k = 0; k < 3; ++k) {
      for (int g : byEdge[MakeEdge(faces[f][k], faces[f][(k + 1) % 3])]) {
        if (g == f) continue;
        const Vec3d m = FaceNormal(positions, faces[g]);
        const double lm = Norm(m);
        if (lm == 0.0) continue;
        if (Dot(n, m) / (len * lm) < -0.5) return false;
      }
    }
  }
  return true;
}

// Boundary-edge reduction from adding `e` to component `c`, or 0 when the
// entry is not an admissible repair.
inline int EvaluateEntry(const DecodedMesh& d, const std::vector<Face>& before,
                         int beforeBoundary, const MatrixEntry& e) {
  LayeredComponent trial = d.components[e.component];
  SetEntry(trial, e, true);
  const std::vector<Face> after = DeriveFaces(trial).faces;
  const auto counts = EdgeFaceCounts(after);
  for (const auto& [edge, n] : counts) {
    if (n > 2) return 0;
  }
  int boundary = 0;
  for (const auto& [edge, n] : counts) boundary += n == 1;
  if (boundary >= beforeBoundary) return 0;
  const std::vector<Face> oldSet = SortedFaceSet(before);
  std::vector<Face> newSet = SortedFaceSet(after);
  if (!std::includes(newSet.begin(), newSet.end(), oldSet.begin(), oldSet.end())) return 0;
  std::vector<int> added;
  for (int f = 0; f < static_cast<int>(after.size()); ++f) {
    if (!std::binary_search(oldSet.begin(), oldSet.end(), SortedFace(after[f]))) {
      added.push_back(f);
    }
  }
  if (!FoldFree(d.mesh.vertices, after, added)) return 0;
  return beforeBoundary - boundary;
}

}  // namespace detail

/// Boundary loops of a decoded mesh and the missing entries that would
/// close them, best first (largest reduction, then lowest entry key).
inline HoleReport DetectHoles(const DecodedMesh& d, const CodecConfig& config = {}) {
  HoleReport report;
  report.boundaryEdges = CountBoundaryEdges(d.mesh.faces);
  if (report.boundaryEdges == 0) return report;
  report.boundaryLoops = BoundaryLoops(d.mesh.faces);
  const auto slots = detail::VertexSlots(d);

  // Per-component faces and adjacency from the matrices.
  const int nc = static_cast<int>(d.components.size());
  std::vector<std::vector<Face>> faces(nc);
  std::vector<int> boundary(nc, 0);
  for (int c = 0; c < nc; ++c) {
    faces[c] = DeriveFaces(d.components[c]).faces;
    boundary[c] = CountBoundaryEdges(faces[c]);
  }
  std::set<Edge> edges;
  for (int c = 0; c < nc; ++c) {
    const auto& comp = d.components[c];
    for (int l = 0; l < static_cast<int>(comp.layers.size()); ++l) {
      for (auto [i, j] : comp.matrices.self[l].entries) {
        edges.insert(MakeEdge(comp.layers[l][i], comp.layers[l][j]));
      }
      if (l == 0) continue;
      const auto& rows = comp.matrices.between[l].rows;
      for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        for (int j : rows[i]) edges.insert(MakeEdge(comp.layers[l][i], comp.layers[l - 1][j]));
      }
    }
  }

  // Pairs two boundary steps apart.
  std::map<int, std::vector<int>> boundaryNeighbors;
  for (const auto& [edge, n] : EdgeFaceCounts(d.mesh.faces)) {
    if (n != 1) continue;
    boundaryNeighbors[edge.first].push_back(edge.second);
    boundaryNeighbors[edge.second].push_back(edge.first);
  }
  std::set<MatrixEntry> candidates;
  for (const auto& [mid, list] : boundaryNeighbors) {
    for (std::size_t x = 0; x < list.size(); ++x) {
      for (std::size_t y = x + 1; y < list.size(); ++y) {
        const int a = list[x], b = list[y];
        if (edges.count(MakeEdge(a, b))) continue;
        MatrixEntry e;
        if (!detail::EntryFor(slots[a], slots[b], e)) continue;
        const int size = static_cast<int>(d.components[e.component].layers[e.layer].size());
        if (!detail::Encodable(e, size, config)) continue;
        candidates.insert(e);
      }
    }
  }
  for (const MatrixEntry& e : candidates) {
    const int reduction =
        detail::EvaluateEntry(d, faces[e.component], boundary[e.component], e);
    if (reduction > 0) report.suspectEntries.push_back({e, reduction});
  }
  std::stable_sort(report.suspectEntries.begin(), report.suspectEntries.end(),
                   [](const SuspectEntry& x, const SuspectEntry& y) {
                     return x.reduction > y.reduction;
                   });
  return report;
}

struct HoleRepair {
  DecodedMesh mesh;
  std::vector<SuspectEntry> applied;
  int boundaryBefore = 0;
  int boundaryAfter = 0;
  HoleReport residual;
};

/// Greedily adds the best suspect, re-deriving faces and suspects after
/// each step, until no suspect remains or `maxEntries` were added.
inline HoleRepair RepairHoles(const DecodedMesh& decoded, const HoleReport& report,
                              int maxEntries, const CodecConfig& config = {}) {
  HoleRepair out;
  out.mesh = decoded;
  out.boundaryBefore = CountBoundaryEdges(decoded.mesh.faces);
  HoleReport current = report;
  while (static_cast<int>(out.applied.size()) < maxEntries &&
         !current.suspectEntries.empty()) {
    const SuspectEntry best = current.suspectEntries.front();
    SetEntry(out.mesh, best.entry, true);
    RebuildFaces(out.mesh);
    out.applied.push_back(best);
    current = DetectHoles(out.mesh, config);
  }
  out.boundaryAfter = CountBoundaryEdges(out.mesh.mesh.faces);
  out.residual = out.applied.empty() ? report : current;
  return out;
}

}  // namespace silk
