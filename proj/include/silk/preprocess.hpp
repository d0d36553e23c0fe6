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

// Normalization to the unit cube and grid quantization.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "silk/error.hpp"
#include "silk/mesh.hpp"

namespace silk {

struct NormalizedMesh {
  RawMesh mesh;
  Transform transform;
};

/// Centers the bounding box at (0.5, 0.5, 0.5) and scales the longest
/// extent to exactly 1.
inline NormalizedMesh Normalize(const RawMesh& mesh) {
  if (mesh.vertices.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "cannot normalize an empty mesh");
  }
  Vec3d lo = mesh.vertices.front(), hi = mesh.vertices.front();
  for (const Vec3d& p : mesh.vertices) {
    for (int d = 0; d < 3; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  }
  const double extent =
      std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw Error(ErrorKind::kInvalidArgument, "mesh has zero extent");
  }
  NormalizedMesh out;
  out.transform.scale = 1.0 / extent;
  out.transform.center = 0.5 * (lo + hi);
  out.mesh.faces = mesh.faces;
  out.mesh.vertices.reserve(mesh.vertices.size());
  for (const Vec3d& p : mesh.vertices) {
    out.mesh.vertices.push_back(out.transform.Forward(p));
  }
  return out;
}

struct QuantizeStats {
  int mergedVertices = 0;     // vertices folded into an earlier grid twin
  int collapsedFaces = 0;     // faces with two corners in one cell
  int duplicateFaces = 0;     // faces repeating an earlier vertex set
  int unreferencedVertices = 0;
};

/// Snaps unit-cube coordinates to floor(c * resolution), clamped to
/// [0, resolution - 1]. Grid-coincident vertices are merged (first
/// occurrence keeps its slot, in input order), collapsed and repeated faces
/// are removed, and vertices referenced by no face are dropped.
inline QuantizedMesh Quantize(const RawMesh& mesh, int resolution = 128,
                              QuantizeStats* stats = nullptr,
                              const Transform& transform = {}) {
  if (resolution < 2) {
    throw Error(ErrorKind::kInvalidArgument, "resolution must be >= 2");
  }
  CheckFaces(mesh);
  QuantizeStats local;
  auto bin = [resolution](double c) {
    const double scaled = std::floor(c * resolution);
    if (!(scaled >= 0.0)) return 0;  // also catches NaN
    if (scaled >= resolution - 1) return resolution - 1;
    return static_cast<int>(scaled);
  };

  std::map<Vec3i, int> cellSlot;
  std::vector<Vec3i> cells;
  std::vector<int> remap(mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Vec3d& p = mesh.vertices[v];
    const Vec3i q = {bin(p[0]), bin(p[1]), bin(p[2])};
    auto [it, inserted] = cellSlot.emplace(q, static_cast<int>(cells.size()));
    if (inserted) {
      cells.push_back(q);
    } else {
      ++local.mergedVertices;
    }
    remap[v] = it->second;
  }

  std::vector<Face> faces;
  std::set<Face> seen;
  for (const Face& f : mesh.faces) {
    const Face g = {remap[f[0]], remap[f[1]], remap[f[2]]};
    if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2]) {
      ++local.collapsedFaces;
      continue;
    }
    if (!seen.insert(SortedFace(g)).second) {
      ++local.duplicateFaces;
      continue;
    }
    faces.push_back(g);
  }

  // Surviving cells keep their first-occurrence (input) order, so
  // quantizing an already-quantized mesh is the identity.
  std::vector<int> slot(cells.size(), -1);
  for (const Face& f : faces) {
    for (int idx : f) slot[idx] = 0;
  }
  QuantizedMesh out;
  out.resolution = resolution;
  out.transform = transform;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (slot[c] < 0) continue;
    slot[c] = out.VertexCount();
    out.vertices.push_back(cells[c]);
  }
  for (Face& f : faces) {
    for (int& idx : f) idx = slot[idx];
  }
  out.faces = std::move(faces);
  local.unreferencedVertices =
      static_cast<int>(cells.size()) - out.VertexCount();
  if (stats) *stats = local;
  return out;
}

/// Grid cell centers, (q + 0.5) / resolution, in the unit cube.
inline RawMesh Dequantize(const QuantizedMesh& mesh) {
  RawMesh out;
  out.faces = mesh.faces;
  out.vertices.reserve(mesh.vertices.size());
  const double r = mesh.resolution;
  for (const Vec3i& q : mesh.vertices) {
    out.vertices.push_back({(q[0] + 0.5) / r, (q[1] + 0.5) / r, (q[2] + 0.5) / r});
  }
  return out;
}

}  // namespace silk
