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

// Core mesh value types shared by every module.
//
// Conventions:
// - Triangle-only. Faces are zero-based index triples.
// - RawMesh holds model-space doubles; QuantizedMesh holds integer grid
//   coordinates in [0, resolution) together with the transform that maps
//   the grid back to model space.
// - Edges are undirected and keyed as (min, max).
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "silk/error.hpp"

namespace silk {

using Vec3d = std::array<double, 3>;
using Vec3i = std::array<int, 3>;
using Face = std::array<int, 3>;
using Edge = std::pair<int, int>;

inline Vec3d operator-(const Vec3d& a, const Vec3d& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3d operator+(const Vec3d& a, const Vec3d& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3d operator*(double s, const Vec3d& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline double Dot(const Vec3d& a, const Vec3d& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Vec3d Cross(const Vec3d& a, const Vec3d& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline double Norm(const Vec3d& a) { return std::sqrt(Dot(a, a)); }

inline Edge MakeEdge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Maps normalized coordinates back to model space: model = (p - 0.5) / scale
/// + center. Normalization is the inverse.
struct Transform {
  double scale = 1.0;
  Vec3d center = {0.5, 0.5, 0.5};

  Vec3d Forward(const Vec3d& model) const {
    return {(model[0] - center[0]) * scale + 0.5,
            (model[1] - center[1]) * scale + 0.5,
            (model[2] - center[2]) * scale + 0.5};
  }
  Vec3d Inverse(const Vec3d& unit) const {
    return {(unit[0] - 0.5) / scale + center[0],
            (unit[1] - 0.5) / scale + center[1],
            (unit[2] - 0.5) / scale + center[2]};
  }
};

struct RawMesh {
  std::vector<Vec3d> vertices;
  std::vector<Face> faces;
};

struct QuantizedMesh {
  std::vector<Vec3i> vertices;
  std::vector<Face> faces;
  int resolution = 128;
  Transform transform;

  int VertexCount() const { return static_cast<int>(vertices.size()); }
  int FaceCount() const { return static_cast<int>(faces.size()); }
};

/// Throws kInvalidArgument unless every face has three distinct in-range
/// indices.
template <typename Mesh>
void CheckFaces(const Mesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& t = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= n) {
        throw Error(ErrorKind::kInvalidArgument,
                    "face " + std::to_string(f) + " index out of range");
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw Error(ErrorKind::kInvalidArgument,
                  "face " + std::to_string(f) + " is degenerate");
    }
  }
}

/// Distinct undirected edges, sorted.
inline std::vector<Edge> UniqueEdges(const std::vector<Face>& faces) {
  std::vector<Edge> edges;
  edges.reserve(faces.size() * 3);
  for (const Face& f : faces) {
    for (int k = 0; k < 3; ++k) edges.push_back(MakeEdge(f[k], f[(k + 1) % 3]));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

/// Number of faces incident to each undirected edge.
inline std::map<Edge, int> EdgeFaceCounts(const std::vector<Face>& faces) {
  std::map<Edge, int> counts;
  for (const Face& f : faces) {
    for (int k = 0; k < 3; ++k) ++counts[MakeEdge(f[k], f[(k + 1) % 3])];
  }
  return counts;
}

/// Edges bordered by exactly one face.
inline int CountBoundaryEdges(const std::vector<Face>& faces) {
  int boundary = 0;
  for (const auto& [edge, count] : EdgeFaceCounts(faces)) {
    if (count == 1) ++boundary;
  }
  return boundary;
}

/// Number of interior edges whose two faces traverse it in the same
/// direction. Zero means the winding is consistent.
inline int CountWindingConflicts(const std::vector<Face>& faces) {
  std::map<Edge, int> directed;
  for (const Face& f : faces) {
    for (int k = 0; k < 3; ++k) ++directed[{f[k], f[(k + 1) % 3]}];
  }
  int conflicts = 0;
  for (const auto& [edge, count] : directed) {
    if (count > 1) conflicts += count - 1;
  }
  return conflicts;
}

/// Canonical unordered representation (sorted triple) used for face-set
/// comparisons.
inline Face SortedFace(Face f) {
  std::sort(f.begin(), f.end());
  return f;
}

inline std::vector<Face> SortedFaceSet(const std::vector<Face>& faces) {
  std::vector<Face> out;
  out.reserve(faces.size());
  for (const Face& f : faces) out.push_back(SortedFace(f));
  std::sort(out.begin(), out.end());
  return out;
}

/// Rotates a face so its smallest index comes first, keeping winding.
inline Face CanonicalRotation(const Face& f) {
  int k = 0;
  if (f[1] < f[k]) k = 1;
  if (f[2] < f[k]) k = 2;
  return {f[k], f[(k + 1) % 3], f[(k + 2) % 3]};
}

inline Vec3d ToVec3d(const Vec3i& q) {
  return {static_cast<double>(q[0]), static_cast<double>(q[1]),
          static_cast<double>(q[2])};
}

/// Six times the signed volume enclosed by the faces (positive for outward
/// counter-clockwise winding of a closed surface).
template <typename Point>
double SignedVolume6(const std::vector<Point>& vertices,
                     const std::vector<Face>& faces) {
  double total = 0.0;
  for (const Face& f : faces) {
    Vec3d a, b, c;
    for (int d = 0; d < 3; ++d) {
      a[d] = static_cast<double>(vertices[f[0]][d]);
      b[d] = static_cast<double>(vertices[f[1]][d]);
      c[d] = static_cast<double>(vertices[f[2]][d]);
    }
    total += Dot(a, Cross(b, c));
  }
  return total;
}

}  // namespace silk
