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

// Compact half-edge structure over a triangle list.
//
// Half-edge 3f+k runs from corner k to corner k+1 of face f, so next/prev
// and the owning face are implicit. Only twins are stored. A half-edge with
// no twin lies on the boundary and has Twin() == kBoundary.
//
// Rotation around a vertex: for an outgoing half-edge h, the next outgoing
// half-edge counter-clockwise (seen from the side the faces' winding points
// to) is Twin(Prev(h)); clockwise is Next(Twin(h)).
#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "silk/error.hpp"
#include "silk/manifold.hpp"
#include "silk/mesh.hpp"

namespace silk {

class HalfEdgeMesh {
 public:
  static constexpr int kBoundary = -1;

  /// Builds from a manifold triangle list. Faces are re-oriented per
  /// connected component to a consistent winding (keeping the majority
  /// orientation, ties to the component's first face); FlippedFaces()
  /// reports how many were reversed. Throws kNonManifold for non-manifold
  /// input and kNonOrientable when no consistent winding exists.
  static HalfEdgeMesh Build(const std::vector<Face>& faces, int vertexCount) {
    const ManifoldReport report = ValidateManifold(faces, vertexCount);
    if (!report.isManifold) {
      std::string what = "mesh is not manifold (" +
                         std::to_string(report.nonManifoldEdges.size()) +
                         " edges, " +
                         std::to_string(report.nonManifoldVertices.size()) +
                         " vertices); run repair first";
      throw Error(ErrorKind::kNonManifold, what);
    }
    HalfEdgeMesh he;
    he.vertexCount_ = vertexCount;
    he.faces_ = faces;
    he.flipped_ = OrientConsistently(he.faces_);
    he.Link();
    return he;
  }

  static HalfEdgeMesh Build(const QuantizedMesh& mesh) {
    CheckFaces(mesh);
    return Build(mesh.faces, mesh.VertexCount());
  }

  int VertexCount() const { return vertexCount_; }
  int FaceCount() const { return static_cast<int>(faces_.size()); }
  int HalfEdgeCount() const { return static_cast<int>(twin_.size()); }
  const std::vector<Face>& Faces() const { return faces_; }
  int FlippedFaces() const { return flipped_; }

  int Origin(int h) const { return faces_[h / 3][h % 3]; }
  int Dest(int h) const { return Origin(Next(h)); }
  int Next(int h) const { return h - h % 3 + (h % 3 + 1) % 3; }
  int Prev(int h) const { return h - h % 3 + (h % 3 + 2) % 3; }
  int Twin(int h) const { return twin_[h]; }
  int FaceOf(int h) const { return h / 3; }

  int RotateCcw(int h) const { return Twin(Prev(h)); }
  int RotateCw(int h) const {
    const int t = Twin(h);
    return t == kBoundary ? kBoundary : Next(t);
  }

  /// An outgoing half-edge of v: the clockwise-most one for boundary
  /// vertices, or kBoundary for vertices without faces.
  int Outgoing(int v) const { return outgoing_[v]; }
  bool IsBoundaryVertex(int v) const {
    return outgoing_[v] != kBoundary && Twin(outgoing_[v]) == kBoundary;
  }

  /// Half-edge u->v, or kBoundary if no face has it.
  int Find(int u, int v) const {
    auto it = directed_.find(Key(u, v));
    return it == directed_.end() ? kBoundary : it->second;
  }

  /// Neighbors of v in counter-clockwise order. For a boundary vertex the
  /// list runs from the clockwise-most neighbor to the counter-clockwise-most
  /// one; for an interior vertex it starts at Dest(Outgoing(v)).
  std::vector<int> NeighborsCcw(int v) const {
    std::vector<int> out;
    const int start = outgoing_[v];
    if (start == kBoundary) return out;
    int h = start;
    while (true) {
      out.push_back(Dest(h));
      const int n = RotateCcw(h);
      if (n == kBoundary) {
        out.push_back(Origin(Prev(h)));
        break;
      }
      if (n == start) break;
      h = n;
    }
    return out;
  }

 private:
  static std::uint64_t Key(int u, int v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
  }

  // Returns the number of faces reversed.
  static int OrientConsistently(std::vector<Face>& faces) {
    const int nf = static_cast<int>(faces.size());
    std::unordered_map<std::uint64_t, std::vector<int>> byEdge;
    byEdge.reserve(faces.size() * 3);
    for (int f = 0; f < nf; ++f) {
      for (int k = 0; k < 3; ++k) {
        const Edge e = MakeEdge(faces[f][k], faces[f][(k + 1) % 3]);
        byEdge[Key(e.first, e.second)].push_back(f);
      }
    }
    auto traverses = [&](int f, int a, int b) {
      for (int k = 0; k < 3; ++k) {
        if (faces[f][k] == a && faces[f][(k + 1) % 3] == b) return true;
      }
      return false;
    };
    // flip[f]: 0 keep, 1 reverse, -1 unvisited.
    std::vector<int> flip(nf, -1);
    int flipped = 0;
    for (int seed = 0; seed < nf; ++seed) {
      if (flip[seed] >= 0) continue;
      std::vector<int> members;
      std::queue<int> queue;
      flip[seed] = 0;
      queue.push(seed);
      while (!queue.empty()) {
        const int f = queue.front();
        queue.pop();
        members.push_back(f);
        for (int k = 0; k < 3; ++k) {
          // Directed edge a->b as f is traversed after its own flip.
          int a = faces[f][k], b = faces[f][(k + 1) % 3];
          if (flip[f]) std::swap(a, b);
          const Edge e = MakeEdge(a, b);
          for (int g : byEdge[Key(e.first, e.second)]) {
            if (g == f) continue;
            // g must traverse b->a once oriented.
            const int want = traverses(g, a, b) ? 1 : 0;
            if (flip[g] < 0) {
              flip[g] = want;
              queue.push(g);
            } else if (flip[g] != want) {
              throw Error(ErrorKind::kNonOrientable,
                          "component containing face " + std::to_string(seed) +
                              " has no consistent winding");
            }
          }
        }
      }
      int reversed = 0;
      for (int f : members) reversed += flip[f];
      const bool invert = 2 * reversed > static_cast<int>(members.size());
      for (int f : members) {
        if (invert) flip[f] = 1 - flip[f];
        if (flip[f]) {
          std::swap(faces[f][1], faces[f][2]);
          ++flipped;
        }
      }
    }
    return flipped;
  }

  void Link() {
    const int nh = 3 * FaceCount();
    twin_.assign(nh, kBoundary);
    directed_.clear();
    directed_.reserve(nh);
    for (int h = 0; h < nh; ++h) directed_.emplace(Key(Origin(h), Dest(h)), h);
    for (int h = 0; h < nh; ++h) twin_[h] = Find(Dest(h), Origin(h));
    outgoing_.assign(vertexCount_, kBoundary);
    for (int h = 0; h < nh; ++h) {
      const int v = Origin(h);
      if (outgoing_[v] == kBoundary || twin_[h] == kBoundary) outgoing_[v] = h;
    }
  }

  int vertexCount_ = 0;
  int flipped_ = 0;
  std::vector<Face> faces_;
  std::vector<int> twin_;
  std::vector<int> outgoing_;
  std::unordered_map<std::uint64_t, int> directed_;
};

}  // namespace silk
