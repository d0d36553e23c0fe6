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

// Per-vertex edge graphs, manifold validation and connected components.
//
// The edge graph of vertex v has one node per neighbor u (standing for the
// mesh edge v-u) and one link per face containing v (joining the two other
// corners of that face). v is a manifold vertex iff its edge graph is a
// single cycle or a single chain: every node has degree <= 2 and there is
// exactly one connected component.
#pragma once

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "silk/error.hpp"
#include "silk/mesh.hpp"

namespace silk {

struct EdgeGraph {
  struct Link {
    int a = 0;  // a < b, both neighbor vertex ids
    int b = 0;
    int face = 0;
  };

  int referenceVertex = -1;
  std::vector<int> nodes;  // sorted, distinct
  std::vector<Link> links;

  int NodeIndex(int vertex) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), vertex);
    return (it != nodes.end() && *it == vertex) ? static_cast<int>(it - nodes.begin()) : -1;
  }

  int Degree(int vertex) const {
    int d = 0;
    for (const Link& l : links) d += (l.a == vertex) + (l.b == vertex);
    return d;
  }

  int MaxDegree() const {
    std::vector<int> deg(nodes.size(), 0);
    for (const Link& l : links) {
      ++deg[NodeIndex(l.a)];
      ++deg[NodeIndex(l.b)];
    }
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  }

  int ComponentCount() const {
    std::vector<int> parent(nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int components = static_cast<int>(nodes.size());
    for (const Link& l : links) {
      const int ra = find(NodeIndex(l.a)), rb = find(NodeIndex(l.b));
      if (ra != rb) {
        parent[ra] = rb;
        --components;
      }
    }
    return components;
  }

  bool IsManifold() const { return MaxDegree() <= 2 && ComponentCount() == 1; }
};

/// Face ids incident to each vertex.
inline std::vector<std::vector<int>> VertexFaces(const std::vector<Face>& faces,
                                                 int vertexCount) {
  std::vector<std::vector<int>> incident(vertexCount);
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    for (int v : faces[f]) incident[v].push_back(f);
  }
  return incident;
}

inline EdgeGraph BuildEdgeGraph(const std::vector<Face>& faces,
                                const std::vector<int>& incidentFaces, int v) {
  EdgeGraph g;
  g.referenceVertex = v;
  for (int f : incidentFaces) {
    const Face& t = faces[f];
    int others[2], k = 0;
    for (int c : t) {
      if (c != v) others[k++] = c;
    }
    const int a = std::min(others[0], others[1]);
    const int b = std::max(others[0], others[1]);
    g.links.push_back({a, b, f});
    g.nodes.push_back(a);
    g.nodes.push_back(b);
  }
  std::sort(g.nodes.begin(), g.nodes.end());
  g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());
  return g;
}

inline EdgeGraph BuildEdgeGraph(const QuantizedMesh& mesh, int v) {
  if (v < 0 || v >= mesh.VertexCount()) {
    throw Error(ErrorKind::kInvalidArgument, "vertex id out of range");
  }
  std::vector<int> incident;
  for (int f = 0; f < mesh.FaceCount(); ++f) {
    const Face& t = mesh.faces[f];
    if (t[0] == v || t[1] == v || t[2] == v) incident.push_back(f);
  }
  if (incident.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "vertex " + std::to_string(v) + " has no incident face");
  }
  return BuildEdgeGraph(mesh.faces, incident, v);
}

struct ManifoldReport {
  std::vector<Edge> nonManifoldEdges;   // >= 3 incident faces
  std::vector<int> nonManifoldVertices; // branched or disconnected edge graph
  bool isManifold = true;
};

inline ManifoldReport ValidateManifold(const std::vector<Face>& faces, int vertexCount) {
  ManifoldReport report;
  for (const auto& [edge, count] : EdgeFaceCounts(faces)) {
    if (count >= 3) report.nonManifoldEdges.push_back(edge);
  }
  const auto incident = VertexFaces(faces, vertexCount);
  for (int v = 0; v < vertexCount; ++v) {
    if (incident[v].empty()) continue;
    if (!BuildEdgeGraph(faces, incident[v], v).IsManifold()) {
      report.nonManifoldVertices.push_back(v);
    }
  }
  report.isManifold =
      report.nonManifoldEdges.empty() && report.nonManifoldVertices.empty();
  return report;
}

inline ManifoldReport ValidateManifold(const QuantizedMesh& mesh) {
  return ValidateManifold(mesh.faces, mesh.VertexCount());
}

struct ComponentLabels {
  std::vector<int> componentOf;
  int componentCount = 0;
};

/// Labels vertices by connectivity over face edges. Labels are assigned in
/// order of each component's lowest vertex id; a vertex with no face forms
/// its own component.
inline ComponentLabels ConnectedComponents(const std::vector<Face>& faces,
                                           int vertexCount) {
  std::vector<std::vector<int>> adjacency(vertexCount);
  for (const Face& f : faces) {
    for (int k = 0; k < 3; ++k) {
      adjacency[f[k]].push_back(f[(k + 1) % 3]);
      adjacency[f[(k + 1) % 3]].push_back(f[k]);
    }
  }
  ComponentLabels labels;
  labels.componentOf.assign(vertexCount, -1);
  for (int seed = 0; seed < vertexCount; ++seed) {
    if (labels.componentOf[seed] >= 0) continue;
    const int label = labels.componentCount++;
    std::queue<int> queue;
    queue.push(seed);
    labels.componentOf[seed] = label;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (int u : adjacency[v]) {
        if (labels.componentOf[u] < 0) {
          labels.componentOf[u] = label;
          queue.push(u);
        }
      }
    }
  }
  return labels;
}

inline ComponentLabels ConnectedComponents(const QuantizedMesh& mesh) {
  return ConnectedComponents(mesh.faces, mesh.VertexCount());
}

}  // namespace silk
