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

// Test meshes and hand-rolled generators.
#pragma once

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "silk/mesh.hpp"
#include "silk/preprocess.hpp"

namespace silk::testing {

inline RawMesh Triangle() {
  return {{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}}};
}

// Square split into four triangles around its center.
inline RawMesh QuadFan() {
  return {{{0.5, 0, 0.5}, {0, 0.2, 0}, {1, 0.2, 0}, {1, 0.2, 1}, {0, 0.2, 1}},
          {{0, 2, 1}, {0, 3, 2}, {0, 4, 3}, {0, 1, 4}}};
}

inline RawMesh Tetrahedron() {
  return {{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
          {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}}};
}

inline RawMesh Octahedron() {
  return {{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}},
          {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
           {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}}};
}

inline RawMesh Cube() {
  RawMesh m;
  for (int i = 0; i < 8; ++i) m.vertices.push_back({double(i & 1), double(i >> 1 & 1), double(i >> 2 & 1)});
  m.faces = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
             {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return m;
}

inline RawMesh Icosphere(int level) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  RawMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  m.faces = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
             {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
             {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  auto project = [](Vec3d p) { return (1.0 / Norm(p)) * p; };
  for (auto& p : m.vertices) p = project(p);
  for (int l = 0; l < level; ++l) {
    std::map<Edge, int> midpoint;
    auto mid = [&](int a, int b) {
      auto [it, inserted] = midpoint.emplace(MakeEdge(a, b), static_cast<int>(m.vertices.size()));
      if (inserted) m.vertices.push_back(project(0.5 * (m.vertices[a] + m.vertices[b])));
      return it->second;
    };
    std::vector<Face> next;
    for (const Face& f : m.faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.faces = std::move(next);
  }
  return m;
}

// Closed torus from a u x v grid.
inline RawMesh Torus(int u = 24, int v = 12, double major = 1.0, double minor = 0.4) {
  RawMesh m;
  const double pi = std::acos(-1.0);
  for (int i = 0; i < u; ++i) {
    for (int j = 0; j < v; ++j) {
      const double a = 2 * pi * i / u, b = 2 * pi * j / v;
      m.vertices.push_back({(major + minor * std::cos(b)) * std::cos(a), minor * std::sin(b),
                            (major + minor * std::cos(b)) * std::sin(a)});
    }
  }
  auto id = [&](int i, int j) { return (i % u) * v + (j % v); };
  for (int i = 0; i < u; ++i) {
    for (int j = 0; j < v; ++j) {
      m.faces.push_back({id(i, j), id(i, j + 1), id(i + 1, j)});
      m.faces.push_back({id(i + 1, j), id(i, j + 1), id(i + 1, j + 1)});
    }
  }
  return m;
}

// Open n x n grid of squares in the xz-plane, slightly tilted so no two
// vertices share a grid cell after quantization.
inline RawMesh FlatGrid(int n = 8) {
  RawMesh m;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) m.vertices.push_back({double(i), 0.01 * j, double(j)});
  }
  auto id = [&](int i, int j) { return i * (n + 1) + j; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m.faces.push_back({id(i, j), id(i, j + 1), id(i + 1, j)});
      m.faces.push_back({id(i + 1, j), id(i, j + 1), id(i + 1, j + 1)});
    }
  }
  return m;
}

// Cone whose apex is the lowest vertex, with `rim` vertices on its border:
// the first layer holds every rim vertex.
inline RawMesh WideFan(int rim = 201) {
  RawMesh m;
  const double pi = std::acos(-1.0);
  m.vertices.push_back({0, 0, 0});
  for (int k = 0; k < rim; ++k) {
    const double a = 2 * pi * k / rim;
    m.vertices.push_back({std::cos(a), 1.0, std::sin(a)});
  }
  for (int k = 0; k < rim; ++k) m.faces.push_back({0, 1 + (k + 1) % rim, 1 + k});
  return m;
}

// Three faces at edge 9-10 plus the fan they sit in: the tetrahedron
// {4, 8, 9, 10} with the extra fin 9-10-11. Unused ids keep the numbering.
inline QuantizedMesh FinConfiguration() {
  QuantizedMesh m;
  m.vertices.resize(12);
  for (int v = 0; v < 12; ++v) m.vertices[v] = {100 + v, 100, 100};
  m.vertices[4] = {10, 0, 0};
  m.vertices[8] = {0, 10, 0};
  m.vertices[9] = {0, 0, 0};
  m.vertices[10] = {0, 0, 10};
  m.vertices[11] = {20, 20, 20};
  m.faces = {{9, 10, 8}, {9, 4, 10}, {9, 8, 4}, {4, 8, 10}, {9, 10, 11}};
  return m;
}

inline RawMesh Translated(RawMesh m, Vec3d d) {
  for (auto& p : m.vertices) p = p + d;
  return m;
}

inline RawMesh Merge(const std::vector<RawMesh>& parts) {
  RawMesh out;
  for (const RawMesh& p : parts) {
    const int base = static_cast<int>(out.vertices.size());
    out.vertices.insert(out.vertices.end(), p.vertices.begin(), p.vertices.end());
    for (const Face& f : p.faces) out.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
  }
  return out;
}

// Identity quantization for meshes whose vertices already sit on distinct
// cells of a 128 grid after normalization.
inline QuantizedMesh Grid(const RawMesh& raw, int resolution = 128) {
  return Quantize(Normalize(raw).mesh, resolution);
}

// Closed sphere or torus with random valid edge flips and jittered
// vertices.
inline RawMesh RandomManifold(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RawMesh m = seed % 2 == 0 ? Icosphere(2) : Torus(16, 8);
  std::uniform_int_distribution<int> pickFace(0, static_cast<int>(m.faces.size()) - 1);
  std::uniform_int_distribution<int> pickCorner(0, 2);
  const int flips = static_cast<int>(m.faces.size()) / 10;
  for (int attempt = 0, done = 0; attempt < 20 * flips && done < flips; ++attempt) {
    const int f = pickFace(rng);
    const int k = pickCorner(rng);
    const int a = m.faces[f][k], b = m.faces[f][(k + 1) % 3], c = m.faces[f][(k + 2) % 3];
    int g = -1, d = -1;
    for (int h = 0; h < static_cast<int>(m.faces.size()); ++h) {
      for (int q = 0; q < 3; ++q) {
        if (m.faces[h][q] == b && m.faces[h][(q + 1) % 3] == a) {
          g = h;
          d = m.faces[h][(q + 2) % 3];
        }
      }
    }
    if (g < 0 || c == d) continue;
    const auto edges = UniqueEdges(m.faces);
    if (std::binary_search(edges.begin(), edges.end(), MakeEdge(c, d))) continue;
    int degA = 0, degB = 0;
    for (const Edge& e : edges) {
      degA += e.first == a || e.second == a;
      degB += e.first == b || e.second == b;
    }
    if (degA <= 4 || degB <= 4) continue;
    m.faces[f] = {a, d, c};
    m.faces[g] = {b, c, d};
    ++done;
  }
  std::normal_distribution<double> jitter(0.0, 0.01);
  for (auto& p : m.vertices) {
    for (double& x : p) x += jitter(rng);
  }
  return m;
}

// Manifold parts glued at random vertices and edges, quantized without
// repair. Generators draw parts from small closed and open meshes placed
// apart, then identify vertex pairs across parts.
inline QuantizedMesh GluedFuzz(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<RawMesh> pool = {Tetrahedron(), Octahedron(), Cube(), Icosphere(0),
                                     FlatGrid(2)};
  std::uniform_int_distribution<int> pickPart(0, static_cast<int>(pool.size()) - 1);
  std::uniform_int_distribution<int> partCount(2, 4);
  std::vector<RawMesh> parts;
  const int n = partCount(rng);
  for (int i = 0; i < n; ++i) parts.push_back(Translated(pool[pickPart(rng)], {3.0 * i, 0, 0}));
  std::vector<int> start;
  RawMesh merged;
  for (const RawMesh& p : parts) {
    start.push_back(static_cast<int>(merged.vertices.size()));
    merged = Merge({merged, p});
  }
  start.push_back(static_cast<int>(merged.vertices.size()));
  // Union of identified vertices; the representative keeps its position.
  std::vector<int> rep(merged.vertices.size());
  for (std::size_t v = 0; v < rep.size(); ++v) rep[v] = static_cast<int>(v);
  auto find = [&](int x) {
    while (rep[x] != x) x = rep[x];
    return x;
  };
  auto vertexOf = [&](int part) {
    std::uniform_int_distribution<int> d(start[part], start[part + 1] - 1);
    return d(rng);
  };
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> other(0, i - 1);
    const int j = other(rng);
    const bool edgeGlue = rng() % 2 == 0;
    if (!edgeGlue) {
      rep[find(vertexOf(i))] = find(vertexOf(j));
      continue;
    }
    // Glue an edge of part i onto an edge of part j.
    auto edgeOf = [&](int part) {
      std::vector<Edge> edges;
      for (const auto& e : UniqueEdges(merged.faces)) {
        if (e.first >= start[part] && e.first < start[part + 1]) edges.push_back(e);
      }
      std::uniform_int_distribution<int> d(0, static_cast<int>(edges.size()) - 1);
      return edges[d(rng)];
    };
    const Edge a = edgeOf(i), b = edgeOf(j);
    rep[find(a.first)] = find(b.first);
    if (find(a.second) != find(b.first)) rep[find(a.second)] = find(b.second);
  }
  RawMesh glued;
  glued.vertices = merged.vertices;
  std::set<Face> seen;
  for (const Face& f : merged.faces) {
    const Face g = {find(f[0]), find(f[1]), find(f[2])};
    if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2]) continue;
    if (!seen.insert(SortedFace(g)).second) continue;
    glued.faces.push_back(g);
  }
  return Grid(glued);
}

}  // namespace silk::testing
