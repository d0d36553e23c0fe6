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

// Faces from a layered edge structure.
//
// The token stream stores edges only, so faces are recovered as triangles
// (3-cliques) of the edge graph. A clique is not always a face: a triangle
// of edges can enclose a region without bounding it. Candidates are settled
// by propagation over edges, since a manifold edge bounds at most two faces
// and every edge bounds at least one:
//   - an edge whose undecided plus accepted candidates number at most two
//     accepts them all;
//   - an edge with two accepted faces rejects the rest.
// Candidates still open afterwards are accepted greedily, those spanning
// two layers before those inside one layer, then by vertex order.
//
// Winding follows the layer convention (the layer L-1 edge of a face runs
// backwards, the layer L edge forwards; faces inside one layer run in
// ascending order) and is then made consistent by a breadth-first pass
// seeded at the face (V^0_1, V^1_1, V^1_2).
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <unordered_map>
#include <utility>
#include <vector>

#include "silk/layering.hpp"
#include "silk/mesh.hpp"

namespace silk {

/// Layers (mesh vertex ids in order) plus their matrices: everything the
/// token stream says about one component's connectivity.
struct LayeredComponent {
  std::vector<std::vector<int>> layers;
  LayerMatrices matrices;

  int VertexCount() const {
    int n = 0;
    for (const auto& l : layers) n += static_cast<int>(l.size());
    return n;
  }
};

struct FaceDerivation {
  std::vector<Face> faces;    // mesh vertex ids, oriented
  int orientationFixes = 0;   // faces whose layer-rule winding was reversed
  int greedyAccepted = 0;     // faces settled by the greedy step
};

namespace detail {

inline std::uint64_t PairKey(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace detail

inline FaceDerivation DeriveFaces(const LayeredComponent& c) {
  FaceDerivation out;
  const int layerCount = static_cast<int>(c.layers.size());
  std::vector<int> base(layerCount + 1, 0);
  for (int l = 0; l < layerCount; ++l) {
    base[l + 1] = base[l] + static_cast<int>(c.layers[l].size());
  }
  const int n = base[layerCount];
  std::vector<int> layerOf(n), indexOf(n), global(n);
  for (int l = 0; l < layerCount; ++l) {
    for (int i = 0; i < static_cast<int>(c.layers[l].size()); ++i) {
      layerOf[base[l] + i] = l;
      indexOf[base[l] + i] = i;
      global[base[l] + i] = c.layers[l][i];
    }
  }

  std::vector<std::vector<int>> adj(n);
  auto connect = [&](int a, int b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (int l = 0; l < static_cast<int>(c.matrices.self.size()) && l < layerCount; ++l) {
    for (auto [i, j] : c.matrices.self[l].entries) connect(base[l] + i, base[l] + j);
  }
  for (int l = 1; l < static_cast<int>(c.matrices.between.size()) && l < layerCount; ++l) {
    const auto& rows = c.matrices.between[l].rows;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      for (int j : rows[i]) connect(base[l] + i, base[l - 1] + j);
    }
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  // Candidate triangles a < b < d.
  std::vector<Face> tris;
  for (int a = 0; a < n; ++a) {
    for (int b : adj[a]) {
      if (b <= a) continue;
      auto ia = std::upper_bound(adj[a].begin(), adj[a].end(), b);
      auto ib = std::upper_bound(adj[b].begin(), adj[b].end(), b);
      while (ia != adj[a].end() && ib != adj[b].end()) {
        if (*ia < *ib) {
          ++ia;
        } else if (*ib < *ia) {
          ++ib;
        } else {
          tris.push_back({a, b, *ia});
          ++ia;
          ++ib;
        }
      }
    }
  }
  const int nt = static_cast<int>(tris.size());
  std::unordered_map<std::uint64_t, std::vector<int>> byEdge;
  byEdge.reserve(3 * tris.size());
  for (int t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      byEdge[detail::PairKey(tris[t][k], tris[t][(k + 1) % 3])].push_back(t);
    }
  }

  // 0 open, 1 accepted, -1 rejected.
  std::vector<int> status(nt, 0);
  std::unordered_map<std::uint64_t, int> acceptedOn;
  auto edgeKeys = [&](int t) {
    const Face& f = tris[t];
    return std::array<std::uint64_t, 3>{detail::PairKey(f[0], f[1]),
                                        detail::PairKey(f[1], f[2]),
                                        detail::PairKey(f[0], f[2])};
  };
  std::deque<std::uint64_t> work;
  auto accept = [&](int t) {
    const auto keys = edgeKeys(t);
    for (auto k : keys) {
      if (acceptedOn[k] >= 2) {
        status[t] = -1;
        for (auto k2 : keys) work.push_back(k2);
        return;
      }
    }
    status[t] = 1;
    for (auto k : keys) {
      ++acceptedOn[k];
      work.push_back(k);
    }
  };
  auto propagate = [&]() {
    while (!work.empty()) {
      const auto key = work.front();
      work.pop_front();
      const auto& list = byEdge[key];
      int accepted = 0, open = 0;
      for (int t : list) {
        accepted += status[t] == 1;
        open += status[t] == 0;
      }
      if (open == 0) continue;
      if (accepted >= 2) {
        for (int t : list) {
          if (status[t] != 0) continue;
          status[t] = -1;
          for (auto k : edgeKeys(t)) work.push_back(k);
        }
      } else if (accepted + open <= 2) {
        for (int t : list) {
          if (status[t] == 0) accept(t);
        }
      }
    }
  };
  for (const auto& [key, list] : byEdge) work.push_back(key);
  // Deterministic start: process edges in key order.
  std::sort(work.begin(), work.end());
  propagate();

  std::vector<int> order(nt);
  for (int t = 0; t < nt; ++t) order[t] = t;
  auto sameLayer = [&](int t) {
    return layerOf[tris[t][0]] == layerOf[tris[t][2]];
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return sameLayer(x) < sameLayer(y); });
  for (int t : order) {
    if (status[t] != 0) continue;
    accept(t);
    if (status[t] == 1) ++out.greedyAccepted;
    propagate();
  }

  // Layer-rule winding.
  auto forward = [&](int p, int q) {
    // True when q follows p in the cyclic order of their shared layer: the
    // shorter way round, ties to ascending order.
    const int size = static_cast<int>(c.layers[layerOf[p]].size());
    const int d = ((indexOf[q] - indexOf[p]) % size + size) % size;
    if (2 * d != size) return 2 * d < size;
    return indexOf[p] < indexOf[q];
  };
  std::vector<Face> oriented;
  for (int t = 0; t < nt; ++t) {
    if (status[t] != 1) continue;
    const auto [a, b, d] = tris[t];
    Face f;
    if (layerOf[a] == layerOf[d]) {
      f = {a, b, d};
    } else if (layerOf[a] == layerOf[b]) {
      f = forward(a, b) ? Face{b, a, d} : Face{a, b, d};
    } else {
      f = forward(b, d) ? Face{b, d, a} : Face{d, b, a};
    }
    oriented.push_back(f);
  }

  // Consistency pass.
  const int nf = static_cast<int>(oriented.size());
  std::unordered_map<std::uint64_t, std::vector<int>> faceByEdge;
  for (int f = 0; f < nf; ++f) {
    for (int k = 0; k < 3; ++k) {
      faceByEdge[detail::PairKey(oriented[f][k], oriented[f][(k + 1) % 3])].push_back(f);
    }
  }
  auto traverses = [&](const Face& f, int u, int v) {
    for (int k = 0; k < 3; ++k) {
      if (f[k] == u && f[(k + 1) % 3] == v) return true;
    }
    return false;
  };
  auto reversed = [](const Face& f) { return Face{f[0], f[2], f[1]}; };
  std::vector<bool> done(nf, false);
  std::vector<Face> fixed = oriented;
  int seed = -1;
  for (int f = 0; f < nf; ++f) {
    if (SortedFace(oriented[f]) == Face{0, 1, 2}) seed = f;
  }
  auto flood = [&](int s, const Face& seedFace) {
    fixed[s] = seedFace;
    done[s] = true;
    std::deque<int> queue = {s};
    while (!queue.empty()) {
      const int f = queue.front();
      queue.pop_front();
      for (int k = 0; k < 3; ++k) {
        const int u = fixed[f][k], v = fixed[f][(k + 1) % 3];
        for (int g : faceByEdge[detail::PairKey(u, v)]) {
          if (done[g]) continue;
          done[g] = true;
          fixed[g] = traverses(oriented[g], u, v) ? reversed(oriented[g]) : oriented[g];
          queue.push_back(g);
        }
      }
    }
  };
  if (seed >= 0) flood(seed, layerOf[2] == 1 ? Face{0, 1, 2} : oriented[seed]);
  for (int f = 0; f < nf; ++f) {
    if (!done[f]) flood(f, oriented[f]);
  }
  for (int f = 0; f < nf; ++f) {
    if (CanonicalRotation(fixed[f]) != CanonicalRotation(oriented[f])) ++out.orientationFixes;
    out.faces.push_back({global[fixed[f][0]], global[fixed[f][1]], global[fixed[f][2]]});
  }
  return out;
}

}  // namespace silk
