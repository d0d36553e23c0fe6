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

// Non-manifold repair by edge-graph partitioning.
//
// A non-manifold vertex v is fixed by choosing one cycle or chain of its
// edge graph to keep (the faces that stay on v) and moving every other
// connected group of faces onto a freshly registered duplicate of v. The
// kept candidate is the best one under, in order:
//   1. cohesion: most candidate nodes sharing one mesh-component label,
//      where labels come from components of manifold vertices only and
//      non-manifold vertices carry no label;
//   2. cycles before chains;
//   3. longer before shorter;
//   4. lexicographically smallest canonical node sequence.
// Vertices are processed breadth-first: seeds in ascending id order, and
// after each split the vertices whose edge graphs changed are re-examined
// before the next seed. Splitting often turns neighbors manifold, so they
// need no duplicate of their own.
//
// Repair only splits vertices. Faces keep their ids; coordinates of new
// vertices copy their originals.
#pragma once

#include <algorithm>
#include <deque>
#include <numeric>
#include <utility>
#include <vector>

#include "silk/manifold.hpp"
#include "silk/mesh.hpp"

namespace silk {

/// Partition of an edge graph's links (faces at the reference vertex).
/// Nodes may appear both in the kept candidate and in a detached group: the
/// mesh edge v-u then survives on v and reappears on the duplicate.
struct PartitionPlan {
  std::vector<int> keptFaces;                    // sorted
  std::vector<std::vector<int>> detachedGroups;  // each sorted, ordered by first face
  std::vector<int> keptNodes;                    // canonical node sequence
  bool keptIsCycle = false;
};

struct RepairLog {
  std::vector<int> processedVertices;  // in processing order
  std::vector<std::pair<int, int>> duplicatesCreated;  // (original, new)
  int facesRewired = 0;
};

struct RepairResult {
  QuantizedMesh mesh;
  RepairLog log;
};

constexpr int kNoComponentLabel = -1;

// Edge graphs with more links than this are searched with a step budget
// instead of exhaustively.
constexpr int kExhaustiveLinkLimit = 24;

namespace detail {

struct CandidateScore {
  int cohesion = -1;
  bool isCycle = false;
  int length = 0;
  std::vector<int> sequence;

  bool BetterThan(const CandidateScore& o) const {
    if (cohesion != o.cohesion) return cohesion > o.cohesion;
    if (isCycle != o.isCycle) return isCycle;
    if (length != o.length) return length > o.length;
    return sequence < o.sequence;
  }
};

class CandidateSearch {
 public:
  CandidateSearch(const EdgeGraph& g, const std::vector<int>& labels)
      : g_(g), labels_(labels) {
    const int n = static_cast<int>(g.nodes.size());
    adjacency_.resize(n);
    for (int l = 0; l < static_cast<int>(g.links.size()); ++l) {
      const int a = g.NodeIndex(g.links[l].a), b = g.NodeIndex(g.links[l].b);
      adjacency_[a].push_back({l, b});
      adjacency_[b].push_back({l, a});
    }
    budget_ = static_cast<long>(g.links.size()) <= kExhaustiveLinkLimit ? 4'000'000L
                                                                        : 200'000L;
  }

  void Run() {
    const int n = static_cast<int>(g_.nodes.size());
    onPath_.assign(n, false);
    linkUsed_.assign(g_.links.size(), false);
    for (int s = 0; s < n && budget_ > 0; ++s) {
      nodes_ = {s};
      links_.clear();
      onPath_[s] = true;
      Extend(s);
      onPath_[s] = false;
    }
  }

  const CandidateScore& best() const { return best_; }
  const std::vector<int>& bestLinks() const { return bestLinks_; }

 private:
  struct Arc {
    int link;
    int to;
  };

  void Extend(int s) {
    if (--budget_ <= 0) return;
    const int tail = nodes_.back();
    for (const Arc& arc : adjacency_[tail]) {
      if (linkUsed_[arc.link]) continue;
      if (arc.to == s && !links_.empty()) {
        // Closing link back to the start: a cycle. Only count cycles whose
        // start is their smallest node so each is seen from one anchor.
        links_.push_back(arc.link);
        Consider(true);
        links_.pop_back();
        continue;
      }
      if (onPath_[arc.to]) continue;
      linkUsed_[arc.link] = true;
      onPath_[arc.to] = true;
      nodes_.push_back(arc.to);
      links_.push_back(arc.link);
      Consider(false);
      if (arc.to > s) Extend(s);
      links_.pop_back();
      nodes_.pop_back();
      onPath_[arc.to] = false;
      linkUsed_[arc.link] = false;
      if (budget_ <= 0) return;
    }
  }

  void Consider(bool cycle) {
    CandidateScore score;
    score.isCycle = cycle;
    score.length = static_cast<int>(links_.size());
    std::vector<int> seq;
    seq.reserve(nodes_.size());
    for (int i : nodes_) seq.push_back(g_.nodes[i]);
    if (cycle) {
      // Rotate to the smallest vertex, then pick the smaller direction.
      const auto minIt = std::min_element(seq.begin(), seq.end());
      std::rotate(seq.begin(), minIt, seq.end());
      if (seq.size() > 2 && seq.back() < seq[1]) std::reverse(seq.begin() + 1, seq.end());
    } else if (seq.back() < seq.front()) {
      std::reverse(seq.begin(), seq.end());
    }
    // Cohesion over distinct labeled nodes.
    std::vector<int> labels;
    for (int v : seq) {
      const int label = labels_[v];
      if (label != kNoComponentLabel) labels.push_back(label);
    }
    std::sort(labels.begin(), labels.end());
    int cohesion = 0;
    for (std::size_t i = 0; i < labels.size();) {
      std::size_t j = i;
      while (j < labels.size() && labels[j] == labels[i]) ++j;
      cohesion = std::max(cohesion, static_cast<int>(j - i));
      i = j;
    }
    score.cohesion = cohesion;
    score.sequence = std::move(seq);
    if (bestLinks_.empty() || score.BetterThan(best_)) {
      best_ = std::move(score);
      bestLinks_ = links_;
    }
  }

  const EdgeGraph& g_;
  const std::vector<int>& labels_;
  std::vector<std::vector<Arc>> adjacency_;
  std::vector<bool> onPath_;
  std::vector<bool> linkUsed_;
  std::vector<int> nodes_;
  std::vector<int> links_;
  long budget_ = 0;
  CandidateScore best_;
  std::vector<int> bestLinks_;
};

}  // namespace detail

/// Chooses which faces stay on the reference vertex. `labels` maps every
/// mesh vertex to its manifold-component label (kNoComponentLabel for
/// non-manifold vertices). A manifold edge graph keeps all of its faces.
inline PartitionPlan PartitionEdgeGraph(const EdgeGraph& g,
                                        const std::vector<int>& labels) {
  PartitionPlan plan;
  if (g.links.empty()) return plan;
  detail::CandidateSearch search(g, labels);
  search.Run();
  std::vector<bool> kept(g.links.size(), false);
  for (int l : search.bestLinks()) kept[l] = true;
  plan.keptNodes = search.best().sequence;
  plan.keptIsCycle = search.best().isCycle;
  if (g.IsManifold()) std::fill(kept.begin(), kept.end(), true);

  // Remaining links, grouped by shared nodes.
  const int nl = static_cast<int>(g.links.size());
  std::vector<int> parent(nl);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < nl; ++i) {
    if (kept[i]) continue;
    for (int j = i + 1; j < nl; ++j) {
      if (kept[j]) continue;
      const auto& a = g.links[i];
      const auto& b = g.links[j];
      if (a.a == b.a || a.a == b.b || a.b == b.a || a.b == b.b) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> groupOf(nl, -1);
  for (int i = 0; i < nl; ++i) {
    if (kept[i]) {
      plan.keptFaces.push_back(g.links[i].face);
      continue;
    }
    const int root = find(i);
    if (groupOf[root] < 0) {
      groupOf[root] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[groupOf[root]].push_back(g.links[i].face);
  }
  std::sort(plan.keptFaces.begin(), plan.keptFaces.end());
  for (auto& group : groups) std::sort(group.begin(), group.end());
  std::sort(groups.begin(), groups.end());
  plan.detachedGroups = std::move(groups);
  return plan;
}

/// Labels of connected components formed by manifold vertices only (linked
/// through face edges whose both ends are manifold). Non-manifold vertices
/// get kNoComponentLabel.
inline std::vector<int> ManifoldComponentLabels(
    const std::vector<Face>& faces, const std::vector<std::vector<int>>& incident,
    const std::vector<bool>& manifold) {
  const int n = static_cast<int>(incident.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Face& f : faces) {
    for (int k = 0; k < 3; ++k) {
      const int a = f[k], b = f[(k + 1) % 3];
      if (manifold[a] && manifold[b]) parent[find(a)] = find(b);
    }
  }
  std::vector<int> labels(n, kNoComponentLabel);
  std::vector<int> rootLabel(n, -1);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    if (!manifold[v]) continue;
    const int r = find(v);
    if (rootLabel[r] < 0) rootLabel[r] = next++;
    labels[v] = rootLabel[r];
  }
  return labels;
}

namespace detail {

class RepairState {
 public:
  explicit RepairState(const QuantizedMesh& mesh)
      : mesh_(mesh), incident_(VertexFaces(mesh.faces, mesh.VertexCount())) {
    CheckFaces(mesh);
  }

  bool IsManifold(int v) const {
    if (incident_[v].empty()) return true;
    return BuildEdgeGraph(mesh_.faces, incident_[v], v).IsManifold();
  }

  std::vector<int> Labels() const {
    std::vector<bool> manifold(incident_.size());
    for (std::size_t v = 0; v < incident_.size(); ++v) {
      manifold[v] = IsManifold(static_cast<int>(v));
    }
    return ManifoldComponentLabels(mesh_.faces, incident_, manifold);
  }

  PartitionPlan Plan(int v, const std::vector<int>& labels) const {
    return PartitionEdgeGraph(BuildEdgeGraph(mesh_.faces, incident_[v], v), labels);
  }

  // Moves each detached group onto a new duplicate of v. Returns the
  // vertices whose edge graphs changed (v, duplicates, other corners).
  std::vector<int> Apply(int v, const PartitionPlan& plan, RepairLog& log) {
    std::vector<int> touched = {v};
    for (const auto& group : plan.detachedGroups) {
      const int dup = mesh_.VertexCount();
      mesh_.vertices.push_back(mesh_.vertices[v]);
      incident_.emplace_back();
      for (int f : group) {
        for (int& c : mesh_.faces[f]) {
          if (c == v) {
            c = dup;
          } else {
            touched.push_back(c);
          }
        }
        incident_[dup].push_back(f);
        auto& list = incident_[v];
        list.erase(std::find(list.begin(), list.end(), f));
      }
      log.duplicatesCreated.push_back({v, dup});
      log.facesRewired += static_cast<int>(group.size());
      touched.push_back(dup);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    return touched;
  }

  int VertexCount() const { return mesh_.VertexCount(); }
  QuantizedMesh&& Take() { return std::move(mesh_); }

 private:
  QuantizedMesh mesh_;
  std::vector<std::vector<int>> incident_;
};

}  // namespace detail

/// Splits non-manifold vertices until every vertex fan is a single cycle or
/// chain. Deterministic for identical input.
inline RepairResult RepairNonManifold(const QuantizedMesh& mesh) {
  detail::RepairState state(mesh);
  RepairLog log;
  std::vector<int> seeds;
  for (int v = 0; v < state.VertexCount(); ++v) {
    if (!state.IsManifold(v)) seeds.push_back(v);
  }
  std::deque<int> queue;
  std::vector<bool> queued(state.VertexCount(), false);
  std::size_t nextSeed = 0;
  while (true) {
    if (queue.empty()) {
      if (nextSeed == seeds.size()) break;
      queue.push_back(seeds[nextSeed]);
      queued[seeds[nextSeed++]] = true;
    }
    const int v = queue.front();
    queue.pop_front();
    queued[v] = false;
    if (state.IsManifold(v)) continue;
    log.processedVertices.push_back(v);
    const PartitionPlan plan = state.Plan(v, state.Labels());
    for (int u : state.Apply(v, plan, log)) {
      if (u >= static_cast<int>(queued.size())) queued.resize(u + 1, false);
      if (!queued[u] && !state.IsManifold(u)) {
        queued[u] = true;
        queue.push_back(u);
      }
    }
    // A seed that was re-queued and fixed by a neighbor's split is skipped
    // by the IsManifold check when popped.
  }
  return {state.Take(), std::move(log)};
}

/// Baseline that partitions every non-manifold vertex of a snapshot at once
/// and repeats until the mesh is manifold. Used to measure how many extra
/// duplicates sequential processing avoids.
inline RepairResult RepairNonManifoldParallel(const QuantizedMesh& mesh,
                                              int maxPasses = 64) {
  detail::RepairState state(mesh);
  RepairLog log;
  for (int pass = 0; pass < maxPasses; ++pass) {
    std::vector<int> pending;
    for (int v = 0; v < state.VertexCount(); ++v) {
      if (!state.IsManifold(v)) pending.push_back(v);
    }
    if (pending.empty()) break;
    const std::vector<int> labels = state.Labels();
    std::vector<PartitionPlan> plans;
    for (int v : pending) plans.push_back(state.Plan(v, labels));
    for (std::size_t i = 0; i < pending.size(); ++i) {
      log.processedVertices.push_back(pending[i]);
      state.Apply(pending[i], plans[i], log);
    }
  }
  return {state.Take(), std::move(log)};
}

}  // namespace silk
