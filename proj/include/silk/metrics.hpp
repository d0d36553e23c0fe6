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

// Surface metrics between two meshes and a few structural counts.
//
// Distances work on area-weighted surface samples. Chamfer is the symmetric
// mean of nearest-neighbor Euclidean distances (not squared), Hausdorff the
// largest of them. Normal consistency pairs every sample with its nearest
// neighbor in the other cloud and averages the normal dot products in both
// directions; |NC| averages their absolute values.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "silk/error.hpp"
#include "silk/mesh.hpp"
#include "silk/preprocess.hpp"

namespace silk {

constexpr int kDefaultSampleCount = 8192;
constexpr std::uint64_t kDefaultSampleSeed = 42;

struct SampledSurface {
  std::vector<Vec3d> points;
  std::vector<Vec3d> normals;  // unit, from face winding
  std::vector<int> sourceFace;

  std::size_t size() const { return points.size(); }
};

/// Area-weighted uniform samples. Deterministic for a given seed, and
/// independent of vertex order, face order and winding: faces are visited
/// in order of their sorted corner coordinates and sampled over those
/// sorted corners, so two meshes describing the same surface get the same
/// points. Only the normals follow the winding.
inline SampledSurface SampleSurface(const RawMesh& mesh, int count,
                                    std::uint64_t seed = kDefaultSampleSeed) {
  if (count < 0) throw Error(ErrorKind::kInvalidArgument, "negative sample count");
  CheckFaces(mesh);
  const int nf = static_cast<int>(mesh.faces.size());
  std::vector<std::array<Vec3d, 3>> corners(nf);
  std::vector<bool> odd(nf, false);  // sorting reversed the winding
  for (int f = 0; f < nf; ++f) {
    const Face& t = mesh.faces[f];
    std::array<Vec3d, 3> c = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    int swaps = 0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2 - i; ++j) {
        if (c[j + 1] < c[j]) {
          std::swap(c[j], c[j + 1]);
          ++swaps;
        }
      }
    }
    corners[f] = c;
    odd[f] = swaps % 2 == 1;
  }
  std::vector<int> order(nf);
  for (int f = 0; f < nf; ++f) order[f] = f;
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return corners[x] < corners[y]; });

  std::vector<double> cumulative;
  std::vector<Vec3d> unitNormals;
  cumulative.reserve(nf);
  unitNormals.reserve(nf);
  double total = 0.0;
  for (int f : order) {
    const auto& [a, b, c] = corners[f];
    const Vec3d n = Cross(b - a, c - a);
    const double len = Norm(n);
    total += 0.5 * len;
    cumulative.push_back(total);
    const double sign = odd[f] ? -1.0 : 1.0;
    unitNormals.push_back(len > 0.0 ? (sign / len) * n : Vec3d{0, 0, 0});
  }
  if (!(total > 0.0)) throw Error(ErrorKind::kInvalidArgument, "mesh has zero area");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SampledSurface s;
  s.points.reserve(count);
  s.normals.reserve(count);
  s.sourceFace.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double pick = unit(rng) * total;
    int slot = static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end(), pick) -
                                cumulative.begin());
    slot = std::min(slot, nf - 1);
    const double r1 = std::sqrt(unit(rng)), r2 = unit(rng);
    const auto& [a, b, c] = corners[order[slot]];
    s.points.push_back((1.0 - r1) * a + (r1 * (1.0 - r2)) * b + (r1 * r2) * c);
    s.normals.push_back(unitNormals[slot]);
    s.sourceFace.push_back(order[slot]);
  }
  return s;
}

/// Exact nearest-neighbor queries over a fixed point set, bucketed in a
/// uniform grid and searched ring by ring.
class PointGrid {
 public:
  explicit PointGrid(const std::vector<Vec3d>& points) : points_(points) {
    if (points.empty()) throw Error(ErrorKind::kInvalidArgument, "empty point set");
    lo_ = hi_ = points.front();
    for (const Vec3d& p : points) {
      for (int d = 0; d < 3; ++d) {
        lo_[d] = std::min(lo_[d], p[d]);
        hi_[d] = std::max(hi_[d], p[d]);
      }
    }
    const double extent = std::max({hi_[0] - lo_[0], hi_[1] - lo_[1], hi_[2] - lo_[2], 1e-12});
    // About two points per occupied cell on a surface-like set.
    const int perAxis = std::clamp(
        static_cast<int>(std::sqrt(static_cast<double>(points.size()) / 2.0)), 1, 256);
    cell_ = extent / perAxis;
    for (int d = 0; d < 3; ++d) {
      dims_[d] = std::max(1, static_cast<int>(std::floor((hi_[d] - lo_[d]) / cell_)) + 1);
    }
    start_.assign(static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2] + 1, 0);
    std::vector<int> cellOf(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      cellOf[i] = CellIndex(Coord(points[i]));
      ++start_[cellOf[i] + 1];
    }
    for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    order_.resize(points.size());
    std::vector<int> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < points.size(); ++i) order_[fill[cellOf[i]]++] = static_cast<int>(i);
  }

  struct Hit {
    int index = -1;
    double distance = std::numeric_limits<double>::infinity();
  };

  Hit Nearest(const Vec3d& q) const {
    std::array<int, 3> c;
    for (int d = 0; d < 3; ++d) {
      c[d] = std::clamp(static_cast<int>(std::floor((q[d] - lo_[d]) / cell_)), 0, dims_[d] - 1);
    }
    // Distance from q to the grid box, so that rings are bounded correctly
    // for queries outside it.
    double outside = 0.0;
    for (int d = 0; d < 3; ++d) {
      const double gap = std::max({lo_[d] - q[d], q[d] - (lo_[d] + dims_[d] * cell_), 0.0});
      outside += gap * gap;
    }
    outside = std::sqrt(outside);
    Hit best;
    double best2 = std::numeric_limits<double>::infinity();
    const int maxRing = std::max({dims_[0], dims_[1], dims_[2]});
    for (int r = 0; r <= maxRing; ++r) {
      for (int x = c[0] - r; x <= c[0] + r; ++x) {
        if (x < 0 || x >= dims_[0]) continue;
        for (int y = c[1] - r; y <= c[1] + r; ++y) {
          if (y < 0 || y >= dims_[1]) continue;
          for (int z = c[2] - r; z <= c[2] + r; ++z) {
            if (z < 0 || z >= dims_[2]) continue;
            if (std::max({std::abs(x - c[0]), std::abs(y - c[1]), std::abs(z - c[2])}) != r) {
              continue;  // interior of the ring was searched already
            }
            const int cell = (x * dims_[1] + y) * dims_[2] + z;
            for (int k = start_[cell]; k < start_[cell + 1]; ++k) {
              const int i = order_[k];
              const Vec3d v = points_[i] - q;
              const double d2 = Dot(v, v);
              if (d2 < best2 || (d2 == best2 && i < best.index)) {
                best2 = d2;
                best.index = i;
              }
            }
          }
        }
      }
      // Unvisited cells lie at least r cells past the query's cell along
      // some axis, on top of the gap to the grid box.
      const double reach = r * cell_;
      if (best.index >= 0 && best2 < outside * outside + reach * reach) break;
    }
    best.distance = std::sqrt(best2);
    return best;
  }

 private:
  std::array<int, 3> Coord(const Vec3d& p) const {
    std::array<int, 3> c;
    for (int d = 0; d < 3; ++d) {
      c[d] = std::clamp(static_cast<int>(std::floor((p[d] - lo_[d]) / cell_)), 0, dims_[d] - 1);
    }
    return c;
  }
  int CellIndex(const std::array<int, 3>& c) const {
    return (c[0] * dims_[1] + c[1]) * dims_[2] + c[2];
  }

  const std::vector<Vec3d>& points_;
  Vec3d lo_, hi_;
  double cell_ = 1.0;
  std::array<int, 3> dims_ = {1, 1, 1};
  std::vector<int> start_;
  std::vector<int> order_;
};

/// Nearest neighbor of every point of `from` in `to`.
inline std::vector<PointGrid::Hit> NearestNeighbors(const std::vector<Vec3d>& from,
                                                    const std::vector<Vec3d>& to) {
  const PointGrid grid(to);
  std::vector<PointGrid::Hit> hits;
  hits.reserve(from.size());
  for (const Vec3d& p : from) hits.push_back(grid.Nearest(p));
  return hits;
}

inline double Chamfer(const SampledSurface& a, const SampledSurface& b) {
  if (a.size() == 0 || b.size() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "chamfer needs two non-empty samples");
  }
  auto mean = [](const std::vector<PointGrid::Hit>& hits) {
    double s = 0.0;
    for (const auto& h : hits) s += h.distance;
    return s / static_cast<double>(hits.size());
  };
  return 0.5 * (mean(NearestNeighbors(a.points, b.points)) +
                mean(NearestNeighbors(b.points, a.points)));
}

inline double Hausdorff(const SampledSurface& a, const SampledSurface& b) {
  if (a.size() == 0 || b.size() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "hausdorff needs two non-empty samples");
  }
  double h = 0.0;
  for (const auto& hit : NearestNeighbors(a.points, b.points)) h = std::max(h, hit.distance);
  for (const auto& hit : NearestNeighbors(b.points, a.points)) h = std::max(h, hit.distance);
  return h;
}

struct NormalConsistencyResult {
  double nc = 0.0;
  double absNc = 0.0;
};

inline NormalConsistencyResult NormalConsistency(const SampledSurface& a,
                                                 const SampledSurface& b) {
  if (a.size() == 0 || b.size() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "normal consistency needs two non-empty samples");
  }
  auto side = [](const SampledSurface& from, const SampledSurface& to) {
    NormalConsistencyResult r;
    const auto hits = NearestNeighbors(from.points, to.points);
    for (std::size_t i = 0; i < hits.size(); ++i) {
      const double d = Dot(from.normals[i], to.normals[hits[i].index]);
      r.nc += d;
      r.absNc += std::abs(d);
    }
    r.nc /= static_cast<double>(hits.size());
    r.absNc /= static_cast<double>(hits.size());
    return r;
  };
  const auto ab = side(a, b), ba = side(b, a);
  return {0.5 * (ab.nc + ba.nc), 0.5 * (ab.absNc + ba.absNc)};
}

inline double FaceRatio(int predFaces, int gtFaces) {
  if (gtFaces <= 0) throw Error(ErrorKind::kInvalidArgument, "reference mesh has no faces");
  return static_cast<double>(predFaces) / gtFaces;
}

/// Vertices referenced by at least one face.
inline int ReferencedVertexCount(const std::vector<Face>& faces) {
  std::set<int> used;
  for (const Face& f : faces) used.insert(f.begin(), f.end());
  return static_cast<int>(used.size());
}

/// 2E / V over referenced vertices and distinct undirected edges.
inline double AverageDegree(const std::vector<Face>& faces) {
  const int v = ReferencedVertexCount(faces);
  if (v == 0) throw Error(ErrorKind::kInvalidArgument, "mesh has no faces");
  return 2.0 * static_cast<double>(UniqueEdges(faces).size()) / v;
}

/// V - E + F over referenced vertices.
inline int EulerCharacteristic(const std::vector<Face>& faces) {
  return ReferencedVertexCount(faces) - static_cast<int>(UniqueEdges(faces).size()) +
         static_cast<int>(faces.size());
}

/// Closed genus-0 average degree as a function of face count alone.
inline double SphereAverageDegree(double faces) { return 3.0 * faces / (faces / 2.0 + 2.0); }

struct MetricsRecord {
  double cd = 0.0;
  double hd = 0.0;
  double nc = 0.0;
  double absNc = 0.0;
  double fr = 0.0;
};

/// All metrics for a prediction against a reference, both already in the
/// same frame (for instance both quantized, or both normalized by the
/// reference's transform).
inline MetricsRecord ComputeMetrics(const RawMesh& pred, const RawMesh& gt,
                                    int samples = kDefaultSampleCount,
                                    std::uint64_t seed = kDefaultSampleSeed) {
  const SampledSurface a = SampleSurface(pred, samples, seed);
  const SampledSurface b = SampleSurface(gt, samples, seed);
  MetricsRecord r;
  r.cd = Chamfer(a, b);
  r.hd = Hausdorff(a, b);
  const auto nc = NormalConsistency(a, b);
  r.nc = nc.nc;
  r.absNc = nc.absNc;
  r.fr = FaceRatio(static_cast<int>(pred.faces.size()), static_cast<int>(gt.faces.size()));
  return r;
}

inline MetricsRecord ComputeMetrics(const QuantizedMesh& pred, const QuantizedMesh& gt,
                                    int samples = kDefaultSampleCount,
                                    std::uint64_t seed = kDefaultSampleSeed) {
  return ComputeMetrics(Dequantize(pred), Dequantize(gt), samples, seed);
}

/// Puts `pred` into the unit-cube frame of `gt` (the frame Normalize gives
/// the reference) and returns both.
inline std::pair<RawMesh, RawMesh> NormalizeJointly(const RawMesh& pred, const RawMesh& gt) {
  const NormalizedMesh ref = Normalize(gt);
  RawMesh p = pred;
  for (Vec3d& v : p.vertices) v = ref.transform.Forward(v);
  return {std::move(p), ref.mesh};
}

}  // namespace silk
