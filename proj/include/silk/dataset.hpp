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

// Corpus preparation: scanning and filtering meshes, the progressively
// balanced sampling schedule, and training-time augmentation.
//
// Meshes are grouped in classes of 100 faces. Sampling moves linearly from
// instance-balanced (p_IB, proportional to class size) at epoch 0 to
// class-balanced (p_CB, uniform over non-empty classes) at epoch T:
//   p_PB(j, t) = (1 - t/T) p_IB(j) + (t/T) p_CB(j).
#pragma once

#include <climits>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "silk/config.hpp"
#include "silk/error.hpp"
#include "silk/halfedge.hpp"
#include "silk/layering.hpp"
#include "silk/manifold.hpp"
#include "silk/metrics.hpp"
#include "silk/obj_io.hpp"
#include "silk/pipeline.hpp"
#include "silk/token_stream.hpp"

namespace silk {

constexpr int kFacesPerClass = 100;

inline int ClassIdForFaces(int faces) { return faces / kFacesPerClass; }

struct CorpusEntry {
  std::string meshPath;
  int faceCount = 0;
  std::optional<int> tokenLength;  // only for encodable meshes
  int maxLayerWidth = 0;
  int classId = 0;
  std::string error;  // why encoding failed, empty otherwise

  bool Encodable() const { return tokenLength.has_value(); }
};

/// Widest layer over all components, without a capacity limit.
inline int MaxLayerWidth(const QuantizedMesh& mesh) {
  const HalfEdgeMesh he = HalfEdgeMesh::Build(mesh);
  const ComponentLabels labels = ConnectedComponents(he.Faces(), he.VertexCount());
  std::vector<std::vector<int>> faces(labels.componentCount);
  for (int f = 0; f < he.FaceCount(); ++f) {
    faces[labels.componentOf[he.Faces()[f][0]]].push_back(f);
  }
  int width = 0;
  for (const auto& list : faces) {
    if (list.empty()) continue;
    width = std::max(width, LabelComponent(he, mesh.vertices, list, INT_MAX).MaxWidth());
  }
  return width;
}

/// Scans an already prepared mesh. Encoding failures are recorded, not
/// thrown.
inline CorpusEntry ScanPrepared(const std::string& path, const QuantizedMesh& mesh,
                                const CodecConfig& config = {}) {
  CorpusEntry e;
  e.meshPath = path;
  e.faceCount = mesh.FaceCount();
  e.classId = ClassIdForFaces(e.faceCount);
  try {
    e.maxLayerWidth = MaxLayerWidth(mesh);
    e.tokenLength = static_cast<int>(EncodeMesh(mesh, config).size());
  } catch (const Error& err) {
    e.error = err.what();
  }
  return e;
}

/// Loads, prepares and scans one OBJ file. I/O and parse errors propagate.
inline CorpusEntry ScanMesh(const std::string& path, const CodecConfig& config = {}) {
  const PreparedMesh prepared = PrepareMesh(LoadObj(path), config);
  return ScanPrepared(path, prepared.mesh, config);
}

struct FilterResult {
  std::vector<CorpusEntry> kept;
  std::vector<CorpusEntry> rejected;
};

inline bool PassesFilter(const CorpusEntry& e, int maxTokens, int maxLayerWidth) {
  return e.Encodable() && *e.tokenLength <= maxTokens && e.maxLayerWidth <= maxLayerWidth;
}

inline FilterResult FilterCorpus(const std::vector<CorpusEntry>& entries, int maxTokens = 10000,
                                 int maxLayerWidth = 200) {
  FilterResult r;
  for (const CorpusEntry& e : entries) {
    (PassesFilter(e, maxTokens, maxLayerWidth) ? r.kept : r.rejected).push_back(e);
  }
  return r;
}

struct SamplingSchedule {
  int totalEpochs = 1;
  std::vector<int> classCounts;  // n_j, indexed by class id
  std::vector<double> instanceProbs;
  std::vector<double> classProbs;

  int ClassCount() const { return static_cast<int>(classCounts.size()); }
};

inline SamplingSchedule BuildSchedule(const std::vector<int>& classCounts, int totalEpochs) {
  if (totalEpochs <= 0) throw Error(ErrorKind::kInvalidArgument, "total epochs must be positive");
  long long total = 0;
  int nonEmpty = 0;
  for (int n : classCounts) {
    if (n < 0) throw Error(ErrorKind::kInvalidArgument, "negative class count");
    total += n;
    nonEmpty += n > 0;
  }
  if (total == 0) throw Error(ErrorKind::kInvalidArgument, "schedule needs a non-empty class");
  SamplingSchedule s;
  s.totalEpochs = totalEpochs;
  s.classCounts = classCounts;
  for (int n : classCounts) {
    s.instanceProbs.push_back(static_cast<double>(n) / static_cast<double>(total));
    s.classProbs.push_back(n > 0 ? 1.0 / nonEmpty : 0.0);
  }
  return s;
}

inline SamplingSchedule BuildSchedule(const std::vector<CorpusEntry>& entries, int totalEpochs) {
  std::vector<int> counts;
  for (const CorpusEntry& e : entries) {
    if (e.classId >= static_cast<int>(counts.size())) counts.resize(e.classId + 1, 0);
    ++counts[e.classId];
  }
  return BuildSchedule(counts, totalEpochs);
}

inline double SamplingProbability(int classId, double epoch, const SamplingSchedule& s) {
  if (classId < 0 || classId >= s.ClassCount()) {
    throw Error(ErrorKind::kInvalidArgument, "class id out of range");
  }
  if (!(epoch >= 0.0) || epoch > s.totalEpochs) {
    throw Error(ErrorKind::kInvalidArgument, "epoch outside [0, T]");
  }
  const double a = epoch / s.totalEpochs;
  return (1.0 - a) * s.instanceProbs[classId] + a * s.classProbs[classId];
}

/// Rows (epoch, class id, probability) for integer epochs 0..T.
inline void WriteScheduleCsv(std::ostream& out, const SamplingSchedule& s) {
  out << "epoch,class_id,probability\n";
  out.precision(17);
  for (int t = 0; t <= s.totalEpochs; ++t) {
    for (int j = 0; j < s.ClassCount(); ++j) {
      out << t << ',' << j << ',' << SamplingProbability(j, t, s) << '\n';
    }
  }
}

struct Augmentation {
  Vec3d scale = {1.0, 1.0, 1.0};  // per axis
  int rotationSteps = 0;          // multiples of 30 degrees around +y
};

constexpr double kMinAugmentScale = 0.75;
constexpr double kMaxAugmentScale = 0.95;
constexpr int kRotationSteps = 12;

inline Augmentation DrawAugmentation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> scale(kMinAugmentScale, kMaxAugmentScale);
  std::uniform_int_distribution<int> step(0, kRotationSteps - 1);
  Augmentation a;
  for (double& s : a.scale) s = scale(rng);
  a.rotationSteps = step(rng);
  return a;
}

/// Scales per axis, rotates about y, then normalizes back to the unit cube.
inline RawMesh ApplyAugmentation(const RawMesh& mesh, const Augmentation& a) {
  const double angle = a.rotationSteps * (2.0 * std::numbers::pi / kRotationSteps);
  const double c = std::cos(angle), s = std::sin(angle);
  RawMesh out = mesh;
  for (Vec3d& p : out.vertices) {
    const Vec3d q = {(p[0] - 0.5) * a.scale[0], (p[1] - 0.5) * a.scale[1],
                     (p[2] - 0.5) * a.scale[2]};
    p = {c * q[0] + s * q[2], q[1], -s * q[0] + c * q[2]};
  }
  return Normalize(out).mesh;
}

inline RawMesh AugmentMesh(const RawMesh& mesh, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return ApplyAugmentation(mesh, DrawAugmentation(rng));
}

constexpr int kConditionPoints = 4096;
constexpr double kConditionNoiseProbability = 0.5;
constexpr double kConditionNoiseSigma = 0.005;

struct PointCloudCondition {
  std::vector<Vec3d> points;
  bool noisy = false;
};

/// Area-weighted surface points; with probability `noiseProb` the whole
/// cloud gets isotropic gaussian noise of standard deviation `sigma`.
inline PointCloudCondition SamplePointCloudCondition(
    const RawMesh& mesh, int count = kConditionPoints,
    double noiseProb = kConditionNoiseProbability, double sigma = kConditionNoiseSigma,
    std::uint64_t seed = kDefaultSampleSeed) {
  if (noiseProb < 0.0 || noiseProb > 1.0) {
    throw Error(ErrorKind::kInvalidArgument, "noise probability outside [0, 1]");
  }
  std::mt19937_64 rng(seed);
  PointCloudCondition out;
  out.noisy = std::bernoulli_distribution(noiseProb)(rng);
  out.points = SampleSurface(mesh, count, rng()).points;
  if (out.noisy && sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma);
    for (Vec3d& p : out.points) {
      for (double& x : p) x += noise(rng);
    }
  }
  return out;
}

}  // namespace silk
