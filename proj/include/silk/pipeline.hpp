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

// Raw mesh to encodable grid mesh: normalize, quantize, repair.
#pragma once

#include "silk/config.hpp"
#include "silk/mesh.hpp"
#include "silk/preprocess.hpp"
#include "silk/repair.hpp"

namespace silk {

struct PreparedMesh {
  QuantizedMesh mesh;
  QuantizeStats quantize;
  RepairLog repair;
};

inline PreparedMesh PrepareMesh(const RawMesh& raw, const CodecConfig& config = {}) {
  config.Validate();
  CheckFaces(raw);
  const NormalizedMesh normalized = Normalize(raw);
  PreparedMesh out;
  const QuantizedMesh grid =
      Quantize(normalized.mesh, config.resolution, &out.quantize, normalized.transform);
  RepairResult repaired = RepairNonManifold(grid);
  out.mesh = std::move(repaired.mesh);
  out.repair = std::move(repaired.log);
  return out;
}

}  // namespace silk
