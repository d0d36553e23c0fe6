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

// JSON views of reports and records. Needs nlohmann/json on the include
// path (the silk_json target provides it).
#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "silk/dataset.hpp"
#include "silk/layering.hpp"
#include "silk/metrics.hpp"
#include "silk/repair.hpp"
#include "silk/token_stream.hpp"
#include "silk/watertight.hpp"

namespace silk {

using Json = nlohmann::ordered_json;

inline Json ToJson(const RepairLog& log) {
  Json dup = Json::array();
  for (const auto& [original, created] : log.duplicatesCreated) {
    dup.push_back({{"original", original}, {"duplicate", created}});
  }
  return {{"processed_vertices", log.processedVertices},
          {"duplicates_created", dup},
          {"faces_rewired", log.facesRewired}};
}

inline Json ToJson(const MatrixEntry& e) {
  return {{"kind", MatrixKindName(e.kind)}, {"component", e.component}, {"layer", e.layer},
          {"i", e.i}, {"j", e.j}};
}

inline Json ToJson(const HoleReport& r) {
  Json suspects = Json::array();
  for (const SuspectEntry& s : r.suspectEntries) {
    Json j = ToJson(s.entry);
    j["reduction"] = s.reduction;
    suspects.push_back(j);
  }
  return {{"boundary_edges", r.boundaryEdges},
          {"watertight", r.Watertight()},
          {"boundary_loops", r.boundaryLoops},
          {"suspect_entries", suspects}};
}

inline Json ToJson(const HoleRepair& r) {
  Json applied = Json::array();
  for (const SuspectEntry& s : r.applied) applied.push_back(ToJson(s.entry));
  return {{"boundary_before", r.boundaryBefore},
          {"boundary_after", r.boundaryAfter},
          {"applied", applied},
          {"residual", ToJson(r.residual)}};
}

inline Json ToJson(const MetricsRecord& m) {
  return {{"cd", m.cd}, {"hd", m.hd}, {"nc", m.nc}, {"abs_nc", m.absNc}, {"fr", m.fr}};
}

inline Json ToJson(const SequenceStats& s) {
  return {{"tokens", s.tokens},
          {"faces", s.faces},
          {"vertices", s.vertices},
          {"components", s.components},
          {"tokens_per_face", s.tokensPerFace},
          {"compression_ratio", s.compressionRatio},
          {"histogram", s.histogram}};
}

inline Json ToJson(const LayeredLabeling& l) {
  return {{"start", {l.start.origin, l.start.destination}}, {"layers", l.layers}};
}

inline Json ToJson(const CorpusEntry& e) {
  Json j = {{"mesh_path", e.meshPath},
            {"face_count", e.faceCount},
            {"token_length", nullptr},
            {"max_layer_width", e.maxLayerWidth},
            {"class_id", e.classId}};
  if (e.tokenLength) j["token_length"] = *e.tokenLength;
  if (!e.error.empty()) j["error"] = e.error;
  return j;
}

inline CorpusEntry CorpusEntryFromJson(const Json& j) {
  CorpusEntry e;
  try {
    e.meshPath = j.at("mesh_path").get<std::string>();
    e.faceCount = j.at("face_count").get<int>();
    if (!j.at("token_length").is_null()) e.tokenLength = j.at("token_length").get<int>();
    e.maxLayerWidth = j.at("max_layer_width").get<int>();
    e.classId = j.at("class_id").get<int>();
    if (j.contains("error")) e.error = j.at("error").get<std::string>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::kParse, std::string("bad manifest entry: ") + ex.what());
  }
  return e;
}

/// One compact JSON object per line.
inline void WriteManifest(std::ostream& out, const std::vector<CorpusEntry>& entries) {
  for (const CorpusEntry& e : entries) out << ToJson(e).dump() << '\n';
}

inline std::vector<CorpusEntry> ReadManifest(std::istream& in) {
  std::vector<CorpusEntry> entries;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorKind::kParse, "manifest line is not JSON", lineNo);
    entries.push_back(CorpusEntryFromJson(j));
  }
  return entries;
}

}  // namespace silk
