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

// Wavefront OBJ reader/writer. Only `v` and `f` records are interpreted;
// normals, texture coordinates, groups and materials are skipped on input
// and never written.
#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "silk/error.hpp"
#include "silk/mesh.hpp"
#include "silk/preprocess.hpp"

namespace silk {

struct ObjLoadStats {
  int droppedFaces = 0;  // faces with a repeated vertex index
  int triangulatedPolygons = 0;
};

namespace detail {

inline std::vector<std::string_view> SplitWords(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

}  // namespace detail

inline RawMesh ParseObj(std::istream& in, ObjLoadStats* stats = nullptr) {
  RawMesh mesh;
  ObjLoadStats local;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto words = detail::SplitWords(line);
    if (words.empty() || words[0].front() == '#') continue;
    if (words[0] == "v") {
      if (words.size() < 4) {
        throw Error(ErrorKind::kParse, "vertex needs 3 coordinates at line " +
                                           std::to_string(lineNo), lineNo);
      }
      Vec3d p;
      for (int d = 0; d < 3; ++d) {
        const std::string_view w = words[d + 1];
        auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), p[d]);
        if (ec != std::errc() || ptr != w.data() + w.size()) {
          throw Error(ErrorKind::kParse, "malformed coordinate at line " +
                                             std::to_string(lineNo), lineNo);
        }
      }
      mesh.vertices.push_back(p);
    } else if (words[0] == "f") {
      if (words.size() < 4) {
        throw Error(ErrorKind::kParse, "face needs >= 3 vertices at line " +
                                           std::to_string(lineNo), lineNo);
      }
      std::vector<int> poly;
      for (std::size_t k = 1; k < words.size(); ++k) {
        std::string_view w = words[k];
        w = w.substr(0, w.find('/'));
        long long idx = 0;
        auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), idx);
        if (w.empty() || ec != std::errc() || ptr != w.data() + w.size() || idx == 0) {
          throw Error(ErrorKind::kParse, "malformed face index at line " +
                                             std::to_string(lineNo), lineNo);
        }
        // Negative indices are relative to the vertices read so far.
        const long long n = static_cast<long long>(mesh.vertices.size());
        const long long resolved = idx > 0 ? idx - 1 : n + idx;
        if (resolved < 0 || resolved >= n) {
          throw Error(ErrorKind::kParse, "face index out of range at line " +
                                             std::to_string(lineNo), lineNo);
        }
        poly.push_back(static_cast<int>(resolved));
      }
      if (poly.size() > 3) ++local.triangulatedPolygons;
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        const Face f = {poly[0], poly[k], poly[k + 1]};
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
          ++local.droppedFaces;
          continue;
        }
        mesh.faces.push_back(f);
      }
    }
  }
  if (mesh.faces.empty()) throw Error(ErrorKind::kParse, "OBJ contains no faces");
  if (stats) *stats = local;
  return mesh;
}

inline RawMesh LoadObj(const std::string& path, ObjLoadStats* stats = nullptr) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  return ParseObj(in, stats);
}

inline void WriteObj(std::ostream& out, const RawMesh& mesh) {
  char buf[64];
  for (const Vec3d& p : mesh.vertices) {
    out << 'v';
    for (double c : p) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), c);
      out << ' ' << std::string_view(buf, end - buf);
    }
    out << '\n';
  }
  for (const Face& f : mesh.faces) {
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  }
}

/// Writes via a temporary file and rename so readers never see a partial
/// file.
inline void SaveObj(const RawMesh& mesh, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
    WriteObj(out, mesh);
    if (!out) throw Error(ErrorKind::kIo, "write failed for " + path);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorKind::kIo, "cannot move " + tmp + " to " + path);
  }
}

/// Grid meshes are written at their cell centers in the unit cube.
inline void SaveObj(const QuantizedMesh& mesh, const std::string& path) {
  SaveObj(Dequantize(mesh), path);
}

}  // namespace silk
