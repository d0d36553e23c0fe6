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

#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "silk/error.hpp"

namespace silk {

/// Codec parameters. Defaults are the production values: a 128-level grid,
/// self-layer window 8, between-layer window 5 and at most 200 vertices per
/// layer, which together give a 10,267-entry vocabulary.
struct CodecConfig {
  int resolution = 128;
  int selfWindow = 8;
  int betweenWindow = 5;
  int maxLayerWidth = 200;
  int maxTokens = 10000;
  bool strictDecode = true;
  // Decode every encoded component and compare its faces with the input.
  // Meshes whose faces cannot be recovered from the edge graph are rejected.
  bool verifyFaces = true;
  std::uint64_t seed = 42;

  void Validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw Error(ErrorKind::kInvalidArgument, what);
    };
    require(resolution >= 2, "resolution must be >= 2");
    require(selfWindow >= 1 && selfWindow <= 16, "selfWindow must be in [1, 16]");
    require(betweenWindow >= 1 && betweenWindow <= 16,
            "betweenWindow must be in [1, 16]");
    require(maxLayerWidth >= 1, "maxLayerWidth must be positive");
    require(maxTokens >= 1, "maxTokens must be positive");
  }
};

namespace detail {

inline std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Applies `key = value` lines (TOML subset: comments with '#', optional
/// [section] headers which are ignored, booleans true/false) on top of
/// `config`. Unknown keys are an error.
inline CodecConfig ParseConfigText(const std::string& text,
                                   CodecConfig config = {}) {
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::Trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kParse, "expected key = value", lineNo);
    }
    const std::string key = detail::Trim(line.substr(0, eq));
    std::string value = detail::Trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    auto asInt = [&]() {
      try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
      } catch (const std::exception&) {
        throw Error(ErrorKind::kParse, "bad integer for '" + key + "'", lineNo);
      }
    };
    auto asBool = [&]() {
      if (value == "true") return true;
      if (value == "false") return false;
      throw Error(ErrorKind::kParse, "bad boolean for '" + key + "'", lineNo);
    };
    if (key == "resolution") {
      config.resolution = static_cast<int>(asInt());
    } else if (key == "W" || key == "self_window") {
      config.selfWindow = static_cast<int>(asInt());
    } else if (key == "Wprime" || key == "between_window") {
      config.betweenWindow = static_cast<int>(asInt());
    } else if (key == "m" || key == "max_layer_width") {
      config.maxLayerWidth = static_cast<int>(asInt());
    } else if (key == "max_tokens") {
      config.maxTokens = static_cast<int>(asInt());
    } else if (key == "strict_decode") {
      config.strictDecode = asBool();
    } else if (key == "verify_faces") {
      config.verifyFaces = asBool();
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(asInt());
    } else {
      throw Error(ErrorKind::kParse, "unknown config key '" + key + "'", lineNo);
    }
  }
  config.Validate();
  return config;
}

inline CodecConfig LoadConfigFile(const std::string& path,
                                  CodecConfig config = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigText(buffer.str(), config);
}

}  // namespace silk
