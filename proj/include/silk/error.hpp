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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace silk {

enum class ErrorKind {
  kIo,
  kParse,
  kInvalidArgument,
  kNonManifold,
  kNonOrientable,
  kCapacityExceeded,
  kUnencodableRow,
  kAmbiguousTopology,
  kInvalidToken,
  kGrammar,
  kFormat,
};

inline const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "io";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kNonManifold: return "non-manifold";
    case ErrorKind::kNonOrientable: return "non-orientable";
    case ErrorKind::kCapacityExceeded: return "capacity-exceeded";
    case ErrorKind::kUnencodableRow: return "unencodable-row";
    case ErrorKind::kAmbiguousTopology: return "ambiguous-topology";
    case ErrorKind::kInvalidToken: return "invalid-token";
    case ErrorKind::kGrammar: return "grammar";
    case ErrorKind::kFormat: return "format";
  }
  return "unknown";
}

/// Every failure in the library is reported as a silk::Error. The kind is
/// what callers branch on (the CLI maps it to an exit code); `position` is
/// the token index for grammar/token errors and the line number for parse
/// errors, or npos when not applicable.
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(ErrorKind kind, const std::string& message, std::size_t position = npos)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind),
        position_(position),
        message_(message) {}

  ErrorKind kind() const { return kind_; }
  std::size_t position() const { return position_; }
  // The message without the kind prefix.
  const std::string& message() const { return message_; }

 private:
  ErrorKind kind_;
  std::size_t position_;
  std::string message_;
};

}  // namespace silk
