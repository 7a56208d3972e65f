// Copyright 2026 The probespec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace probespec {

/// Failure categories carried by probespec::Error. The CLI maps each category
/// onto a stable single-line token and exit code.
enum class ErrorCode {
  Parse,        ///< malformed text or JSON input
  Structure,    ///< inconsistent register widths or shapes
  Validation,   ///< violated value contract (non-Hermitian, bad range, ...)
  Dimension,    ///< embedded dimension does not fit the register
  Resource,     ///< dense realization above the configured qubit cap
  Io,           ///< file could not be read or written
  Propagation,  ///< time evolution failed
  Projection,   ///< projection onto a zero-probability outcome
  ChainStep,    ///< eigenstate-preparation step aborted
  Config,       ///< unknown preset or option combination
};

inline const char* error_token(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "E_PARSE";
    case ErrorCode::Structure: return "E_STRUCTURE";
    case ErrorCode::Validation: return "E_VALIDATION";
    case ErrorCode::Dimension: return "E_DIMENSION";
    case ErrorCode::Resource: return "E_RESOURCE";
    case ErrorCode::Io: return "E_IO";
    case ErrorCode::Propagation: return "E_PROPAGATION";
    case ErrorCode::Projection: return "E_PROJECTION";
    case ErrorCode::ChainStep: return "E_CHAIN_STEP";
    case ErrorCode::Config: return "E_CONFIG";
  }
  return "E_UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace probespec
