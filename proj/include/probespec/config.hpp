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

#include <cstdlib>

namespace probespec {

/// Dense realizations (matrices, statevectors, eigendecompositions) are
/// refused above this qubit count. Defaults to 12 joint qubits; override with
/// the PROBESPEC_DENSE_CAP environment variable (values outside [1, 24] are
/// ignored). Read once, at first use.
inline int dense_qubit_cap() {
  static const int cap = [] {
    if (const char* env = std::getenv("PROBESPEC_DENSE_CAP")) {
      const int v = std::atoi(env);
      if (v >= 1 && v <= 24) return v;
    }
    return 12;
  }();
  return cap;
}

}  // namespace probespec
