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

#include <catch2/catch_amalgamated.hpp>

#include "probespec/errors.hpp"

namespace testutil {

/// Runs f, requires that it throws probespec::Error with the given code.
template <typename F>
void expect_error(probespec::ErrorCode code, F&& f) {
  try {
    f();
    FAIL("expected an error with token "
         << probespec::error_token(code) << ", none was thrown");
  } catch (const probespec::Error& e) {
    INFO(e.what());
    CHECK(e.code() == code);
  }
}

}  // namespace testutil
