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

#include "probespec/config.hpp"
#include "probespec/errors.hpp"
#include "probespec/evolve.hpp"
#include "probespec/io.hpp"
#include "probespec/model.hpp"
#include "probespec/oracle.hpp"
#include "probespec/pauli.hpp"
#include "probespec/presets.hpp"
#include "probespec/rng.hpp"
#include "probespec/spectroscopy.hpp"
#include "probespec/types.hpp"
#include "probespec/validate.hpp"
