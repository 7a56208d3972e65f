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
//
// Regenerates the committed fixture files. The water-analog fixture is only
// usable if its level structure came out as designed, so this tool verifies
// the spectrum before writing anything and fails loudly otherwise.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "probespec/probespec.hpp"

using namespace probespec;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    std::fprintf(stderr, "fixture check failed: %s\n", what.c_str());
    ++failures;
  }
}

void verify_water_analog(const Model& model) {
  const EigenSystem eig = eigendecompose(model.system);
  std::vector<double> zero_levels;
  std::vector<double> block_levels;
  for (int k = 0; k < eig.dimension(); ++k) {
    if (std::abs(eig.energies(k)) < 1e-9) {
      zero_levels.push_back(eig.energies(k));
    } else {
      block_levels.push_back(eig.energies(k));
    }
  }
  check(zero_levels.size() == 14, "expected 14 zero-energy padding levels");
  check(block_levels.size() == 18, "expected 18 block levels");
  const double ladder[18] = {0.60, 1.05, 1.35, 1.72, 1.90, 2.12,
                             2.45, 2.65, 2.82, 2.99, 3.16, 3.33,
                             3.50, 3.67, 3.84, 4.01, 4.18, 4.35};
  for (int k = 0; k < static_cast<int>(block_levels.size()) && k < 18; ++k) {
    check(std::abs(block_levels[static_cast<std::size_t>(k)] - ladder[k]) <
              0.08,
          "block level " + std::to_string(k) + " strayed from the ladder");
  }
  for (std::size_t k = 1; k < block_levels.size(); ++k) {
    check(block_levels[k] - block_levels[k - 1] > 0.1,
          "block levels " + std::to_string(k - 1) + "," + std::to_string(k) +
              " closer than 0.1");
  }
  // The block ground state must keep its |00010> character.
  int ground = -1;
  for (int k = 0; k < eig.dimension(); ++k) {
    if (std::abs(eig.energies(k) - 0.60) < 0.08) {
      ground = k;
      break;
    }
  }
  check(ground >= 0, "no level near 0.60");
  if (ground >= 0) {
    check(std::norm(eig.vectors(2, ground)) > 0.85,
          "ground eigenstate lost its dominant basis label");
  }
  // |11111> must be an exact zero-energy eigenstate.
  Eigen::VectorXcd e31 = Eigen::VectorXcd::Zero(32);
  e31(31) = 1.0;
  check((model.system.to_matrix() * e31).norm() < 1e-12,
        "|11111> is not an exact zero-energy eigenstate");
}

void write_fixture(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
  std::printf("wrote %s\n", path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(dir);
  try {
    write_fixture(dir + "/twolevel.json", model_to_json(two_level_model()));

    Model water = water_analog_model();
    verify_water_analog(water);
    write_fixture(dir + "/water_analog.json", model_to_json(water));

    Model hidden = water_analog_model("eq7", "11111", 0.002, 800.0);
    hidden.name = "water_analog_hidden";
    write_fixture(dir + "/water_analog_hidden.json",
                  model_to_json(hidden, /*inline_coupling=*/true));
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s %s\n", error_token(e.code()), e.what());
    return 1;
  }
  if (failures > 0) {
    std::fprintf(stderr, "%d fixture checks failed; nothing usable written\n",
                 failures);
    return 1;
  }
  return 0;
}
