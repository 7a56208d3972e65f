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
// Lists every probe-visible transition of the dense five-qubit fixture and
// the lineshape a sweep should produce for it, without running the sweep.

#include <cstdio>

#include "probespec/probespec.hpp"

int main() {
  using namespace probespec;

  const Model model = water_analog_model();
  const EigenSystem eig = eigendecompose(model.system);

  const TransitionTable table = transition_table(
      eig, model.coupling, model.initial, 0.4, 2.0, SweepMode::Absorption);

  std::printf("# transitions reachable from the initial state, window [0.4, 2.0]\n");
  std::printf("%4s %4s %10s %12s %12s %8s\n", "i", "j", "delta_e",
              "|<j|A|i>|", "overlap", "padded");
  for (const auto& r : table.records) {
    std::printf("%4d %4d %10.5f %12.6g %12.6g %8s\n", r.i, r.j, r.delta_e,
                r.matrix_element, r.overlap, r.padded ? "yes" : "no");
  }

  std::printf("\n# predicted on-resonance lines at c=%g tau=%g\n",
              model.probe.c, model.probe.tau);
  for (const auto& r : table.records) {
    const double h = rabi_predict(r, model.probe.c, model.probe.tau, r.delta_e);
    if (h < 1e-6) continue;
    std::printf("omega=%.5f height=%.6f width>=%.6f\n", r.delta_e, h,
                peak_width_floor(r, model.probe.c, model.probe.tau));
  }
  return 0;
}
