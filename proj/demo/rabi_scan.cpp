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
// Minimal library walkthrough: sweep a probe across the two-level fixture's
// resonance and print the resulting line.

#include <cstdio>

#include "probespec/probespec.hpp"

int main() {
  using namespace probespec;

  const Model model = two_level_model();

  SweepPlan plan;
  plan.omega_min = 0.9;
  plan.omega_max = 1.1;
  plan.points = 81;

  const Spectrum spectrum = run_sweep(model, plan);
  std::fputs(spectrum_to_csv(spectrum).c_str(), stdout);

  const auto peaks = detect_peaks(spectrum);
  for (const auto& p : peaks) {
    std::printf("# peak at omega=%.6f height=%.6f fwhm=%.6f\n", p.center,
                p.height, p.fwhm);
    std::printf("# shots for 95%% confidence at this height: %lld\n",
                static_cast<long long>(required_shots(p.height, 0.95)));
  }
  return 0;
}
