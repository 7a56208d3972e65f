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

#include <cmath>
#include <string>
#include <vector>

#include "probespec/oracle.hpp"
#include "probespec/spectroscopy.hpp"
#include "probespec/types.hpp"

namespace probespec {

/// Outcome of checking a simulated spectrum against the transition-table
/// oracle. Records are classified by their analytically predicted on-
/// resonance height h: those with h >= 2 * threshold must show up as peaks
/// (anything else is a defect), while records below that are reported as
/// selection-rule suppressed rather than failed. Peaks near no record at
/// all are listed as spurious.
struct ValidationReport {
  Spectrum spectrum;
  std::vector<Peak> peaks;
  TransitionTable table;
  double threshold = 0.0;
  std::vector<double> tolerances;        ///< per record
  std::vector<double> predicted_heights; ///< per record, on resonance
  MatchResult matches;
  std::vector<int> missing_expected;     ///< record indices, must be empty
  std::vector<int> suppressed_records;   ///< below 2*threshold, no peak
  std::vector<int> spurious_peaks;       ///< peak indices near no record

  bool passed() const {
    return missing_expected.empty() && spurious_peaks.empty();
  }
};

/// Checks a pre-computed spectrum against the oracle for `model`. The
/// matching tolerance per record is max(2 c M, 2 / tau) + grid spacing: the
/// analytic peak width floor plus one grid cell.
inline ValidationReport validate_spectrum(const Model& model,
                                          const Spectrum& spectrum,
                                          const ThresholdPolicy& policy = {}) {
  validate_model(model);
  ValidationReport report;
  report.spectrum = spectrum;
  report.peaks = detect_peaks(spectrum, policy);

  const EigenSystem eig = eigendecompose(model.system);
  report.table = transition_table(eig, model.coupling, model.initial,
                                  spectrum.plan.omega_min,
                                  spectrum.plan.omega_max, spectrum.plan.mode);

  double max_p = 0.0;
  for (const auto& pt : spectrum.points) {
    max_p = std::max(max_p, pt.probability);
  }
  report.threshold = effective_threshold(policy, max_p);

  // A loaded spectrum carries the probe parameters that produced it; prefer
  // those over the model's current settings when sizing tolerances.
  const bool has_meta = spectrum.tau > 0.0;
  const double spacing = grid_spacing(spectrum.plan);
  const double c = has_meta ? spectrum.c : model.probe.c;
  const double tau = has_meta ? spectrum.tau : model.probe.tau;
  for (const auto& rec : report.table.records) {
    report.tolerances.push_back(
        std::max(2.0 * c * rec.matrix_element, 2.0 / tau) + spacing);
    report.predicted_heights.push_back(rabi_predict(rec, c, tau, rec.delta_e));
  }

  report.matches = match_peaks(report.peaks, report.table, report.tolerances);
  for (int r : report.matches.unmatched_records) {
    if (report.predicted_heights[static_cast<std::size_t>(r)] >=
        2.0 * report.threshold) {
      report.missing_expected.push_back(r);
    } else {
      report.suppressed_records.push_back(r);
    }
  }
  report.spurious_peaks = report.matches.unmatched_peaks;

  // Label matched peaks for reporting.
  for (const auto& m : report.matches.matches) {
    if (!m.record) continue;
    const TransitionRecord& rec =
        report.table.records[static_cast<std::size_t>(*m.record)];
    report.peaks[static_cast<std::size_t>(m.peak)].assignment =
        std::to_string(rec.i) + "->" + std::to_string(rec.j);
  }
  return report;
}

/// Runs the sweep, then validates it.
inline ValidationReport validate_model_sweep(const Model& model,
                                             const SweepPlan& plan,
                                             const ThresholdPolicy& policy = {},
                                             int threads = 0) {
  return validate_spectrum(model, run_sweep(model, plan, threads), policy);
}

}  // namespace probespec
