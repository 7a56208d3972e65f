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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "probespec/errors.hpp"
#include "probespec/evolve.hpp"

namespace probespec {

/// Absorption sweeps start the probe excited and watch it decay; emission
/// sweeps start it in the ground state and watch it absorb a system quantum.
enum class SweepMode { Absorption, Emission };

enum class Method { Exact, Trotter };

inline const char* sweep_mode_name(SweepMode m) {
  return m == SweepMode::Absorption ? "absorption" : "emission";
}

inline const char* method_name(Method m) {
  return m == Method::Exact ? "exact" : "trotter";
}

struct ShotPlan {
  std::int64_t count = 0;
  std::uint64_t seed = 0;
};

/// A frequency sweep: `points` intervals across [omega_min, omega_max],
/// sampled at interval midpoints.
struct SweepPlan {
  double omega_min = 0.0;
  double omega_max = 0.0;
  int points = 0;
  SweepMode mode = SweepMode::Absorption;
  Method method = Method::Exact;
  std::optional<TrotterPlan> trotter;  ///< steps=0 delegates to the step policy
  std::optional<ShotPlan> shots;
};

inline double grid_spacing(const SweepPlan& plan) {
  return (plan.omega_max - plan.omega_min) / static_cast<double>(plan.points);
}

inline void validate_sweep_plan(const SweepPlan& plan) {
  if (!(plan.points >= 1)) {
    throw Error(ErrorCode::Validation, "sweep needs at least one interval");
  }
  if (!(plan.omega_max > plan.omega_min)) {
    throw Error(ErrorCode::Validation,
                "sweep window must satisfy omega_max > omega_min");
  }
  if (plan.shots && plan.shots->count < 1) {
    throw Error(ErrorCode::Validation, "shot count must be >= 1");
  }
  if (plan.trotter && plan.trotter->steps > 0) {
    validate_trotter(*plan.trotter);
  }
}

/// Midpoint grid omega_k = omega_min + (k + 1/2) * spacing, k = 0..points-1.
inline std::vector<std::pair<int, double>> frequency_grid(
    const SweepPlan& plan) {
  validate_sweep_plan(plan);
  const double d = grid_spacing(plan);
  std::vector<std::pair<int, double>> grid;
  grid.reserve(static_cast<std::size_t>(plan.points));
  for (int k = 0; k < plan.points; ++k) {
    grid.emplace_back(k, plan.omega_min + (k + 0.5) * d);
  }
  return grid;
}

struct SpectrumPoint {
  int k = 0;
  double omega = 0.0;
  double probability = 0.0;
  std::int64_t flips = -1;  ///< -1 when the point was not sampled
  std::int64_t shots = -1;

  bool sampled() const { return shots > 0; }
};

/// Sweep output plus the metadata needed to interpret it on its own: the
/// plan, the probe parameters in force, and whether the grid was too coarse
/// to resolve minimum-width peaks (spacing above 1/tau).
struct Spectrum {
  SweepPlan plan;
  double c = 0.0;
  double tau = 0.0;
  std::vector<SpectrumPoint> points;
  bool resolution_flagged = false;
};

struct Peak {
  double center = 0.0;
  double height = 0.0;
  double fwhm = 0.0;
  int span_lo = 0;  ///< first grid index of the above-threshold run
  int span_hi = 0;  ///< last grid index (inclusive)
  std::string assignment;  ///< "i->j" once matched against a transition table
};

/// One allowed transition |phi_i> -> |phi_j>, i < j, delta_e = E_j - E_i.
/// `matrix_element` is |<phi_j| A |phi_i>| and `overlap` is the population
/// of the sweep's initial state on the entry eigenstate (phi_i when
/// absorbing, phi_j when emitting). `padded` marks transitions touching
/// embedding padding levels.
struct TransitionRecord {
  int i = 0;
  int j = 0;
  double delta_e = 0.0;
  double matrix_element = 0.0;
  double overlap = 0.0;
  bool padded = false;
};

struct TransitionTable {
  std::vector<TransitionRecord> records;  ///< sorted by delta_e
};

/// Peak detection policy. The effective threshold is
///   max(absolute_floor, relative_fraction * max probability).
/// Candidate maxima closer than suppression_radius to a taller one are
/// treated as structure of the taller peak (Rabi sidelobes); radius 0 derives
/// max(16/tau, 2.5 * grid spacing) from the spectrum itself.
struct ThresholdPolicy {
  double absolute_floor = 1e-4;
  double relative_fraction = 0.05;
  double suppression_radius = 0.0;
};

inline double effective_threshold(const ThresholdPolicy& policy,
                                  double max_probability) {
  return std::max(policy.absolute_floor,
                  policy.relative_fraction * max_probability);
}

}  // namespace probespec
