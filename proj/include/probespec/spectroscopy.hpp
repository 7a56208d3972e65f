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

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "probespec/errors.hpp"
#include "probespec/evolve.hpp"
#include "probespec/model.hpp"
#include "probespec/oracle.hpp"
#include "probespec/rng.hpp"
#include "probespec/types.hpp"

namespace probespec {

// ---------------------------------------------------------------------------
// Analytic line shape

/// Two-level Rabi probability for one transition at drive frequency omega:
///   P = sin^2(Omega tau / 2) * Q^2 / (Q^2 + Delta^2) * overlap
/// with Q = 2 c M, Delta = delta_e - omega, Omega = sqrt(Q^2 + Delta^2).
/// This is the exact evolution of the resonant two-state block, so it also
/// serves as the oracle for the full propagators on isolated transitions.
inline double rabi_predict(const TransitionRecord& rec, double c, double tau,
                           double omega) {
  const double q = 2.0 * c * rec.matrix_element;
  if (q == 0.0) return 0.0;
  const double delta = rec.delta_e - omega;
  const double big_omega = std::hypot(q, delta);
  const double s = std::sin(0.5 * big_omega * tau);
  return s * s * (q * q) / (q * q + delta * delta) * rec.overlap;
}

/// Leading-order estimate on resonance: (c tau M)^2 * overlap. Valid while
/// the pulse area stays small; check weak_coupling_in_regime before trusting
/// it.
inline double weak_coupling_estimate(const TransitionRecord& rec, double c,
                                     double tau) {
  const double amplitude = c * tau * rec.matrix_element;
  return amplitude * amplitude * rec.overlap;
}

inline bool weak_coupling_in_regime(const TransitionRecord& rec, double c,
                                    double tau) {
  return 2.0 * c * rec.matrix_element * tau <= 0.5;
}

/// Narrowest line a sweep can resolve for this transition: the power
/// broadening c M or the Fourier limit 1/tau, whichever dominates.
inline double peak_width_floor(const TransitionRecord& rec, double c,
                               double tau) {
  return std::max(c * rec.matrix_element, 1.0 / tau);
}

/// Repetitions needed to observe at least one probe flip with the given
/// confidence when the per-shot probability is p.
inline std::int64_t required_shots(double p, double confidence) {
  if (!(p > 0.0) || !(p <= 1.0)) {
    throw Error(ErrorCode::Validation,
                "per-shot probability must lie in (0, 1]");
  }
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw Error(ErrorCode::Validation, "confidence must lie in (0, 1)");
  }
  if (p == 1.0) return 1;
  const double n = std::log1p(-confidence) / std::log1p(-p);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(n)));
}

// ---------------------------------------------------------------------------
// Sweep execution

/// Simulates one grid point: prepare psi_s with the probe attached, evolve
/// for tau at drive frequency omega, and read out the probe flip
/// probability. With a shot plan the probability is replaced by the sampled
/// flip fraction from substream (seed, k).
inline SpectrumPoint run_point(const SystemHamiltonian& system,
                               const CouplingOperator& coupling,
                               const ProbeConfig& probe_base, int k,
                               double omega, const Eigen::VectorXcd& psi_s,
                               const SweepPlan& plan) {
  ProbeConfig probe = probe_base;
  probe.omega = omega;
  probe.init = plan.mode == SweepMode::Absorption ? ProbeState::Excited
                                                  : ProbeState::Ground;
  const TotalHamiltonian h = assemble_total(system, probe, coupling);
  Statevector sys_state;
  sys_state.width = system.width;
  sys_state.amplitudes = psi_s;
  const Statevector psi0 = tensor_with_probe(sys_state, probe.init);
  Statevector psi1;
  if (plan.method == Method::Exact) {
    psi1 = exact_propagate(h, probe.tau, psi0);
  } else {
    TrotterPlan tp = plan.trotter.value_or(TrotterPlan{});
    if (tp.steps < 1) tp.steps = default_trotter_steps(h, probe.tau);
    psi1 = trotter_propagate(h, probe.tau, tp, psi0);
  }
  const int outcome = plan.mode == SweepMode::Absorption ? 0 : 1;
  SpectrumPoint point;
  point.k = k;
  point.omega = omega;
  point.probability = probe_probability(psi1, outcome);
  if (plan.shots) {
    SplitMix64 g(substream(plan.shots->seed, static_cast<std::uint64_t>(k)));
    point.flips = sample_binomial(g, plan.shots->count, point.probability);
    point.shots = plan.shots->count;
    point.probability = static_cast<double>(point.flips) /
                        static_cast<double>(point.shots);
  }
  return point;
}

/// Full frequency sweep. Points are independent, so they are distributed
/// over a small thread pool; shot noise comes from per-point substreams and
/// the result is bit-identical no matter how work is scheduled. threads = 0
/// picks the hardware concurrency.
inline Spectrum run_sweep(const Model& model, const SweepPlan& plan,
                          int threads = 0) {
  validate_model(model);
  const auto grid = frequency_grid(plan);
  Spectrum spectrum;
  spectrum.plan = plan;
  spectrum.c = model.probe.c;
  spectrum.tau = model.probe.tau;
  spectrum.resolution_flagged =
      grid_spacing(plan) > 1.0 / model.probe.tau;
  spectrum.points.resize(grid.size());

  std::atomic<std::size_t> cursor{0};
  std::mutex failure_mutex;
  std::vector<std::pair<int, std::string>> failures;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= grid.size()) return;
      const auto [k, omega] = grid[i];
      try {
        spectrum.points[i] = run_point(model.system, model.coupling,
                                       model.probe, k, omega, model.initial,
                                       plan);
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        failures.emplace_back(k, e.what());
      }
    }
  };

  int pool = threads > 0 ? threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  pool = std::max(1, std::min<int>(pool, static_cast<int>(grid.size())));
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(pool));
    for (int t = 0; t < pool; ++t) workers.emplace_back(worker);
    for (auto& w : workers) w.join();
  }
  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end());
    std::string message = "sweep point k=" + std::to_string(failures[0].first) +
                          ": " + failures[0].second;
    if (failures.size() > 1) {
      message += " (+" + std::to_string(failures.size() - 1) +
                 " more failed points)";
    }
    throw Error(ErrorCode::Propagation, message);
  }
  return spectrum;
}

/// Analytic spectrum: rabi_predict summed over the in-window transition
/// table on the same grid a sweep would use.
inline Spectrum predict_spectrum(const Model& model, const SweepPlan& plan) {
  validate_model(model);
  const EigenSystem eig = eigendecompose(model.system);
  const TransitionTable table =
      transition_table(eig, model.coupling, model.initial, plan.omega_min,
                       plan.omega_max, plan.mode);
  Spectrum spectrum;
  spectrum.plan = plan;
  spectrum.c = model.probe.c;
  spectrum.tau = model.probe.tau;
  spectrum.resolution_flagged = grid_spacing(plan) > 1.0 / model.probe.tau;
  for (const auto& [k, omega] : frequency_grid(plan)) {
    SpectrumPoint point;
    point.k = k;
    point.omega = omega;
    for (const auto& rec : table.records) {
      point.probability +=
          rabi_predict(rec, model.probe.c, model.probe.tau, omega);
    }
    spectrum.points.push_back(point);
  }
  return spectrum;
}

// ---------------------------------------------------------------------------
// Peak detection

namespace detail {

struct CandidateMax {
  int index;
  double height;
};

}  // namespace detail

/// Finds peaks: local maxima strictly above the effective threshold, with
/// maxima inside the suppression radius of a taller one folded into that
/// peak (this merges the sidelobe runs a strongly driven line produces).
/// FWHM comes from linear interpolation at half height; on a grid too coarse
/// to bracket the crossing it degrades to the grid spacing.
inline std::vector<Peak> detect_peaks(const Spectrum& spectrum,
                                      const ThresholdPolicy& policy = {}) {
  const auto& pts = spectrum.points;
  if (pts.empty()) {
    throw Error(ErrorCode::Validation, "cannot detect peaks in an empty spectrum");
  }
  validate_sweep_plan(spectrum.plan);
  if (pts.size() != static_cast<std::size_t>(spectrum.plan.points)) {
    throw Error(ErrorCode::Structure,
                "spectrum holds " + std::to_string(pts.size()) +
                    " points but its plan promises " +
                    std::to_string(spectrum.plan.points));
  }
  const int n = static_cast<int>(pts.size());
  double max_p = 0.0;
  for (const auto& pt : pts) max_p = std::max(max_p, pt.probability);
  const double threshold = effective_threshold(policy, max_p);
  const double spacing = grid_spacing(spectrum.plan);
  double radius = policy.suppression_radius;
  if (radius <= 0.0) {
    radius = 2.5 * spacing;
    if (spectrum.tau > 0.0) radius = std::max(radius, 16.0 / spectrum.tau);
  }

  // Local maxima above threshold; plateaus count once at their left edge.
  std::vector<detail::CandidateMax> candidates;
  for (int k = 0; k < n; ++k) {
    const double p = pts[static_cast<std::size_t>(k)].probability;
    if (!(p > threshold)) continue;
    const bool rises = k == 0 || pts[static_cast<std::size_t>(k - 1)].probability < p;
    const bool falls =
        k == n - 1 || pts[static_cast<std::size_t>(k + 1)].probability <= p;
    if (rises && falls) candidates.push_back({k, p});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const detail::CandidateMax& a, const detail::CandidateMax& b) {
              if (a.height != b.height) return a.height > b.height;
              return a.index < b.index;
            });

  // Non-maximum suppression; remember which winner absorbed each candidate.
  std::vector<int> winners;
  std::vector<std::pair<int, int>> absorbed;  // (winner index, candidate k)
  for (const auto& cand : candidates) {
    const double omega = pts[static_cast<std::size_t>(cand.index)].omega;
    int winner = -1;
    for (int w : winners) {
      if (std::abs(pts[static_cast<std::size_t>(w)].omega - omega) <= radius) {
        winner = w;
        break;
      }
    }
    if (winner < 0) {
      winners.push_back(cand.index);
    } else {
      absorbed.emplace_back(winner, cand.index);
    }
  }
  std::sort(winners.begin(), winners.end());

  const auto run_around = [&](int k) {
    int lo = k;
    int hi = k;
    while (lo > 0 &&
           pts[static_cast<std::size_t>(lo - 1)].probability > threshold) {
      --lo;
    }
    while (hi < n - 1 &&
           pts[static_cast<std::size_t>(hi + 1)].probability > threshold) {
      ++hi;
    }
    return std::pair<int, int>{lo, hi};
  };

  std::vector<Peak> peaks;
  for (int k : winners) {
    const double height = pts[static_cast<std::size_t>(k)].probability;
    const double half = 0.5 * height;
    Peak peak;
    peak.center = pts[static_cast<std::size_t>(k)].omega;
    peak.height = height;
    auto [lo, hi] = run_around(k);
    for (const auto& [winner, cand] : absorbed) {
      if (winner != k) continue;
      const auto [clo, chi] = run_around(cand);
      lo = std::min(lo, clo);
      hi = std::max(hi, chi);
    }
    peak.span_lo = lo;
    peak.span_hi = hi;

    double left = pts.front().omega;
    bool left_found = false;
    for (int i = k; i > 0; --i) {
      const double pa = pts[static_cast<std::size_t>(i - 1)].probability;
      const double pb = pts[static_cast<std::size_t>(i)].probability;
      if (pa <= half && pb > half) {
        const double wa = pts[static_cast<std::size_t>(i - 1)].omega;
        const double wb = pts[static_cast<std::size_t>(i)].omega;
        left = wb - (wb - wa) * (pb - half) / (pb - pa);
        left_found = true;
        break;
      }
    }
    double right = pts.back().omega;
    bool right_found = false;
    for (int i = k; i < n - 1; ++i) {
      const double pa = pts[static_cast<std::size_t>(i)].probability;
      const double pb = pts[static_cast<std::size_t>(i + 1)].probability;
      if (pa > half && pb <= half) {
        const double wa = pts[static_cast<std::size_t>(i)].omega;
        const double wb = pts[static_cast<std::size_t>(i + 1)].omega;
        right = wa + (wb - wa) * (pa - half) / (pa - pb);
        right_found = true;
        break;
      }
    }
    peak.fwhm = right - left;
    if (!(peak.fwhm > 0.0) || (!left_found && !right_found && n == 1)) {
      peak.fwhm = spacing;
    }
    peaks.push_back(std::move(peak));
  }
  return peaks;
}

// ---------------------------------------------------------------------------
// Eigenstate preparation

struct ChainOptions {
  double min_step_probability = 1e-3;
};

struct ChainStep {
  int i = 0;
  int j = 0;
  double omega = 0.0;
  double tau = 0.0;
  SweepMode mode = SweepMode::Absorption;
  double success_probability = 0.0;
};

struct ChainResult {
  std::vector<ChainStep> steps;
  Eigen::VectorXcd final_state;  ///< system register
  int target = -1;               ///< eigenstate index the chain aims at
  double fidelity = 0.0;         ///< |<phi_target | final>|^2
};

/// Walks the system through a list of eigenstate transitions (i, j): each
/// step drives the probe at |E_j - E_i| for a pi pulse against the effective
/// matrix element of the current state, measures the probe, and keeps the
/// flipped branch. A step whose flip probability lands below the option
/// threshold aborts with its index, since continuing would need impractical
/// repetition counts. An empty path reports the initial state against its
/// best-overlap eigenstate.
inline ChainResult prepare_eigenstate_chain(
    const Model& model, const std::vector<std::pair<int, int>>& path,
    const ChainOptions& options = {}) {
  validate_model(model);
  if (!path.empty() && model.probe.c <= 0.0) {
    throw Error(ErrorCode::Validation,
                "eigenstate preparation needs a positive coupling strength");
  }
  const EigenSystem eig = eigendecompose(model.system);
  const Eigen::MatrixXcd a = to_dense(model.coupling.op);
  ChainResult result;
  Eigen::VectorXcd psi = model.initial;
  int step_index = 0;
  for (const auto& [i, j] : path) {
    ++step_index;
    const auto step_name = "chain step " + std::to_string(step_index) + " (" +
                           std::to_string(i) + "->" + std::to_string(j) + ")";
    if (i < 0 || j < 0 || i >= eig.dimension() || j >= eig.dimension() ||
        i == j) {
      throw Error(ErrorCode::Validation,
                  step_name + ": invalid eigenstate pair");
    }
    const double delta = eig.energies(j) - eig.energies(i);
    const SweepMode mode =
        delta >= 0.0 ? SweepMode::Absorption : SweepMode::Emission;
    const double m_eff = std::abs(eig.vectors.col(j).dot(a * psi));
    if (m_eff < 1e-10) {
      throw Error(ErrorCode::ChainStep,
                  step_name + ": coupling matrix element vanishes");
    }
    ProbeConfig probe = model.probe;
    probe.omega = std::abs(delta);
    const double q = 2.0 * probe.c * m_eff;
    constexpr double pi = 3.14159265358979323846;
    probe.tau = pi / q;
    probe.init = mode == SweepMode::Absorption ? ProbeState::Excited
                                               : ProbeState::Ground;
    const int flip_outcome = 1 - static_cast<int>(probe.init);
    const TotalHamiltonian h =
        assemble_total(model.system, probe, model.coupling);
    Statevector sys_state;
    sys_state.width = model.system.width;
    sys_state.amplitudes = psi;
    const Statevector evolved =
        exact_propagate(h, probe.tau, tensor_with_probe(sys_state, probe.init));
    const double p_flip = probe_probability(evolved, flip_outcome);
    if (p_flip < options.min_step_probability) {
      throw Error(ErrorCode::ChainStep,
                  step_name + ": flip probability " + std::to_string(p_flip) +
                      " below threshold " +
                      std::to_string(options.min_step_probability));
    }
    psi = collapse_system(evolved, flip_outcome).amplitudes;
    ChainStep step;
    step.i = i;
    step.j = j;
    step.omega = probe.omega;
    step.tau = probe.tau;
    step.mode = mode;
    step.success_probability = p_flip;
    result.steps.push_back(step);
  }
  result.final_state = psi;
  if (!path.empty()) {
    result.target = path.back().second;
  } else {
    const Eigen::VectorXd overlaps = (eig.vectors.adjoint() * psi).cwiseAbs2();
    Eigen::Index best = 0;
    overlaps.maxCoeff(&best);
    result.target = static_cast<int>(best);
  }
  result.fidelity =
      std::norm(eig.vectors.col(result.target).dot(psi));
  return result;
}

}  // namespace probespec
