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
#include <cmath>
#include <cstdint>
#include <string_view>

#include "probespec/evolve.hpp"
#include "probespec/model.hpp"
#include "probespec/rng.hpp"

namespace probespec {

/// Minimal fixture: one qubit with H = 0.5 I - 0.3 X - 0.4 Z. The level
/// splitting is exactly 1 (eigenvalues 0 and 1), but the eigenbasis is
/// rotated away from the computational basis, so the X coupling carries both
/// a transition element (0.8) and a diagonal part (0.6) in the eigenbasis.
/// That keeps the probe response realistic: the two-level Rabi prediction is
/// an approximation here, not an identity. Prepared in the exact ground
/// state (sqrt 0.9, sqrt 0.1).
inline Model two_level_model() {
  Model m;
  m.system = system_from_pauli(make_pauli_sum({make_pauli(0.5, "I"),
                                               make_pauli(-0.3, "X"),
                                               make_pauli(-0.4, "Z")}));
  m.coupling = preset_coupling("uniform_x", 1);
  m.probe.c = 0.005;
  m.probe.tau = 500.0;
  m.initial = Eigen::Vector2cd(std::sqrt(0.9), std::sqrt(0.1));
  m.name = "twolevel";
  return m;
}

/// An 18-level Hermitian block standing in for a small configuration-
/// interaction Hamiltonian: a fixed diagonal ladder (ground level 0.60 on
/// basis |00010>, single-flip neighbors spread across [1.05, 2.45], the rest
/// pushed above 2.6) plus a weak seeded symmetric mixing. Every level gap
/// stays above 0.1, so eigenstates keep a dominant basis label.
inline Eigen::MatrixXcd water_analog_block(std::uint64_t seed = 20260814ull) {
  constexpr int d = 18;
  constexpr double diag[d] = {1.35, 1.90, 0.60, 1.05, 2.45, 2.65,
                              1.72, 2.82, 2.99, 3.16, 2.12, 3.33,
                              3.50, 3.67, 3.84, 4.01, 4.18, 4.35};
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) h(i, i) = diag[i];
  SplitMix64 g(seed);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const double w = 0.015 * g.gaussian();
      h(i, j) = w;
      h(j, i) = w;
    }
  }
  return h;
}

/// The block above embedded into 5 qubits with padding at zero energy, so
/// the all-ones state |11111> sits outside the block as an exact zero-energy
/// eigenstate. Defaults reproduce the standard absorption scan; pass
/// coupling "eq7", initial "11111", c = 0.002, tau = 800 for the
/// hidden-start scenario.
inline Model water_analog_model(std::string_view coupling = "eq5",
                                std::string_view initial = "00010",
                                double c = 0.005, double tau = 500.0) {
  Model m;
  m.system = embed_dense(water_analog_block(), 5, 0.0);
  m.coupling = preset_coupling(coupling, 5);
  m.probe.c = c;
  m.probe.tau = tau;
  m.initial = Statevector::from_bitstring(initial).amplitudes;
  m.name = "water_analog";
  return m;
}

}  // namespace probespec
