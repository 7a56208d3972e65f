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

#include "probespec/evolve.hpp"

#include <cmath>
#include <random>

#include "catch_support.hpp"
#include "test_helpers.hpp"

using namespace probespec;
using testutil::expect_error;

namespace {

constexpr double kPi = 3.14159265358979323846;

TotalHamiltonian random_total(std::mt19937_64& rng, int n, double omega,
                              double c) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<PauliString> terms;
  for (int t = 0; t < n + 1; ++t) {
    terms.push_back(make_pauli(gauss(rng), testutil::random_letters(n, rng)));
  }
  ProbeConfig probe;
  probe.omega = omega;
  probe.c = c;
  probe.tau = 1.0;
  return assemble_total(
      system_from_pauli(make_pauli_sum(terms)), probe,
      make_coupling(make_pauli_sum(
          {make_pauli(1.0, testutil::random_letters(n, rng))})));
}

Statevector random_joint_state(int joint_width, std::mt19937_64& rng) {
  Statevector psi;
  psi.width = joint_width;
  psi.amplitudes = testutil::random_state(1 << joint_width, rng);
  return psi;
}

}  // namespace

TEST_CASE("bitstring states put the leftmost character on the top qubit") {
  const Statevector psi = Statevector::from_bitstring("00010");
  CHECK(psi.width == 5);
  REQUIRE(psi.amplitudes.size() == 32);
  CHECK(psi.amplitudes(2) == Complex(1.0, 0.0));
  CHECK(psi.norm() == 1.0);

  CHECK(Statevector::from_bitstring("10").amplitudes(2) == Complex(1.0, 0.0));
  expect_error(ErrorCode::Parse, [] { Statevector::from_bitstring("0a1"); });
  expect_error(ErrorCode::Parse, [] { Statevector::from_bitstring(""); });
  expect_error(ErrorCode::Structure, [] { Statevector::basis_state(2, 4); });
}

TEST_CASE("probe attaches as the least significant bit") {
  Statevector sys;
  sys.width = 2;
  std::mt19937_64 rng(5001);
  sys.amplitudes = testutil::random_state(4, rng);

  const Statevector excited = tensor_with_probe(sys, ProbeState::Excited);
  REQUIRE(excited.amplitudes.size() == 8);
  for (std::int64_t s = 0; s < 4; ++s) {
    CHECK(excited.amplitudes(2 * s + 1) == sys.amplitudes(s));
    CHECK(excited.amplitudes(2 * s + 0) == Complex(0.0, 0.0));
  }

  // Same layout as an explicit Kronecker product with the probe rightmost.
  Eigen::VectorXcd probe_vec(2);
  probe_vec << 0.0, 1.0;
  Eigen::VectorXcd expected(8);
  for (std::int64_t s = 0; s < 4; ++s) {
    for (int p = 0; p < 2; ++p) {
      expected(2 * s + p) = sys.amplitudes(s) * probe_vec(p);
    }
  }
  CHECK((excited.amplitudes - expected).norm() == 0.0);
}

TEST_CASE("exact propagation at tau=0 is the identity") {
  std::mt19937_64 rng(5002);
  const TotalHamiltonian h = random_total(rng, 2, 0.9, 0.02);
  const Statevector psi = random_joint_state(3, rng);
  const Statevector out = exact_propagate(h, 0.0, psi);
  CHECK((out.amplitudes - psi.amplitudes).norm() < 1e-14);
}

TEST_CASE("exact propagation matches an independent eigensolve") {
  std::mt19937_64 rng(5003);
  for (int trial = 0; trial < 10; ++trial) {
    const TotalHamiltonian h = random_total(rng, 2, 1.3, 0.05);
    const Statevector psi = random_joint_state(3, rng);
    const double tau = 0.3 + 2.0 * std::uniform_real_distribution<>()(rng);
    const Statevector out = exact_propagate(h, tau, psi);
    const Eigen::VectorXcd expected =
        testutil::evolve_dense(h.to_matrix(), tau, psi.amplitudes);
    CHECK((out.amplitudes - expected).norm() < 1e-11);
    CHECK(std::abs(out.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("eigenstates only pick up a phase") {
  // H_sys = Z/2 with c = 0: the joint eigenstates are products.
  ProbeConfig probe;
  probe.omega = 0.8;
  probe.c = 0.0;
  probe.tau = 1.0;
  const TotalHamiltonian h = assemble_total(
      system_from_pauli(make_pauli_sum({make_pauli(0.5, "Z")})), probe,
      make_coupling(make_pauli_sum({make_pauli(1.0, "X")})));

  // |1>|e>: system energy -1/2, probe +omega/2.
  Statevector sys = Statevector::from_bitstring("1");
  const Statevector joint = tensor_with_probe(sys, ProbeState::Excited);
  const double tau = 3.7;
  const Statevector out = exact_propagate(h, tau, joint);
  const Complex expected_phase =
      std::exp(Complex(0.0, -tau * (-0.5 + 0.5 * probe.omega)));
  CHECK(std::abs(out.amplitudes(3) - expected_phase) < 1e-12);
}

TEST_CASE("a resonant pi pulse flips the probe") {
  // Two levels split by 1, probe on resonance, tau = pi / (2 c M) with M = 1.
  ProbeConfig probe;
  probe.omega = 1.0;
  probe.c = 0.005;
  probe.tau = kPi / (2.0 * probe.c);
  const TotalHamiltonian h = assemble_total(
      system_from_pauli(make_pauli_sum({make_pauli(0.5, "Z")})), probe,
      make_coupling(make_pauli_sum({make_pauli(1.0, "X")})));
  const Statevector joint = tensor_with_probe(
      Statevector::from_bitstring("1"), ProbeState::Excited);
  const Statevector out = exact_propagate(h, probe.tau, joint);
  // Counter-rotating corrections are O((c/omega)^2).
  CHECK(probe_probability(out, 0) > 0.999);
  CHECK(probe_probability(out, 0) <= 1.0 + 1e-12);
}

TEST_CASE("pauli exponentials reproduce the closed form") {
  std::mt19937_64 rng(5004);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const std::string letters = testutil::random_letters(n, rng);
    const double theta = 4.0 * std::uniform_real_distribution<>()(rng) - 2.0;
    Statevector psi;
    psi.width = n;
    psi.amplitudes = testutil::random_state(1 << n, rng);

    const Statevector out =
        apply_pauli_exponential(psi, make_pauli(1.0, letters), theta);

    const Eigen::MatrixXcd p = testutil::dense_from_letters(letters);
    const Eigen::MatrixXcd u =
        std::cos(theta) * Eigen::MatrixXcd::Identity(p.rows(), p.cols()) -
        Complex(0.0, std::sin(theta)) * p;
    const Eigen::VectorXcd expected = u * psi.amplitudes;
    INFO("letters " << letters << " theta " << theta);
    CHECK((out.amplitudes - expected).norm() < 1e-13);
    CHECK(std::abs(out.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("pauli exponential edge cases") {
  const Statevector zero = Statevector::from_bitstring("0");
  const Statevector id =
      apply_pauli_exponential(zero, make_pauli(1.0, "X"), 0.0);
  CHECK((id.amplitudes - zero.amplitudes).norm() == 0.0);

  // exp(-i (pi/2) X)|0> = -i|1>
  const Statevector quarter =
      apply_pauli_exponential(zero, make_pauli(1.0, "X"), kPi / 2.0);
  CHECK(std::abs(quarter.amplitudes(0)) < 1e-15);
  CHECK(std::abs(quarter.amplitudes(1) - Complex(0.0, -1.0)) < 1e-15);

  // exp(-i pi P) = -I for any Pauli string.
  std::mt19937_64 rng(5005);
  Statevector psi;
  psi.width = 2;
  psi.amplitudes = testutil::random_state(4, rng);
  const Statevector flipped =
      apply_pauli_exponential(psi, make_pauli(1.0, "YZ"), kPi);
  CHECK((flipped.amplitudes + psi.amplitudes).norm() < 1e-12);

  expect_error(ErrorCode::Validation, [&] {
    apply_pauli_exponential(psi, make_pauli(0.5, "XX"), 1.0);
  });
  Statevector bad = psi;
  bad.amplitudes *= 2.0;
  expect_error(ErrorCode::Validation, [&] {
    apply_pauli_exponential(bad, make_pauli(1.0, "XX"), 1.0);
  });
  expect_error(ErrorCode::Structure, [&] {
    apply_pauli_exponential(psi, make_pauli(1.0, "XXX"), 1.0);
  });
}

TEST_CASE("trotter is exact when every factor commutes") {
  // System Z-strings on one qubit, coupling X on the other, omega = 0.
  ProbeConfig probe;
  probe.omega = 0.0;
  probe.c = 0.3;
  probe.tau = 1.0;
  const TotalHamiltonian h = assemble_total(
      system_from_pauli(make_pauli_sum({make_pauli(0.7, "ZI")})), probe,
      make_coupling(make_pauli_sum({make_pauli(1.0, "IX")})));
  std::mt19937_64 rng(5006);
  const Statevector psi = random_joint_state(3, rng);
  const double tau = 2.1;
  const Statevector exact = exact_propagate(h, tau, psi);
  for (int order : {1, 2}) {
    const Statevector split =
        trotter_propagate(h, tau, TrotterPlan{order, 1}, psi);
    INFO("order " << order);
    CHECK((split.amplitudes - exact.amplitudes).norm() < 1e-12);
  }
}

TEST_CASE("trotter error scales with the advertised order") {
  std::mt19937_64 rng(5007);
  const TotalHamiltonian h = random_total(rng, 2, 1.1, 0.4);
  const Statevector psi = random_joint_state(3, rng);
  const double tau = 2.0;
  const Statevector exact = exact_propagate(h, tau, psi);

  const auto error_at = [&](int order, std::int64_t steps) {
    const Statevector out =
        trotter_propagate(h, tau, TrotterPlan{order, steps}, psi);
    return (out.amplitudes - exact.amplitudes).norm();
  };

  // Halving the step size cuts the error ~2x at order 1, ~4x at order 2.
  const double e1a = error_at(1, 64);
  const double e1b = error_at(1, 128);
  CHECK(e1a / e1b == Catch::Approx(2.0).margin(0.35));

  const double e2a = error_at(2, 64);
  const double e2b = error_at(2, 128);
  CHECK(e2a / e2b == Catch::Approx(4.0).margin(0.8));

  // Norm is preserved exactly by every product of exponentials.
  const Statevector coarse = trotter_propagate(h, tau, TrotterPlan{2, 3}, psi);
  CHECK(std::abs(coarse.norm() - 1.0) < 1e-12);
}

TEST_CASE("dense-form systems trotterize through the stored eigenbasis") {
  std::mt19937_64 rng(5008);
  const Eigen::MatrixXcd block = testutil::random_symmetric(3, 0.8, rng);
  const SystemHamiltonian hs = embed_dense(block, 2, 10.0);
  ProbeConfig probe;
  probe.omega = 1.2;
  probe.c = 0.3;
  probe.tau = 1.0;
  const TotalHamiltonian h =
      assemble_total(hs, probe, preset_coupling("uniform_x", 2));
  const Statevector psi = random_joint_state(3, rng);
  const double tau = 1.5;
  const Statevector exact = exact_propagate(h, tau, psi);

  // With the coupling switched off the single dense factor is exact.
  TotalHamiltonian free = h;
  free.probe.c = 0.0;
  const Statevector free_split =
      trotter_propagate(free, tau, TrotterPlan{1, 1}, psi);
  const Statevector free_exact = exact_propagate(free, tau, psi);
  CHECK((free_split.amplitudes - free_exact.amplitudes).norm() < 1e-11);

  const double e_coarse =
      (trotter_propagate(h, tau, TrotterPlan{2, 32}, psi).amplitudes -
       exact.amplitudes).norm();
  const double e_fine =
      (trotter_propagate(h, tau, TrotterPlan{2, 64}, psi).amplitudes -
       exact.amplitudes).norm();
  CHECK(e_coarse / e_fine == Catch::Approx(4.0).margin(0.8));
}

TEST_CASE("default step policy keeps the per-step angle small") {
  std::mt19937_64 rng(5009);
  const TotalHamiltonian h = random_total(rng, 2, 1.0, 0.1);
  const double tau = 7.0;
  const std::int64_t steps = default_trotter_steps(h, tau);
  CHECK(h.norm_bound() * tau / static_cast<double>(steps) <= 0.1 + 1e-12);
  CHECK(default_trotter_steps(h, 0.0) == 1);

  expect_error(ErrorCode::Validation,
               [] { validate_trotter(TrotterPlan{3, 10}); });
  expect_error(ErrorCode::Validation,
               [] { validate_trotter(TrotterPlan{2, 0}); });
}

TEST_CASE("probe readout probabilities and reduced density matrix agree") {
  std::mt19937_64 rng(5010);
  const Statevector psi = random_joint_state(3, rng);
  const double p0 = probe_probability(psi, 0);
  const double p1 = probe_probability(psi, 1);
  CHECK(p0 >= 0.0);
  CHECK(p1 >= 0.0);
  CHECK(p0 + p1 == Catch::Approx(1.0).epsilon(1e-12));

  const ProbeDensity rho = partial_trace_probe(psi);
  CHECK(std::abs(rho.rho(0, 0).real() - p0) < 1e-12);
  CHECK(std::abs(rho.rho(1, 1).real() - p1) < 1e-12);
  CHECK(std::abs(rho.rho.trace().real() - 1.0) < 1e-12);
  CHECK(std::abs(rho.rho(0, 1) - std::conj(rho.rho(1, 0))) < 1e-14);

  expect_error(ErrorCode::Validation, [&] { probe_probability(psi, 2); });
}

TEST_CASE("projection keeps only the measured branch") {
  std::mt19937_64 rng(5011);
  const Statevector psi = random_joint_state(3, rng);
  const Statevector proj = project_probe(psi, 1);
  CHECK(std::abs(proj.norm() - 1.0) < 1e-12);
  CHECK(probe_probability(proj, 0) < 1e-24);

  const Statevector sys = collapse_system(psi, 1);
  CHECK(sys.width == 2);
  REQUIRE(sys.amplitudes.size() == 4);
  CHECK(std::abs(sys.amplitudes.norm() - 1.0) < 1e-12);
  for (std::int64_t s = 0; s < 4; ++s) {
    CHECK(std::abs(sys.amplitudes(s) - proj.amplitudes(2 * s + 1)) < 1e-15);
  }

  // Projecting onto a branch with no amplitude is refused.
  const Statevector pure = tensor_with_probe(
      Statevector::from_bitstring("00"), ProbeState::Excited);
  expect_error(ErrorCode::Projection, [&] { project_probe(pure, 0); });
}
