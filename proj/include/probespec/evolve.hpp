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
#include <string>
#include <string_view>
#include <vector>

#include "probespec/errors.hpp"
#include "probespec/model.hpp"
#include "probespec/pauli.hpp"

namespace probespec {

// ---------------------------------------------------------------------------
// Statevector

struct Statevector {
  int width = 0;
  Eigen::VectorXcd amplitudes;

  std::int64_t dimension() const { return std::int64_t{1} << width; }

  static Statevector basis_state(int width, std::uint64_t index) {
    detail::check_dense_width(width);
    Statevector out;
    out.width = width;
    out.amplitudes = Eigen::VectorXcd::Zero(std::int64_t{1} << width);
    if (index >= static_cast<std::uint64_t>(out.amplitudes.size())) {
      throw Error(ErrorCode::Structure,
                  "basis index " + std::to_string(index) +
                      " out of range for " + std::to_string(width) +
                      " qubits");
    }
    out.amplitudes(static_cast<std::int64_t>(index)) = 1.0;
    return out;
  }

  /// "00010" -> |00010>, leftmost character is the highest-index qubit.
  static Statevector from_bitstring(std::string_view bits) {
    if (bits.empty()) {
      throw Error(ErrorCode::Parse, "empty bitstring");
    }
    std::uint64_t index = 0;
    for (char c : bits) {
      if (c != '0' && c != '1') {
        throw Error(ErrorCode::Parse,
                    std::string("illegal bit '") + c + "' in bitstring");
      }
      index = (index << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return basis_state(static_cast<int>(bits.size()), index);
  }

  double norm() const { return amplitudes.norm(); }
  bool is_normalized(double tol = 1e-10) const {
    return std::abs(norm() - 1.0) <= tol;
  }
};

namespace detail {

inline void require_state(const Statevector& psi, int expected_width,
                          const char* where) {
  if (psi.width != expected_width) {
    throw Error(ErrorCode::Structure,
                std::string(where) + ": state width " +
                    std::to_string(psi.width) + " does not match " +
                    std::to_string(expected_width));
  }
  if (psi.amplitudes.size() != psi.dimension()) {
    throw Error(ErrorCode::Structure,
                std::string(where) + ": amplitude count mismatch");
  }
  if (!psi.amplitudes.allFinite()) {
    throw Error(ErrorCode::Propagation,
                std::string(where) + ": non-finite amplitudes");
  }
  if (!psi.is_normalized()) {
    throw Error(ErrorCode::Validation,
                std::string(where) + ": state is not normalized");
  }
}

}  // namespace detail

/// Appends the probe as qubit 0: joint index 2*s + p.
inline Statevector tensor_with_probe(const Statevector& system,
                                     ProbeState init) {
  detail::require_state(system, system.width, "tensor_with_probe");
  detail::check_dense_width(system.width + 1);
  Statevector out;
  out.width = system.width + 1;
  out.amplitudes = Eigen::VectorXcd::Zero(2 * system.dimension());
  const int p = static_cast<int>(init);
  for (std::int64_t s = 0; s < system.dimension(); ++s) {
    out.amplitudes(2 * s + p) = system.amplitudes(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact propagation

/// psi(tau) = V exp(-i L tau) V^dag psi for Hermitian h = V L V^dag.
inline Eigen::VectorXcd propagate_dense(const Eigen::MatrixXcd& h, double tau,
                                        const Eigen::VectorXcd& psi) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Propagation,
                "eigendecomposition failed to converge");
  }
  const Eigen::VectorXcd phases =
      (Complex(0.0, -tau) * solver.eigenvalues().array()).exp().matrix();
  return solver.eigenvectors() *
         (phases.asDiagonal() * (solver.eigenvectors().adjoint() * psi));
}

/// Exact evolution of the joint register under the assembled Hamiltonian.
inline Statevector exact_propagate(const TotalHamiltonian& h, double tau,
                                   const Statevector& psi) {
  detail::check_dense_width(h.joint_width);
  detail::require_state(psi, h.joint_width, "exact_propagate");
  if (!std::isfinite(tau)) {
    throw Error(ErrorCode::Validation, "evolution time must be finite");
  }
  Statevector out;
  out.width = psi.width;
  out.amplitudes = propagate_dense(h.to_matrix(), tau, psi.amplitudes);
  return out;
}

// ---------------------------------------------------------------------------
// Pauli exponentials

/// Applies exp(-i theta P) for a single unit-coefficient Pauli string:
///   exp(-i theta P) = cos(theta) I - i sin(theta) P.
/// The string's weight must already be folded into theta; a stray
/// coefficient is rejected rather than silently ignored.
inline Statevector apply_pauli_exponential(const Statevector& psi,
                                           const PauliString& term,
                                           double theta) {
  detail::require_state(psi, term.width(), "apply_pauli_exponential");
  if (std::abs(term.coefficient - Complex{1.0, 0.0}) > 1e-12) {
    throw Error(ErrorCode::Validation,
                "term coefficient must be folded into theta");
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const std::uint64_t flip = term.flip_mask();
  Statevector out;
  out.width = psi.width;
  out.amplitudes.resize(psi.amplitudes.size());
  const std::int64_t dim = psi.dimension();
  if (flip == 0) {
    // Diagonal string: per-basis phase exp(-i theta * (+/-1)).
    for (std::int64_t b = 0; b < dim; ++b) {
      const double sign =
          term.phase_on_basis(static_cast<std::uint64_t>(b)).real();
      out.amplitudes(b) =
          psi.amplitudes(b) * Complex(c, -s * sign);
    }
  } else {
    for (std::int64_t b = 0; b < dim; ++b) {
      const auto basis = static_cast<std::uint64_t>(b);
      const auto partner = static_cast<std::int64_t>(basis ^ flip);
      if (partner < b) continue;
      const Complex ab = psi.amplitudes(b);
      const Complex ap = psi.amplitudes(partner);
      // (P psi)_b = phase(partner) * psi_partner and vice versa.
      out.amplitudes(b) =
          c * ab + Complex(0.0, -s) * term.phase_on_basis(basis ^ flip) * ap;
      out.amplitudes(partner) =
          c * ap + Complex(0.0, -s) * term.phase_on_basis(basis) * ab;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trotter propagation

struct TrotterPlan {
  int order = 2;
  std::int64_t steps = 0;  ///< 0 means "choose automatically"
};

inline void validate_trotter(const TrotterPlan& plan) {
  if (plan.order != 1 && plan.order != 2) {
    throw Error(ErrorCode::Validation,
                "unsupported Trotter order " + std::to_string(plan.order));
  }
  if (plan.steps < 1) {
    throw Error(ErrorCode::Validation, "Trotter step count must be >= 1");
  }
}

/// Step count keeping ||H|| * dt at or below dt_bound (default 0.1).
inline std::int64_t default_trotter_steps(const TotalHamiltonian& h,
                                          double tau,
                                          double dt_bound = 0.1) {
  const double bound = h.norm_bound();
  const double needed = bound * std::abs(tau) / dt_bound;
  if (!(needed > 0.0)) return 1;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(needed)));
}

namespace detail {

/// One non-commuting factor of the splitting: either exp(-i w dt P) for a
/// Pauli string, or the exactly expontiated system-plus-probe diagonal part
/// when the system only exists in dense form.
struct SplitTerm {
  bool dense = false;
  PauliString unit;     // unit coefficient
  double weight = 0.0;  // multiplies dt in the exponent
};

struct SplitProgram {
  std::vector<SplitTerm> terms;
  // Dense path: system eigenpairs plus the probe splitting, applied as
  // U_sys(x) (x) diag(exp(+i omega x / 2), exp(-i omega x / 2)).
  bool has_dense = false;
  Eigen::VectorXd sys_eigenvalues;
  Eigen::MatrixXcd sys_eigenvectors;
  double omega = 0.0;
};

inline SplitProgram build_split(const TotalHamiltonian& h) {
  SplitProgram prog;
  if (h.system.pauli_form) {
    const PauliSum joint = h.joint_pauli();
    for (const auto& t : joint.terms) {
      if (std::abs(t.coefficient.imag()) > 1e-12) {
        throw Error(ErrorCode::Validation,
                    "joint Hamiltonian has a complex canonical coefficient");
      }
      SplitTerm st;
      st.unit.letters = t.letters;
      st.weight = t.coefficient.real();
      prog.terms.push_back(std::move(st));
    }
  } else {
    prog.has_dense = true;
    prog.sys_eigenvalues = h.system.dense_form->eigenvalues;
    prog.sys_eigenvectors = h.system.dense_form->eigenvectors;
    prog.omega = h.probe.omega;
    SplitTerm dense_term;
    dense_term.dense = true;
    prog.terms.push_back(std::move(dense_term));
    for (const auto& t : h.coupling.op.terms) {
      if (std::abs(t.coefficient.imag()) > 1e-12) {
        throw Error(ErrorCode::Validation,
                    "coupling has a complex canonical coefficient");
      }
      SplitTerm st;
      st.unit.letters = t.letters;
      st.unit.letters.push_back(Pauli::X);
      st.weight = h.probe.c * t.coefficient.real();
      prog.terms.push_back(std::move(st));
    }
  }
  return prog;
}

/// Applies exp(-i (H_sys + (omega/2) sz_probe) x) using the stored system
/// eigenpairs. The two tensor factors commute, so the probe contributes a
/// pure per-sector phase.
inline void apply_dense_factor(const SplitProgram& prog, double x,
                               Eigen::VectorXcd& amps) {
  const Eigen::VectorXcd phases =
      (Complex(0.0, -x) * prog.sys_eigenvalues.array()).exp().matrix();
  const Eigen::MatrixXcd u =
      prog.sys_eigenvectors *
      (phases.asDiagonal() * prog.sys_eigenvectors.adjoint());
  const std::int64_t ds = prog.sys_eigenvalues.size();
  Eigen::Map<Eigen::MatrixXcd> mat(amps.data(), 2, ds);
  mat = (mat * u.transpose()).eval();
  const Complex ground = std::exp(Complex(0.0, +0.5 * prog.omega * x));
  const Complex excited = std::exp(Complex(0.0, -0.5 * prog.omega * x));
  mat.row(0) *= ground;
  mat.row(1) *= excited;
}

inline void apply_split_factor(const SplitProgram& prog, const SplitTerm& term,
                               double x, Statevector& psi) {
  if (term.dense) {
    apply_dense_factor(prog, x, psi.amplitudes);
  } else {
    psi = apply_pauli_exponential(psi, term.unit, term.weight * x);
  }
}

}  // namespace detail

/// Product-formula evolution. Order 1 applies each factor once per step in
/// canonical term order; order 2 is the symmetric splitting, forward then
/// backward at half steps. Dense-form systems keep H_sys and the probe
/// splitting as one exactly exponentiated factor and only split off the
/// coupling strings.
inline Statevector trotter_propagate(const TotalHamiltonian& h, double tau,
                                     const TrotterPlan& plan,
                                     const Statevector& psi) {
  validate_trotter(plan);
  detail::require_state(psi, h.joint_width, "trotter_propagate");
  if (!std::isfinite(tau)) {
    throw Error(ErrorCode::Validation, "evolution time must be finite");
  }
  const detail::SplitProgram prog = detail::build_split(h);
  const double dt = tau / static_cast<double>(plan.steps);
  Statevector state = psi;
  for (std::int64_t step = 0; step < plan.steps; ++step) {
    if (plan.order == 1) {
      for (const auto& term : prog.terms) {
        detail::apply_split_factor(prog, term, dt, state);
      }
    } else {
      for (const auto& term : prog.terms) {
        detail::apply_split_factor(prog, term, 0.5 * dt, state);
      }
      for (auto it = prog.terms.rbegin(); it != prog.terms.rend(); ++it) {
        detail::apply_split_factor(prog, *it, 0.5 * dt, state);
      }
    }
  }
  if (!state.amplitudes.allFinite()) {
    throw Error(ErrorCode::Propagation,
                "trotter_propagate: non-finite amplitudes");
  }
  return state;
}

// ---------------------------------------------------------------------------
// Probe measurement

/// Probability of finding the probe in `outcome` (0 or 1), tracing out the
/// system register.
inline double probe_probability(const Statevector& psi, int outcome) {
  if (outcome != 0 && outcome != 1) {
    throw Error(ErrorCode::Validation, "probe outcome must be 0 or 1");
  }
  detail::require_state(psi, psi.width, "probe_probability");
  if (psi.width < 1) {
    throw Error(ErrorCode::Structure, "state has no probe qubit");
  }
  double p = 0.0;
  const std::int64_t ds = psi.dimension() / 2;
  for (std::int64_t s = 0; s < ds; ++s) {
    p += std::norm(psi.amplitudes(2 * s + outcome));
  }
  return p;
}

/// Reduced 2x2 probe density matrix.
struct ProbeDensity {
  Eigen::Matrix2cd rho;
};

inline ProbeDensity partial_trace_probe(const Statevector& psi) {
  detail::require_state(psi, psi.width, "partial_trace_probe");
  if (psi.width < 1) {
    throw Error(ErrorCode::Structure, "state has no probe qubit");
  }
  ProbeDensity out;
  out.rho.setZero();
  const std::int64_t ds = psi.dimension() / 2;
  for (std::int64_t s = 0; s < ds; ++s) {
    for (int p = 0; p < 2; ++p) {
      for (int q = 0; q < 2; ++q) {
        out.rho(p, q) +=
            psi.amplitudes(2 * s + p) * std::conj(psi.amplitudes(2 * s + q));
      }
    }
  }
  return out;
}

/// Collapses the probe onto `outcome` and renormalizes, keeping the joint
/// register width. Outcomes with probability at or below 1e-12 are refused.
inline Statevector project_probe(const Statevector& psi, int outcome) {
  const double p = probe_probability(psi, outcome);
  if (p <= 1e-12) {
    throw Error(ErrorCode::Projection,
                "projection onto probe outcome " + std::to_string(outcome) +
                    " has vanishing probability");
  }
  Statevector out;
  out.width = psi.width;
  out.amplitudes = Eigen::VectorXcd::Zero(psi.amplitudes.size());
  const double scale = 1.0 / std::sqrt(p);
  const std::int64_t ds = psi.dimension() / 2;
  for (std::int64_t s = 0; s < ds; ++s) {
    out.amplitudes(2 * s + outcome) = psi.amplitudes(2 * s + outcome) * scale;
  }
  return out;
}

/// Projects like project_probe but returns the system register alone.
inline Statevector collapse_system(const Statevector& psi, int outcome) {
  const Statevector projected = project_probe(psi, outcome);
  Statevector out;
  out.width = psi.width - 1;
  out.amplitudes.resize(projected.amplitudes.size() / 2);
  for (std::int64_t s = 0; s < out.amplitudes.size(); ++s) {
    out.amplitudes(s) = projected.amplitudes(2 * s + outcome);
  }
  return out;
}

}  // namespace probespec
