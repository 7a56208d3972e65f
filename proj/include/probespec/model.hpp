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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "probespec/errors.hpp"
#include "probespec/pauli.hpp"

namespace probespec {

// ---------------------------------------------------------------------------
// Probe

/// Probe basis convention: the joint register appends the probe as qubit 0,
/// so a joint basis index is 2*s + p for system index s and probe bit p.
/// Probe bit 1 carries energy +omega/2 and bit 0 carries -omega/2.
enum class ProbeState { Ground = 0, Excited = 1 };

struct ProbeConfig {
  double omega = 0.0;  ///< probe level splitting, swept during spectroscopy
  double c = 0.0;      ///< probe-system coupling strength
  double tau = 0.0;    ///< evolution time per measurement
  ProbeState init = ProbeState::Excited;
};

inline void validate_probe(const ProbeConfig& p) {
  if (!std::isfinite(p.c) || p.c < 0.0) {
    throw Error(ErrorCode::Validation, "probe coupling c must be finite and >= 0");
  }
  if (!std::isfinite(p.tau) || p.tau <= 0.0) {
    throw Error(ErrorCode::Validation, "probe evolution time tau must be > 0");
  }
  if (!std::isfinite(p.omega)) {
    throw Error(ErrorCode::Validation, "probe frequency omega must be finite");
  }
}

// ---------------------------------------------------------------------------
// System Hamiltonian

/// Immutable dense system block, embedded into a 2^n register and
/// eigendecomposed once at construction so sweeps never repeat the solve.
struct DenseSystem {
  Eigen::MatrixXcd matrix;       ///< full 2^n x 2^n, Hermitian by construction
  Eigen::VectorXd eigenvalues;   ///< ascending
  Eigen::MatrixXcd eigenvectors; ///< columns, orthonormal
  int embedded_dim = 0;          ///< rows beyond this carry only the padding
  double padding_diagonal = 0.0;
};

/// System Hamiltonian in exactly one of two realizations: a canonical Pauli
/// sum, or a dense matrix embedded into the smallest covering register.
struct SystemHamiltonian {
  int width = 0;
  std::optional<PauliSum> pauli_form;
  std::shared_ptr<const DenseSystem> dense_form;

  bool is_dense() const { return dense_form != nullptr; }
  std::int64_t dimension() const { return std::int64_t{1} << width; }
  int embedded_dim() const {
    return is_dense() ? dense_form->embedded_dim
                      : static_cast<int>(dimension());
  }

  Eigen::MatrixXcd to_matrix() const {
    if (is_dense()) return dense_form->matrix;
    return to_dense(*pauli_form);
  }
};

inline SystemHamiltonian system_from_pauli(const PauliSum& sum) {
  if (sum.width < 1) {
    throw Error(ErrorCode::Structure, "system needs at least one qubit");
  }
  PauliSum canon = canonicalize(sum);
  if (!is_hermitian(canon)) {
    throw Error(ErrorCode::Validation,
                "system Hamiltonian is not Hermitian (complex canonical "
                "coefficient)");
  }
  SystemHamiltonian out;
  out.width = sum.width;
  out.pauli_form = std::move(canon);
  return out;
}

/// Embeds a d-dimensional Hermitian block into an n-qubit register. Basis
/// states 0..d-1 carry the block; the remaining 2^n - d diagonal entries are
/// set to padding_diagonal, far detuned padding levels by convention. The
/// block is symmetrized and eigendecomposed eagerly.
inline SystemHamiltonian embed_dense(const Eigen::MatrixXcd& h, int n,
                                     double padding_diagonal) {
  if (n < 1) {
    throw Error(ErrorCode::Structure, "system needs at least one qubit");
  }
  detail::check_dense_width(n);
  if (h.rows() != h.cols() || h.rows() < 1) {
    throw Error(ErrorCode::Structure, "dense block must be square and non-empty");
  }
  const std::int64_t d = h.rows();
  const std::int64_t dim = std::int64_t{1} << n;
  if (d > dim) {
    throw Error(ErrorCode::Dimension,
                "block dimension " + std::to_string(d) +
                    " does not fit " + std::to_string(n) + " qubits");
  }
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::Validation, "dense block is not Hermitian");
  }
  if (!std::isfinite(padding_diagonal)) {
    throw Error(ErrorCode::Validation, "padding diagonal must be finite");
  }
  auto sys = std::make_shared<DenseSystem>();
  sys->matrix = Eigen::MatrixXcd::Zero(dim, dim);
  sys->matrix.topLeftCorner(d, d) = 0.5 * (h + h.adjoint().eval());
  for (std::int64_t k = d; k < dim; ++k) sys->matrix(k, k) = padding_diagonal;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sys->matrix);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Validation, "eigendecomposition failed to converge");
  }
  sys->eigenvalues = solver.eigenvalues();
  sys->eigenvectors = solver.eigenvectors();
  sys->embedded_dim = static_cast<int>(d);
  sys->padding_diagonal = padding_diagonal;
  SystemHamiltonian out;
  out.width = n;
  out.dense_form = std::move(sys);
  return out;
}

// ---------------------------------------------------------------------------
// Coupling operator

struct CouplingOperator {
  PauliSum op;
  std::string label;
};

inline CouplingOperator make_coupling(const PauliSum& op,
                                      std::string label = {}) {
  PauliSum canon = canonicalize(op);
  if (canon.empty()) {
    throw Error(ErrorCode::Validation, "coupling operator is zero");
  }
  if (!is_hermitian(canon)) {
    throw Error(ErrorCode::Validation, "coupling operator is not Hermitian");
  }
  return CouplingOperator{std::move(canon), std::move(label)};
}

/// Named coupling operators:
///  - "eq5": five single-qubit X flips, weight 1/sqrt(5), on 5 qubits
///  - "eq6": three single flips plus two double flips, weight 1/sqrt(5)
///  - "eq7": nine multi-qubit X products, weight 1/3
///  - "uniform_x" (or "uniform-x"): one X per qubit, weight 1/sqrt(n)
/// The fixed presets require n = 5.
inline CouplingOperator preset_coupling(std::string_view name, int n) {
  const auto require_n5 = [&] {
    if (n != 5) {
      throw Error(ErrorCode::Config,
                  "coupling preset '" + std::string(name) +
                      "' is defined on 5 qubits, got " + std::to_string(n));
    }
  };
  PauliSum sum(n);
  if (name == "eq5") {
    require_n5();
    const double w = 1.0 / std::sqrt(5.0);
    for (const char* s : {"IIIIX", "IIIXI", "IIXII", "IXIII", "XIIII"}) {
      sum.add(make_pauli(w, s));
    }
  } else if (name == "eq6") {
    require_n5();
    const double w = 1.0 / std::sqrt(5.0);
    for (const char* s : {"IIIIX", "IIIXI", "IIXII", "IIIXX", "IIXXI"}) {
      sum.add(make_pauli(w, s));
    }
  } else if (name == "eq7") {
    require_n5();
    const double w = 1.0 / 3.0;
    for (const char* s : {"XXXXI", "XXXIX", "XXIXX", "XIXXX", "XXXII",
                          "XIIXX", "XIXII", "XIIIX", "XXXXX"}) {
      sum.add(make_pauli(w, s));
    }
  } else if (name == "uniform_x" || name == "uniform-x") {
    if (n < 1) {
      throw Error(ErrorCode::Config, "uniform_x needs at least one qubit");
    }
    const double w = 1.0 / std::sqrt(static_cast<double>(n));
    for (int q = 0; q < n; ++q) {
      std::string s(static_cast<std::size_t>(n), 'I');
      s[static_cast<std::size_t>(n - 1 - q)] = 'X';
      sum.add(make_pauli(w, s));
    }
    return make_coupling(sum, "uniform_x");
  } else {
    throw Error(ErrorCode::Config,
                "unknown coupling preset '" + std::string(name) + "'");
  }
  return make_coupling(sum, std::string(name));
}

// ---------------------------------------------------------------------------
// Total Hamiltonian

/// H = H_system (x) I_probe + (omega/2) sz_probe + c * A (x) sx_probe,
/// with sz_probe giving probe bit 1 the energy +omega/2. On the joint
/// register the probe is qubit 0 and the system occupies qubits 1..n.
struct TotalHamiltonian {
  SystemHamiltonian system;
  ProbeConfig probe;
  CouplingOperator coupling;
  int system_width = 0;
  int joint_width = 0;

  std::int64_t joint_dimension() const { return std::int64_t{1} << joint_width; }

  Eigen::MatrixXcd to_matrix() const {
    detail::check_dense_width(joint_width);
    const std::int64_t ds = system.dimension();
    const Eigen::MatrixXcd hs = system.to_matrix();
    const Eigen::MatrixXcd a = to_dense(coupling.op);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * ds, 2 * ds);
    for (std::int64_t s = 0; s < ds; ++s) {
      for (std::int64_t t = 0; t < ds; ++t) {
        for (int p = 0; p < 2; ++p) {
          m(2 * s + p, 2 * t + p) += hs(s, t);
          m(2 * s + p, 2 * t + (1 - p)) += probe.c * a(s, t);
        }
      }
      m(2 * s + 0, 2 * s + 0) += -0.5 * probe.omega;
      m(2 * s + 1, 2 * s + 1) += +0.5 * probe.omega;
    }
    return m;
  }

  /// Joint operator as a canonical Pauli sum. Requires the system to carry a
  /// Pauli realization; embedded dense blocks have none.
  PauliSum joint_pauli() const {
    if (!system.pauli_form) {
      throw Error(ErrorCode::Structure,
                  "dense-form system has no Pauli realization");
    }
    PauliSum joint(joint_width);
    for (const auto& t : system.pauli_form->terms) {
      PauliString ext = t;
      ext.letters.push_back(Pauli::I);
      joint.add(std::move(ext));
    }
    {
      // +omega/2 on probe bit 1 means the coefficient of Z_probe is -omega/2
      // under the standard Z = diag(+1, -1) convention.
      PauliString z;
      z.coefficient = -0.5 * probe.omega;
      z.letters.assign(static_cast<std::size_t>(joint_width), Pauli::I);
      z.letters.back() = Pauli::Z;
      joint.add(std::move(z));
    }
    for (const auto& t : coupling.op.terms) {
      PauliString ext = t;
      ext.coefficient *= probe.c;
      ext.letters.push_back(Pauli::X);
      joint.add(std::move(ext));
    }
    return canonicalize(joint);
  }

  /// Upper bound on the joint operator norm; drives the default Trotter step
  /// count.
  double norm_bound() const {
    double bound = 0.5 * std::abs(probe.omega);
    for (const auto& t : coupling.op.terms) {
      bound += probe.c * std::abs(t.coefficient);
    }
    if (system.is_dense()) {
      bound += std::max(std::abs(system.dense_form->eigenvalues.minCoeff()),
                        std::abs(system.dense_form->eigenvalues.maxCoeff()));
    } else {
      for (const auto& t : system.pauli_form->terms) {
        bound += std::abs(t.coefficient);
      }
    }
    return bound;
  }
};

inline TotalHamiltonian assemble_total(SystemHamiltonian system,
                                       ProbeConfig probe,
                                       CouplingOperator coupling) {
  if (system.width < 1 || (!system.pauli_form && !system.dense_form)) {
    throw Error(ErrorCode::Structure, "system Hamiltonian is empty");
  }
  if (coupling.op.width != system.width) {
    throw Error(ErrorCode::Structure,
                "coupling width " + std::to_string(coupling.op.width) +
                    " does not match system width " +
                    std::to_string(system.width));
  }
  validate_probe(probe);
  const PauliSum coupling_canon = canonicalize(coupling.op);
  if (coupling_canon.empty()) {
    throw Error(ErrorCode::Validation, "coupling operator is zero");
  }
  if (!is_hermitian(coupling_canon)) {
    throw Error(ErrorCode::Validation, "coupling operator is not Hermitian");
  }
  if (system.pauli_form && !is_hermitian(*system.pauli_form)) {
    throw Error(ErrorCode::Validation, "system Hamiltonian is not Hermitian");
  }
  TotalHamiltonian out;
  out.system_width = system.width;
  out.joint_width = system.width + 1;
  out.system = std::move(system);
  out.probe = probe;
  out.coupling = CouplingOperator{std::move(coupling_canon),
                                  std::move(coupling.label)};
  return out;
}

// ---------------------------------------------------------------------------
// Model

/// Everything a sweep needs: the system, how the probe couples to it, the
/// probe parameters, and the prepared system state.
struct Model {
  SystemHamiltonian system;
  CouplingOperator coupling;
  ProbeConfig probe;
  Eigen::VectorXcd initial;  ///< system register state, length 2^n
  std::string name;
};

inline void validate_model(const Model& m) {
  if (m.initial.size() != m.system.dimension()) {
    throw Error(ErrorCode::Structure,
                "initial state length " + std::to_string(m.initial.size()) +
                    " does not match system dimension " +
                    std::to_string(m.system.dimension()));
  }
  if (std::abs(m.initial.norm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::Validation, "initial state is not normalized");
  }
  if (m.coupling.op.width != m.system.width) {
    throw Error(ErrorCode::Structure,
                "coupling width does not match system width");
  }
  validate_probe(m.probe);
}

}  // namespace probespec
