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
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "probespec/errors.hpp"
#include "probespec/model.hpp"
#include "probespec/rng.hpp"
#include "probespec/types.hpp"

namespace probespec {

// ---------------------------------------------------------------------------
// Reference eigensystem

struct EigenSystem {
  Eigen::VectorXd energies;        ///< ascending
  Eigen::MatrixXcd vectors;        ///< orthonormal columns
  std::vector<bool> padded;        ///< eigenstates living on padding levels

  int dimension() const { return static_cast<int>(energies.size()); }
};

/// Direct diagonalization of the system Hamiltonian. This is the reference
/// the simulation paths are checked against, so it never goes through the
/// propagators.
inline EigenSystem eigendecompose(const SystemHamiltonian& hs) {
  detail::check_dense_width(hs.width);
  const Eigen::MatrixXcd m = hs.to_matrix();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::Validation, "system Hamiltonian is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Validation,
                "eigendecomposition failed to converge");
  }
  EigenSystem out;
  out.energies = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  out.padded.assign(static_cast<std::size_t>(out.dimension()), false);
  const int d = hs.embedded_dim();
  if (d < out.dimension()) {
    for (int k = 0; k < out.dimension(); ++k) {
      const double padding_weight =
          out.vectors.col(k).tail(out.dimension() - d).squaredNorm();
      out.padded[static_cast<std::size_t>(k)] = padding_weight > 0.5;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transition table

/// All transitions i < j with E_j - E_i inside [omega_min, omega_max].
/// Overlap is taken against psi_s on the eigenstate the sweep starts from:
/// phi_i when absorbing, phi_j when emitting. Records sorted by delta_e.
inline TransitionTable transition_table(const EigenSystem& eig,
                                        const CouplingOperator& coupling,
                                        const Eigen::VectorXcd& psi_s,
                                        double omega_min, double omega_max,
                                        SweepMode mode = SweepMode::Absorption) {
  const int d = eig.dimension();
  if (psi_s.size() != d) {
    throw Error(ErrorCode::Structure,
                "initial state length does not match eigensystem dimension");
  }
  if (std::abs(psi_s.norm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::Validation, "initial state is not normalized");
  }
  if (!(omega_max >= omega_min)) {
    throw Error(ErrorCode::Validation, "window must satisfy omega_max >= omega_min");
  }
  const Eigen::MatrixXcd a = to_dense(coupling.op);
  if (a.rows() != d) {
    throw Error(ErrorCode::Structure,
                "coupling dimension does not match eigensystem dimension");
  }
  const Eigen::MatrixXcd elements = eig.vectors.adjoint() * (a * eig.vectors);
  const Eigen::VectorXd overlaps = (eig.vectors.adjoint() * psi_s).cwiseAbs2();
  TransitionTable table;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const double delta = eig.energies(j) - eig.energies(i);
      if (delta < omega_min || delta > omega_max) continue;
      TransitionRecord rec;
      rec.i = i;
      rec.j = j;
      rec.delta_e = delta;
      rec.matrix_element = std::abs(elements(j, i));
      rec.overlap =
          mode == SweepMode::Absorption ? overlaps(i) : overlaps(j);
      rec.padded = eig.padded[static_cast<std::size_t>(i)] ||
                   eig.padded[static_cast<std::size_t>(j)];
      table.records.push_back(rec);
    }
  }
  std::sort(table.records.begin(), table.records.end(),
            [](const TransitionRecord& a, const TransitionRecord& b) {
              return a.delta_e < b.delta_e;
            });
  return table;
}

// ---------------------------------------------------------------------------
// Peak-to-transition matching

struct PeakMatch {
  int peak = -1;
  std::optional<int> record;      ///< best record index, if any within reach
  double distance = 0.0;
  std::vector<int> candidates;    ///< every record within reach
  bool ambiguous = false;
};

struct MatchResult {
  std::vector<PeakMatch> matches;        ///< one entry per peak
  std::vector<int> unmatched_peaks;
  std::vector<int> unmatched_records;    ///< records with no peak in reach
};

/// Assigns each peak to the nearest record with |center - delta_e| within
/// the record's tolerance. Distance ties go to the larger predicted height
/// (matrix_element^2 * overlap). A record counts as matched when any peak is
/// within its tolerance, so one merged peak can cover several records; those
/// peaks are flagged ambiguous.
inline MatchResult match_peaks(const std::vector<Peak>& peaks,
                               const TransitionTable& table,
                               const std::vector<double>& tolerances) {
  if (tolerances.size() != table.records.size()) {
    throw Error(ErrorCode::Structure,
                "one tolerance per table record required");
  }
  MatchResult result;
  std::vector<bool> record_hit(table.records.size(), false);
  for (int p = 0; p < static_cast<int>(peaks.size()); ++p) {
    PeakMatch m;
    m.peak = p;
    double best_distance = 0.0;
    double best_height = -1.0;
    for (int r = 0; r < static_cast<int>(table.records.size()); ++r) {
      const TransitionRecord& rec = table.records[static_cast<std::size_t>(r)];
      const double dist = std::abs(peaks[static_cast<std::size_t>(p)].center -
                                   rec.delta_e);
      if (dist > tolerances[static_cast<std::size_t>(r)]) continue;
      m.candidates.push_back(r);
      record_hit[static_cast<std::size_t>(r)] = true;
      const double height =
          rec.matrix_element * rec.matrix_element * rec.overlap;
      const bool closer = !m.record || dist < best_distance - 1e-12;
      const bool tied = m.record && std::abs(dist - best_distance) <= 1e-12;
      if (closer || (tied && height > best_height)) {
        m.record = r;
        best_distance = dist;
        best_height = height;
        m.distance = dist;
      }
    }
    m.ambiguous = m.candidates.size() > 1;
    if (!m.record) result.unmatched_peaks.push_back(p);
    result.matches.push_back(std::move(m));
  }
  for (int r = 0; r < static_cast<int>(table.records.size()); ++r) {
    if (!record_hit[static_cast<std::size_t>(r)]) {
      result.unmatched_records.push_back(r);
    }
  }
  return result;
}

inline MatchResult match_peaks(const std::vector<Peak>& peaks,
                               const TransitionTable& table,
                               double tolerance) {
  return match_peaks(peaks, table,
                     std::vector<double>(table.records.size(), tolerance));
}

// ---------------------------------------------------------------------------
// Degeneracies

/// Groups of eigenstate indices whose energies sit within gap_tol of their
/// neighbor, ascending. Non-degenerate levels come back as singletons.
inline std::vector<std::vector<int>> detect_degeneracy(const EigenSystem& eig,
                                                       double gap_tol) {
  if (!(gap_tol >= 0.0)) {
    throw Error(ErrorCode::Validation, "gap tolerance must be >= 0");
  }
  std::vector<std::vector<int>> groups;
  for (int k = 0; k < eig.dimension(); ++k) {
    if (k > 0 && eig.energies(k) - eig.energies(k - 1) <= gap_tol) {
      groups.back().push_back(k);
    } else {
      groups.push_back({k});
    }
  }
  return groups;
}

/// Adds a seeded random Pauli perturbation of operator norm epsilon, enough
/// to split accidental degeneracies while moving every level by at most
/// epsilon. epsilon = 0 returns the input unchanged.
inline SystemHamiltonian lift_degeneracies(const SystemHamiltonian& hs,
                                           double epsilon,
                                           std::uint64_t seed) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::Validation, "epsilon must be finite and >= 0");
  }
  if (epsilon == 0.0) return hs;
  detail::check_dense_width(hs.width);
  const int n = hs.width;
  SplitMix64 g(seed);
  PauliSum pert(n);
  const auto random_letter = [&] {
    return static_cast<Pauli>(1 + g.next() % 3);
  };
  for (int t = 0; t < n; ++t) {
    std::vector<Pauli> letters(static_cast<std::size_t>(n), Pauli::I);
    letters[g.next() % static_cast<std::uint64_t>(n)] = random_letter();
    PauliString term;
    term.coefficient = g.gaussian();
    term.letters = std::move(letters);
    pert.add(std::move(term));
  }
  if (n >= 2) {
    for (int t = 0; t < n; ++t) {
      const auto q1 = g.next() % static_cast<std::uint64_t>(n);
      auto q2 = g.next() % static_cast<std::uint64_t>(n - 1);
      if (q2 >= q1) ++q2;
      std::vector<Pauli> letters(static_cast<std::size_t>(n), Pauli::I);
      letters[q1] = random_letter();
      letters[q2] = random_letter();
      PauliString term;
      term.coefficient = g.gaussian();
      term.letters = std::move(letters);
      pert.add(std::move(term));
    }
  }
  pert = canonicalize(pert);
  if (pert.empty()) {
    pert.add(make_pauli(1.0, std::string(static_cast<std::size_t>(n), 'I')
                                 .replace(0, 1, "Z")));
  }
  const Eigen::MatrixXcd dense_pert = to_dense(pert);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_pert);
  const double norm = std::max(std::abs(solver.eigenvalues().minCoeff()),
                               std::abs(solver.eigenvalues().maxCoeff()));
  const double scale = epsilon / norm;
  if (hs.pauli_form) {
    PauliSum shifted = *hs.pauli_form;
    for (const auto& t : pert.terms) {
      PauliString scaled = t;
      scaled.coefficient *= scale;
      shifted.add(std::move(scaled));
    }
    return system_from_pauli(shifted);
  }
  const Eigen::MatrixXcd shifted =
      hs.dense_form->matrix + scale * dense_pert;
  return embed_dense(shifted, hs.width, hs.dense_form->padding_diagonal);
}

}  // namespace probespec
