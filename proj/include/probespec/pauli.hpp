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
#include <charconv>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "probespec/config.hpp"
#include "probespec/errors.hpp"

namespace probespec {

using Complex = std::complex<double>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default:
      throw Error(ErrorCode::Parse,
                  std::string("illegal Pauli letter '") + c + "'");
  }
}

/// One weighted tensor product of single-qubit Pauli operators.
///
/// letters.front() acts on the highest-index qubit, so the string "XIZ" on
/// basis label |q2 q1 q0> applies X to q2 and Z to q0. This matches the usual
/// left-to-right reading of bitstrings like |00010>.
struct PauliString {
  Complex coefficient{1.0, 0.0};
  std::vector<Pauli> letters;

  int width() const { return static_cast<int>(letters.size()); }

  Pauli letter_on_qubit(int q) const {
    return letters[letters.size() - 1 - static_cast<std::size_t>(q)];
  }

  /// Mask of qubits whose basis bit is toggled by this string (X and Y).
  std::uint64_t flip_mask() const {
    std::uint64_t mask = 0;
    for (int q = 0; q < width(); ++q) {
      const Pauli p = letter_on_qubit(q);
      if (p == Pauli::X || p == Pauli::Y) mask |= std::uint64_t{1} << q;
    }
    return mask;
  }

  /// Amplitude picked up when acting on computational basis state |basis>:
  ///   P |basis> = phase_on_basis(basis) * |basis ^ flip_mask()>
  /// The coefficient is not included.
  Complex phase_on_basis(std::uint64_t basis) const {
    Complex phase{1.0, 0.0};
    for (int q = 0; q < width(); ++q) {
      const bool bit = (basis >> q) & 1u;
      switch (letter_on_qubit(q)) {
        case Pauli::Y: phase *= bit ? Complex(0, -1) : Complex(0, 1); break;
        case Pauli::Z: if (bit) phase = -phase; break;
        default: break;
      }
    }
    return phase;
  }

  std::string letters_str() const {
    std::string s;
    s.reserve(letters.size());
    for (Pauli p : letters) s.push_back(pauli_char(p));
    return s;
  }

  bool operator==(const PauliString& other) const {
    return coefficient == other.coefficient && letters == other.letters;
  }
};

/// Builds a string from its letter sequence, e.g. make_pauli(0.5, "IXZ").
inline PauliString make_pauli(Complex coefficient, std::string_view letters) {
  PauliString out;
  out.coefficient = coefficient;
  out.letters.reserve(letters.size());
  for (char c : letters) out.letters.push_back(pauli_from_char(c));
  return out;
}

/// Weighted sum of equal-width Pauli strings. The width is fixed at
/// construction so that an empty sum still denotes the zero operator on a
/// definite register.
struct PauliSum {
  int width = 0;
  std::vector<PauliString> terms;

  PauliSum() = default;
  explicit PauliSum(int w) : width(w) {}

  void add(PauliString term) {
    if (term.width() != width) {
      throw Error(ErrorCode::Structure,
                  "term width " + std::to_string(term.width()) +
                      " does not match sum width " + std::to_string(width));
    }
    terms.push_back(std::move(term));
  }

  bool empty() const { return terms.empty(); }
};

inline PauliSum make_pauli_sum(std::vector<PauliString> terms) {
  if (terms.empty()) {
    throw Error(ErrorCode::Structure,
                "cannot infer register width from an empty term list");
  }
  PauliSum sum(terms.front().width());
  for (auto& t : terms) sum.add(std::move(t));
  return sum;
}

namespace detail {

inline void check_uniform_width(const PauliSum& sum) {
  for (const auto& t : sum.terms) {
    if (t.width() != sum.width) {
      throw Error(ErrorCode::Structure,
                  "mixed term widths in Pauli sum: expected " +
                      std::to_string(sum.width) + ", found " +
                      std::to_string(t.width()));
    }
  }
}

}  // namespace detail

/// Sorts terms lexicographically by letters (I < X < Y < Z), merges equal
/// strings, and drops terms whose merged coefficient is exactly zero.
inline PauliSum canonicalize(const PauliSum& sum) {
  detail::check_uniform_width(sum);
  std::vector<PauliString> sorted = sum.terms;
  std::sort(sorted.begin(), sorted.end(),
            [](const PauliString& a, const PauliString& b) {
              return a.letters < b.letters;
            });
  PauliSum out(sum.width);
  for (auto& term : sorted) {
    if (!out.terms.empty() && out.terms.back().letters == term.letters) {
      out.terms.back().coefficient += term.coefficient;
    } else {
      out.terms.push_back(std::move(term));
    }
  }
  std::erase_if(out.terms, [](const PauliString& t) {
    return t.coefficient == Complex{0.0, 0.0};
  });
  return out;
}

namespace detail {

inline void check_dense_width(int width) {
  if (width < 0) {
    throw Error(ErrorCode::Structure, "negative register width");
  }
  if (width > dense_qubit_cap()) {
    throw Error(ErrorCode::Resource,
                "dense realization of " + std::to_string(width) +
                    " qubits exceeds the cap of " +
                    std::to_string(dense_qubit_cap()) +
                    " (set PROBESPEC_DENSE_CAP to raise it)");
  }
}

}  // namespace detail

/// Full 2^n x 2^n matrix of a single string (coefficient included).
inline Eigen::MatrixXcd to_dense(const PauliString& term) {
  detail::check_dense_width(term.width());
  const std::int64_t dim = std::int64_t{1} << term.width();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const std::uint64_t flip = term.flip_mask();
  for (std::int64_t col = 0; col < dim; ++col) {
    const auto basis = static_cast<std::uint64_t>(col);
    m(static_cast<std::int64_t>(basis ^ flip), col) =
        term.coefficient * term.phase_on_basis(basis);
  }
  return m;
}

/// Full 2^n x 2^n matrix of the sum. Refused above the dense qubit cap.
inline Eigen::MatrixXcd to_dense(const PauliSum& sum) {
  detail::check_uniform_width(sum);
  detail::check_dense_width(sum.width);
  const std::int64_t dim = std::int64_t{1} << sum.width;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : sum.terms) {
    const std::uint64_t flip = term.flip_mask();
    for (std::int64_t col = 0; col < dim; ++col) {
      const auto basis = static_cast<std::uint64_t>(col);
      m(static_cast<std::int64_t>(basis ^ flip), col) +=
          term.coefficient * term.phase_on_basis(basis);
    }
  }
  return m;
}

/// True when the operator is Hermitian, i.e. every canonical coefficient is
/// real to within 1e-12. Pauli strings are Hermitian themselves, so only the
/// coefficients matter.
inline bool is_hermitian(const PauliSum& sum, double tol = 1e-12) {
  const PauliSum canon = canonicalize(sum);
  for (const auto& t : canon.terms) {
    if (std::abs(t.coefficient.imag()) > tol) return false;
  }
  return true;
}

namespace detail {

inline double parse_double_token(const char*& ptr, const char* end,
                                 std::string_view whole) {
  double value = 0.0;
  const auto res = std::from_chars(ptr, end, value);
  if (res.ec != std::errc{}) {
    throw Error(ErrorCode::Parse,
                "malformed coefficient '" + std::string(whole) + "'");
  }
  ptr = res.ptr;
  return value;
}

/// Accepts "<real>" or "<real>+<imag>i" / "<real>-<imag>i".
inline Complex parse_complex_token(std::string_view token) {
  const char* ptr = token.data();
  const char* end = token.data() + token.size();
  const double re = parse_double_token(ptr, end, token);
  if (ptr == end) return {re, 0.0};
  const char sign = *ptr;
  if (sign != '+' && sign != '-') {
    throw Error(ErrorCode::Parse,
                "malformed coefficient '" + std::string(token) + "'");
  }
  ++ptr;
  double im = parse_double_token(ptr, end, token);
  if (sign == '-') im = -im;
  if (ptr == end || *ptr != 'i' || ptr + 1 != end) {
    throw Error(ErrorCode::Parse,
                "malformed coefficient '" + std::string(token) + "'");
  }
  return {re, im};
}

inline std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Parses one term in the text format "<coef> <letters>", e.g. "1.0 IIIIX"
/// or "0.5-0.5i XZ". The coefficient may carry an imaginary part written as
/// "<re>+<im>i" with no spaces.
inline PauliString parse_pauli_term(std::string_view text) {
  const std::string_view trimmed = detail::trim(text);
  const std::size_t split = trimmed.find_first_of(" \t");
  if (trimmed.empty() || split == std::string_view::npos) {
    throw Error(ErrorCode::Parse,
                "expected '<coef> <letters>', got '" + std::string(trimmed) +
                    "'");
  }
  const std::string_view coef_token = trimmed.substr(0, split);
  const std::string_view letters = detail::trim(trimmed.substr(split));
  if (letters.empty()) {
    throw Error(ErrorCode::Parse, "empty Pauli letter sequence in '" +
                                      std::string(trimmed) + "'");
  }
  if (letters.find_first_of(" \t") != std::string_view::npos) {
    throw Error(ErrorCode::Parse,
                "unexpected token after letters in '" + std::string(trimmed) +
                    "'");
  }
  PauliString out;
  out.coefficient = detail::parse_complex_token(coef_token);
  out.letters.reserve(letters.size());
  for (char c : letters) out.letters.push_back(pauli_from_char(c));
  return out;
}

/// Parses newline-separated terms; blank lines and lines starting with '#'
/// are skipped. All terms must share one width.
inline PauliSum parse_pauli_sum(std::string_view text) {
  std::vector<PauliString> terms;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = detail::trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line.front() == '#') continue;
    terms.push_back(parse_pauli_term(line));
  }
  if (terms.empty()) {
    throw Error(ErrorCode::Parse, "no Pauli terms found");
  }
  return make_pauli_sum(std::move(terms));
}

}  // namespace probespec
