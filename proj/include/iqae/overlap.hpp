// Copyright 2026 The IQAE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Overlap matrices of a moment basis:
//   E_nm   = <psi| T_n^dag T_m |psi>
//   D_k,nm = <psi| T_n^dag U_k T_m |psi>,   D(beta) = sum_k beta_k D_k.
// Every entry is a phase times the expectation of one Hermitian Pauli
// string; each distinct string is evaluated once.

#pragma once

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "iqae/backends.hpp"
#include "iqae/error.hpp"
#include "iqae/moment_basis.hpp"
#include "iqae/pauli.hpp"

namespace iqae {

/// prefactor * reduced == left^dag [mid] right, with `reduced` phase-free.
struct ReducedEntry {
  int prefactor_exp = 0;
  PauliTerm reduced;

  std::complex<double> prefactor() const {
    static constexpr std::complex<double> kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kPhases[prefactor_exp];
  }
};

inline ReducedEntry split_phase(PauliTerm product) {
  const int k = product.phase_exp();
  product.set_phase_exp(0);
  return {k, std::move(product)};
}

inline ReducedEntry reduce_entry(const PauliTerm& left, const PauliTerm& right) {
  return split_phase(multiply(adjoint(left), right));
}

inline ReducedEntry reduce_entry(const PauliTerm& left, const PauliTerm& mid, const PauliTerm& right) {
  return split_phase(multiply(multiply(adjoint(left), mid), right));
}

inline ReducedEntry reduce_entry(const BasisElement& left, const BasisElement& right) {
  return reduce_entry(left.term, right.term);
}

inline ReducedEntry reduce_entry(const BasisElement& left, const PauliTerm& mid, const BasisElement& right) {
  return reduce_entry(left.term, mid, right.term);
}

struct AssemblyOptions {
  /// Keep one D_k per Hamiltonian term (needed for recombine). When false
  /// only D at the assembly coefficients is stored.
  bool factored = true;
};

struct OverlapSet {
  MomentBasis basis;
  PauliHamiltonian hamiltonian;
  Eigen::MatrixXcd E;
  std::vector<Eigen::MatrixXcd> D_terms;
  /// D at the assembly coefficients; only set for unfactored assemblies.
  std::optional<Eigen::MatrixXcd> D_fixed;
  std::unordered_map<PauliTerm, double, PauliTermHash> cache;
  std::string provenance;
  bool exact = true;

  std::size_t dimension() const { return static_cast<std::size_t>(E.rows()); }
  bool factored() const { return !D_fixed.has_value(); }

  /// D at the coefficients the set was assembled with.
  Eigen::MatrixXcd D_assembled() const;
};

/// D(beta) = sum_k beta_k D_k; never touches a backend.
inline Eigen::MatrixXcd recombine_D(const OverlapSet& set, std::span<const double> beta) {
  if (!set.factored()) throw std::logic_error("overlap set was assembled without per-term D matrices");
  if (beta.size() != set.D_terms.size()) {
    throw SizeMismatch("beta has " + std::to_string(beta.size()) + " entries, overlap set has " +
                       std::to_string(set.D_terms.size()) + " terms");
  }
  const auto dim = static_cast<Eigen::Index>(set.dimension());
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t k = 0; k < beta.size(); ++k) {
    if (beta[k] != 0.0) D += beta[k] * set.D_terms[k];
  }
  return D;
}

inline Eigen::MatrixXcd recombine_D(const OverlapSet& set, const std::vector<double>& beta) {
  return recombine_D(set, std::span<const double>(beta));
}

/// (D(beta), E).
inline std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> recombine(const OverlapSet& set, const std::vector<double>& beta) {
  return {recombine_D(set, beta), set.E};
}

inline Eigen::MatrixXcd OverlapSet::D_assembled() const {
  if (D_fixed) return *D_fixed;
  return recombine_D(*this, hamiltonian.coefficients());
}

namespace detail {

struct EntryVisitor {
  const MomentBasis& basis;
  const std::vector<PauliTerm>& terms;

  // Calls f(n, m, k, entry) over the upper triangle for every column m in
  // [first_col, size); k == terms.size() denotes the E entry.
  template <typename F>
  void for_each(std::size_t first_col, F&& f) const {
    for (std::size_t m = first_col; m < basis.size(); ++m) {
      const PauliTerm& right = basis[m].term;
      for (std::size_t n = 0; n <= m; ++n) {
        const PauliTerm left = adjoint(basis[n].term);
        f(n, m, terms.size(), split_phase(multiply(left, right)));
        for (std::size_t k = 0; k < terms.size(); ++k) {
          f(n, m, k, split_phase(multiply(multiply(left, terms[k]), right)));
        }
      }
    }
  }
};

inline std::string entry_name(std::size_t n, std::size_t m, std::size_t k, std::size_t n_terms) {
  if (k == n_terms) return "E(" + std::to_string(n) + "," + std::to_string(m) + ")";
  return "D_" + std::to_string(k) + "(" + std::to_string(n) + "," + std::to_string(m) + ")";
}

struct PendingString {
  PauliTerm term;
  std::size_t n, m, k;
};

inline void evaluate_missing(std::vector<PendingString>& pending, OverlapSet& set, ExpectationBackend& backend,
                             std::size_t n_terms) {
  if (pending.empty()) return;
  std::vector<PauliTerm> strings;
  strings.reserve(pending.size());
  for (const auto& p : pending) strings.push_back(p.term);
  std::vector<double> values;
  try {
    values = backend.evaluate(strings);
  } catch (const std::exception& batch_error) {
    for (const auto& p : pending) {
      try {
        backend.evaluate(p.term);
      } catch (const std::exception& e) {
        throw std::runtime_error("evaluating " + entry_name(p.n, p.m, p.k, n_terms) + " (string '" + p.term.label() +
                                 "'): " + e.what());
      }
    }
    throw;
  }
  for (std::size_t i = 0; i < pending.size(); ++i) set.cache.emplace(std::move(pending[i].term), values[i]);
}

// Fills columns [first_col, size) of the upper triangle and mirrors them.
inline void fill_columns(OverlapSet& set, std::size_t first_col, ExpectationBackend& backend) {
  const std::vector<PauliTerm> terms = set.hamiltonian.generators();
  const std::vector<double> beta = set.hamiltonian.coefficients();
  const std::size_t n_terms = terms.size();
  EntryVisitor visit{set.basis, terms};

  std::vector<PendingString> pending;
  std::unordered_map<PauliTerm, std::size_t, PauliTermHash> pending_index;
  visit.for_each(first_col, [&](std::size_t n, std::size_t m, std::size_t k, ReducedEntry&& e) {
    if (set.cache.contains(e.reduced) || pending_index.contains(e.reduced)) return;
    pending_index.emplace(e.reduced, pending.size());
    pending.push_back({std::move(e.reduced), n, m, k});
  });
  pending_index.clear();
  evaluate_missing(pending, set, backend, n_terms);

  visit.for_each(first_col, [&](std::size_t n, std::size_t m, std::size_t k, ReducedEntry&& e) {
    const std::complex<double> value = e.prefactor() * set.cache.at(e.reduced);
    const auto r = static_cast<Eigen::Index>(n);
    const auto c = static_cast<Eigen::Index>(m);
    Eigen::MatrixXcd* target;
    double weight = 1.0;
    if (k == n_terms) {
      target = &set.E;
    } else if (set.D_fixed) {
      target = &*set.D_fixed;
      weight = beta[k];
    } else {
      target = &set.D_terms[k];
    }
    if (n == m) {
      (*target)(r, r) += weight * value.real();
    } else {
      (*target)(r, c) += weight * value;
      (*target)(c, r) += weight * std::conj(value);
    }
  });
}

inline void resize_keep(Eigen::MatrixXcd& M, Eigen::Index dim) {
  Eigen::MatrixXcd grown = Eigen::MatrixXcd::Zero(dim, dim);
  grown.topLeftCorner(M.rows(), M.cols()) = M;
  M = std::move(grown);
}

}  // namespace detail

inline OverlapSet assemble(const MomentBasis& basis, const PauliHamiltonian& h, ExpectationBackend& backend,
                           AssemblyOptions options = {}) {
  if (basis.n_qubits() != h.n_qubits() || backend.n_qubits() != h.n_qubits()) {
    throw SizeMismatch("basis, Hamiltonian and backend act on different qubit counts");
  }
  OverlapSet set;
  set.basis = basis;
  set.hamiltonian = h;
  set.provenance = backend.descriptor();
  set.exact = backend.is_exact();
  const auto dim = static_cast<Eigen::Index>(basis.size());
  set.E = Eigen::MatrixXcd::Zero(dim, dim);
  if (options.factored) {
    set.D_terms.assign(h.size(), Eigen::MatrixXcd::Zero(dim, dim));
  } else {
    set.D_fixed = Eigen::MatrixXcd::Zero(dim, dim);
  }
  detail::fill_columns(set, 0, backend);
  return set;
}

/// Grows `set` to `larger`, which must start with the current basis. Only
/// the new rows and columns are computed; cached strings are reused.
inline void extend(OverlapSet& set, const MomentBasis& larger, ExpectationBackend& backend) {
  const std::size_t old = set.basis.size();
  if (larger.size() < old) throw std::invalid_argument("extended basis is smaller than the current one");
  for (std::size_t i = 0; i < old; ++i) {
    if (!(larger[i].term == set.basis[i].term)) {
      throw std::invalid_argument("extended basis does not start with the current basis");
    }
  }
  set.basis = larger;
  if (larger.size() == old) return;
  const auto dim = static_cast<Eigen::Index>(larger.size());
  detail::resize_keep(set.E, dim);
  for (auto& D : set.D_terms) detail::resize_keep(D, dim);
  if (set.D_fixed) detail::resize_keep(*set.D_fixed, dim);
  detail::fill_columns(set, old, backend);
}

/// Leading m x m block of a set (the overlaps of basis.prefix(m)).
inline OverlapSet leading_block(const OverlapSet& set, std::size_t m) {
  OverlapSet out;
  out.basis = set.basis.prefix(m);
  out.hamiltonian = set.hamiltonian;
  const auto k = static_cast<Eigen::Index>(m);
  out.E = set.E.topLeftCorner(k, k);
  for (const auto& D : set.D_terms) out.D_terms.push_back(D.topLeftCorner(k, k));
  if (set.D_fixed) out.D_fixed = set.D_fixed->topLeftCorner(k, k);
  out.cache = set.cache;
  out.provenance = set.provenance;
  out.exact = set.exact;
  return out;
}

/// Number of distinct reduced strings an assembly would evaluate.
inline std::size_t unique_string_count(const MomentBasis& basis, const PauliHamiltonian& h) {
  const std::vector<PauliTerm> terms = h.generators();
  std::unordered_map<PauliTerm, char, PauliTermHash> seen;
  detail::EntryVisitor{basis, terms}.for_each(
      0, [&](std::size_t, std::size_t, std::size_t, ReducedEntry&& e) { seen.emplace(std::move(e.reduced), 0); });
  return seen.size();
}

}  // namespace iqae
