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

// Qubit-wise commuting groups of Pauli strings, one measurement setting each.

#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "iqae/error.hpp"
#include "iqae/pauli.hpp"

namespace iqae {

struct MeasurementPlan {
  std::vector<std::vector<std::size_t>> groups;
  std::size_t settings_count = 0;
  /// Per group, the measured axis on every qubit; 'I' marks a free qubit.
  std::vector<PauliTerm> per_group_basis;
};

namespace detail {

// True when `s` agrees with `basis` wherever both act non-trivially.
inline bool fits_basis(const PauliTerm& s, const PauliTerm& basis) { return commutes_qubitwise(s, basis); }

inline void merge_into_basis(PauliTerm& basis, const PauliTerm& s) {
  QubitMask x = basis.x() | s.x();
  QubitMask z = basis.z() | s.z();
  basis = PauliTerm(std::move(x), std::move(z));
}

}  // namespace detail

/// Greedy largest-degree-first colouring of the incompatibility graph (an
/// edge joins two strings that do not commute qubit-wise). Ties go to the
/// lower input index; each vertex takes the lowest-numbered group it fits.
inline MeasurementPlan plan(std::span<const PauliTerm> strings) {
  MeasurementPlan out;
  if (strings.empty()) return out;
  const std::size_t n = strings.front().n_qubits();
  std::unordered_set<PauliTerm, PauliTermHash> seen;
  for (const auto& s : strings) {
    if (s.n_qubits() != n) throw SizeMismatch("measurement strings have different widths");
    if (!s.is_hermitian()) throw std::invalid_argument("string '" + s.label() + "' is not Hermitian");
    if (!seen.insert(s.dephased()).second) {
      throw std::invalid_argument("duplicate measurement string '" + s.dephased().label() + "'");
    }
  }

  const std::size_t m = strings.size();
  std::vector<std::size_t> degree(m, 0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      if (!commutes_qubitwise(strings[a], strings[b])) {
        ++degree[a];
        ++degree[b];
      }
    }
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });

  // A string fits a group iff it fits the group's merged per-qubit basis, so
  // membership is checked against one term per group.
  for (std::size_t v : order) {
    std::size_t g = 0;
    while (g < out.groups.size() && !detail::fits_basis(strings[v], out.per_group_basis[g])) ++g;
    if (g == out.groups.size()) {
      out.groups.emplace_back();
      out.per_group_basis.emplace_back(n);
    }
    out.groups[g].push_back(v);
    detail::merge_into_basis(out.per_group_basis[g], strings[v]);
  }
  for (auto& group : out.groups) std::sort(group.begin(), group.end());
  out.settings_count = out.groups.size();
  return out;
}

inline MeasurementPlan plan(const std::vector<PauliTerm>& strings) {
  return plan(std::span<const PauliTerm>(strings));
}

/// Partition, pairwise compatibility and basis consistency.
inline bool validate(const MeasurementPlan& p, std::span<const PauliTerm> strings) {
  if (p.settings_count != p.groups.size() || p.per_group_basis.size() != p.groups.size()) return false;
  std::vector<int> hits(strings.size(), 0);
  for (std::size_t g = 0; g < p.groups.size(); ++g) {
    const auto& group = p.groups[g];
    if (group.empty()) return false;
    for (std::size_t a = 0; a < group.size(); ++a) {
      if (group[a] >= strings.size()) return false;
      ++hits[group[a]];
      const PauliTerm& s = strings[group[a]];
      if (s.n_qubits() != p.per_group_basis[g].n_qubits()) return false;
      for (std::size_t q = 0; q < s.n_qubits(); ++q) {
        const char f = s.factor(q);
        if (f != 'I' && f != p.per_group_basis[g].factor(q)) return false;
      }
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        if (group[b] >= strings.size()) return false;
        if (!commutes_qubitwise(s, strings[group[b]])) return false;
      }
    }
  }
  return std::ranges::all_of(hits, [](int h) { return h == 1; });
}

inline bool validate(const MeasurementPlan& p, const std::vector<PauliTerm>& strings) {
  return validate(p, std::span<const PauliTerm>(strings));
}

}  // namespace iqae
