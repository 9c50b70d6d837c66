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

// Cumulative moment bases: every distinct Pauli string reachable as a word of
// at most K generators, ordered by (level, word).

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iqae/error.hpp"
#include "iqae/pauli.hpp"

namespace iqae {

/// One basis state T|psi>. `word` lists generator indices (i_1, ..., i_k) and
/// `term` is the phase-free product U_{i_k} ... U_{i_1}.
struct BasisElement {
  PauliTerm term;
  std::vector<std::uint32_t> word;
  std::size_t level = 0;
};

class MomentBasis {
 public:
  MomentBasis() = default;

  /// Breadth-first expansion up to level K, stopping once `cap` elements
  /// exist. Products whose (x, z) masks are already present are dropped.
  static MomentBasis build(const std::vector<PauliTerm>& generators, std::size_t K,
                           std::optional<std::size_t> cap = std::nullopt) {
    MomentBasis basis(generators, cap);
    while (basis.K_ < K && !basis.is_saturated() && basis.extend_one_level() > 0) {
    }
    return basis;
  }

  /// Wraps an explicit element list (for example a hand-picked subset). The
  /// result is frozen: extend_one_level() is not available on it.
  static MomentBasis from_elements(const std::vector<PauliTerm>& generators,
                                   std::vector<BasisElement> elements) {
    if (elements.empty()) throw std::invalid_argument("basis needs at least one element");
    MomentBasis basis;
    basis.generators_ = generators;
    basis.n_ = elements.front().term.n_qubits();
    for (auto& e : elements) {
      if (e.term.n_qubits() != basis.n_) throw SizeMismatch("basis elements have different widths");
      e.term.set_phase_exp(0);
      if (!basis.index_.try_emplace(e.term, basis.elements_.size()).second) {
        throw std::invalid_argument("duplicate basis element '" + e.term.label() + "'");
      }
      basis.K_ = std::max(basis.K_, e.level);
      basis.elements_.push_back(std::move(e));
    }
    basis.frozen_ = true;
    return basis;
  }

  /// Adds level K+1. Returns the number of new elements; zero means the
  /// moment space closed at the current K.
  std::size_t extend_one_level() {
    if (frozen_) throw std::logic_error("cannot extend a basis built from an explicit element list");
    if (closure_) return 0;
    if (is_saturated()) return 0;
    const std::size_t frontier_end = elements_.size();
    for (std::size_t e = level_begin_; e < frontier_end; ++e) {
      for (std::size_t g = 0; g < generators_.size(); ++g) {
        if (cap_ && elements_.size() >= *cap_) break;
        PauliTerm term = multiply(generators_[g], elements_[e].term);
        term.set_phase_exp(0);
        if (index_.contains(term)) continue;
        index_.emplace(term, elements_.size());
        std::vector<std::uint32_t> word = elements_[e].word;
        word.push_back(static_cast<std::uint32_t>(g));
        elements_.push_back({std::move(term), std::move(word), K_ + 1});
      }
    }
    const std::size_t added = elements_.size() - frontier_end;
    if (added == 0) {
      closure_ = K_;
      return 0;
    }
    level_begin_ = frontier_end;
    K_ += 1;
    return added;
  }

  /// Smallest k whose next level added nothing, when that has been observed.
  std::optional<std::size_t> closure_order() const { return closure_; }

  const std::vector<PauliTerm>& generators() const { return generators_; }
  const std::vector<BasisElement>& elements() const { return elements_; }
  const BasisElement& operator[](std::size_t i) const { return elements_[i]; }
  std::size_t size() const { return elements_.size(); }
  std::size_t K() const { return K_; }
  std::size_t n_qubits() const { return n_; }
  std::optional<std::size_t> cap() const { return cap_; }
  bool is_saturated() const { return cap_ && elements_.size() >= *cap_; }

  std::optional<std::size_t> find(const PauliTerm& term) const {
    auto it = index_.find(term.dephased());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// First m elements, as a frozen basis.
  MomentBasis prefix(std::size_t m) const {
    if (m == 0 || m > elements_.size()) throw std::out_of_range("prefix length out of range");
    return from_elements(generators_, {elements_.begin(), elements_.begin() + static_cast<std::ptrdiff_t>(m)});
  }

  /// Elements at the given indices, in the given order, as a frozen basis.
  MomentBasis select(const std::vector<std::size_t>& indices) const {
    std::vector<BasisElement> picked;
    picked.reserve(indices.size());
    for (std::size_t i : indices) {
      if (i >= elements_.size()) throw std::out_of_range("basis index " + std::to_string(i) + " out of range");
      picked.push_back(elements_[i]);
    }
    return from_elements(generators_, std::move(picked));
  }

 private:
  MomentBasis(const std::vector<PauliTerm>& generators, std::optional<std::size_t> cap)
      : generators_(generators), cap_(cap) {
    if (generators_.empty()) throw std::invalid_argument("moment basis needs at least one generator");
    if (cap_ && *cap_ == 0) throw std::invalid_argument("basis cap must be positive");
    n_ = generators_.front().n_qubits();
    for (auto& g : generators_) {
      if (g.n_qubits() != n_) throw SizeMismatch("generators have different widths");
      if (!g.is_hermitian()) throw std::invalid_argument("generator '" + g.label() + "' is not Hermitian");
      g.set_phase_exp(0);
    }
    PauliTerm identity(n_);
    index_.emplace(identity, 0);
    elements_.push_back({std::move(identity), {}, 0});
  }

  std::vector<PauliTerm> generators_;
  std::vector<BasisElement> elements_;
  std::unordered_map<PauliTerm, std::size_t, PauliTermHash> index_;
  std::optional<std::size_t> cap_;
  std::optional<std::size_t> closure_;
  std::size_t n_ = 0;
  std::size_t K_ = 0;
  std::size_t level_begin_ = 0;
  bool frozen_ = false;
};

}  // namespace iqae
