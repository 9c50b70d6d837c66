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

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "iqae/error.hpp"
#include "iqae/pauli.hpp"
#include "iqae/rng.hpp"

namespace iqae::models {

namespace detail {

inline void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

inline PauliTerm pair_term(std::size_t n, std::size_t a, std::size_t b, char f) {
  return PauliTerm::from_factors(n, {{a, f}, {b, f}});
}

inline void push_nonzero(std::vector<HamiltonianTerm>& terms, double beta, PauliTerm t) {
  if (beta != 0.0) terms.push_back({beta, std::move(t)});
}

inline std::size_t bond_count(std::size_t n, bool periodic) { return periodic ? n : n - 1; }

}  // namespace detail

/// (J/2) sum_i X_i X_{i+1} - h sum_i Z_i; zero-coefficient terms are omitted.
inline PauliHamiltonian ising(std::size_t N, double J, double h, bool periodic = true) {
  detail::require(N >= 2, "ising needs N >= 2");
  std::vector<HamiltonianTerm> terms;
  for (std::size_t i = 0; i < detail::bond_count(N, periodic); ++i) {
    detail::push_nonzero(terms, J / 2, detail::pair_term(N, i, (i + 1) % N, 'X'));
  }
  for (std::size_t i = 0; i < N; ++i) detail::push_nonzero(terms, -h, PauliTerm::from_factors(N, {{i, 'Z'}}));
  return PauliHamiltonian(N, terms);
}

/// 1/2 sum_i (1 - Z_i Z_{i+1}) on a ring; the constant is an identity term.
inline PauliHamiltonian ring_of_disagrees(std::size_t N) {
  detail::require(N >= 3, "ring_of_disagrees needs N >= 3");
  std::vector<HamiltonianTerm> terms{{0.5 * static_cast<double>(N), PauliTerm(N)}};
  for (std::size_t i = 0; i < N; ++i) terms.push_back({-0.5, detail::pair_term(N, i, (i + 1) % N, 'Z')});
  return PauliHamiltonian(N, terms);
}

/// 1/2 sum_i (X_i X_{i+1} + Y_i Y_{i+1} + delta Z_i Z_{i+1}).
inline PauliHamiltonian xxz(std::size_t N, double delta, bool periodic = true) {
  detail::require(N >= 2, "xxz needs N >= 2");
  std::vector<HamiltonianTerm> terms;
  const std::size_t bonds = detail::bond_count(N, periodic);
  for (char f : {'X', 'Y'}) {
    for (std::size_t i = 0; i < bonds; ++i) terms.push_back({0.5, detail::pair_term(N, i, (i + 1) % N, f)});
  }
  for (std::size_t i = 0; i < bonds; ++i) detail::push_nonzero(terms, 0.5 * delta, detail::pair_term(N, i, (i + 1) % N, 'Z'));
  return PauliHamiltonian(N, terms);
}

/// Two-qubit hydrogen model 0.4 Z_1 + 0.4 Z_2 + 0.2 X_1 X_2.
inline PauliHamiltonian h2(double b1 = 0.4, double b2 = 0.4, double b3 = 0.2) {
  return PauliHamiltonian(2, {{b1, PauliTerm::parse("ZI")}, {b2, PauliTerm::parse("IZ")}, {b3, PauliTerm::parse("XX")}});
}

/// r distinct non-identity strings drawn uniformly from {I,X,Y,Z}^N with
/// coefficients uniform on [-1, 1].
inline PauliHamiltonian random_pauli(std::size_t N, std::size_t r, std::uint64_t seed) {
  detail::require(N >= 1, "random_pauli needs N >= 1");
  detail::require(r >= 1, "random_pauli needs r >= 1");
  if (2 * N < 64) {
    const std::uint64_t available = (std::uint64_t{1} << (2 * N)) - 1;
    detail::require(r <= available, "random_pauli: r = " + std::to_string(r) + " exceeds the " +
                                        std::to_string(available) + " non-identity strings on " + std::to_string(N) +
                                        " qubits");
  }
  SplitMix64 rng(derive_key(seed, {0x7270u, N, r}));
  static constexpr char kFactors[4] = {'I', 'X', 'Y', 'Z'};
  std::unordered_set<PauliTerm, PauliTermHash> seen;
  std::vector<HamiltonianTerm> terms;
  while (terms.size() < r) {
    PauliTerm t(N);
    for (std::size_t q = 0; q < N; ++q) t.set_factor(q, kFactors[rng.below(4)]);
    if (t.is_identity_string() || !seen.insert(t).second) continue;
    terms.push_back({rng.uniform(-1.0, 1.0), std::move(t)});
  }
  return PauliHamiltonian(N, terms);
}

/// Z_1 Z_2 embedded in N qubits.
inline PauliHamiltonian barren_plateau_toy(std::size_t N) {
  detail::require(N >= 2, "barren_plateau_toy needs N >= 2");
  return PauliHamiltonian(N, {{1.0, detail::pair_term(N, 0, 1, 'Z')}});
}

/// Named model with numeric parameters, as read from a run config.
struct ModelSpec {
  std::string name;
  std::map<std::string, double> parameters;
  bool periodic = true;
};

namespace detail {

inline double param(const ModelSpec& spec, const std::string& key, std::optional<double> fallback = std::nullopt) {
  auto it = spec.parameters.find(key);
  if (it != spec.parameters.end()) return it->second;
  if (fallback) return *fallback;
  throw ConfigError("model." + key + " is required for model '" + spec.name + "'");
}

inline std::size_t count_param(const ModelSpec& spec, const std::string& key) {
  const double v = param(spec, key);
  if (!(v >= 0) || v != std::floor(v)) throw ConfigError("model." + key + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

inline void only_keys(const ModelSpec& spec, std::set<std::string> allowed) {
  for (const auto& [k, v] : spec.parameters) {
    if (!allowed.contains(k)) throw ConfigError("model." + k + " is not a parameter of model '" + spec.name + "'");
  }
}

}  // namespace detail

inline const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"ising", "ring_of_disagrees", "xxz", "h2", "random_pauli",
                                              "barren_plateau_toy"};
  return names;
}

/// Builds a model; errors are ConfigError naming the offending field.
inline PauliHamiltonian build_model(const ModelSpec& spec) {
  try {
    if (spec.name == "ising") {
      detail::only_keys(spec, {"N", "J", "h"});
      return ising(detail::count_param(spec, "N"), detail::param(spec, "J"), detail::param(spec, "h"),
                   spec.periodic);
    }
    if (spec.name == "ring_of_disagrees") {
      detail::only_keys(spec, {"N"});
      return ring_of_disagrees(detail::count_param(spec, "N"));
    }
    if (spec.name == "xxz") {
      detail::only_keys(spec, {"N", "delta"});
      return xxz(detail::count_param(spec, "N"), detail::param(spec, "delta"), spec.periodic);
    }
    if (spec.name == "h2") {
      detail::only_keys(spec, {"beta1", "beta2", "beta3"});
      return h2(detail::param(spec, "beta1", 0.4), detail::param(spec, "beta2", 0.4), detail::param(spec, "beta3", 0.2));
    }
    if (spec.name == "random_pauli") {
      detail::only_keys(spec, {"N", "r", "seed"});
      return random_pauli(detail::count_param(spec, "N"), detail::count_param(spec, "r"),
                          static_cast<std::uint64_t>(detail::count_param(spec, "seed")));
    }
    if (spec.name == "barren_plateau_toy") {
      detail::only_keys(spec, {"N"});
      return barren_plateau_toy(detail::count_param(spec, "N"));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  throw ConfigError("model.name '" + spec.name + "' is not a known model");
}

}  // namespace iqae::models
