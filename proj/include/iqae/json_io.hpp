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

// JSON documents for bases, measurement plans, solutions and overlap sets.
// Complex numbers are [re, im] pairs; matrices are arrays of rows.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "iqae/eigensolver.hpp"
#include "iqae/grouping.hpp"
#include "iqae/moment_basis.hpp"
#include "iqae/overlap.hpp"
#include "iqae/pauli.hpp"

namespace iqae::io {

using json = nlohmann::ordered_json;

inline json to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

inline std::complex<double> complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex value must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

inline json to_json(const Eigen::MatrixXcd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline Eigen::MatrixXcd matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols) throw std::invalid_argument("ragged matrix in JSON");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

inline json to_json(const MomentBasis& basis) {
  json out = json::array();
  for (const auto& e : basis.elements()) {
    out.push_back({{"label", e.term.label()}, {"word", e.word}, {"level", e.level}});
  }
  return out;
}

inline MomentBasis basis_from_json(const json& j, const std::vector<PauliTerm>& generators) {
  std::vector<BasisElement> elements;
  for (const auto& e : j) {
    elements.push_back({PauliTerm::parse(e.at("label").get<std::string>()),
                        e.at("word").get<std::vector<std::uint32_t>>(), e.at("level").get<std::size_t>()});
  }
  return MomentBasis::from_elements(generators, std::move(elements));
}

inline json to_json(const PauliHamiltonian& h) {
  json out = json::array();
  for (const auto& [beta, term] : h.terms()) out.push_back({{"beta", beta}, {"label", term.label()}});
  return out;
}

inline PauliHamiltonian hamiltonian_from_json(const json& j) {
  std::vector<HamiltonianTerm> terms;
  for (const auto& t : j) terms.push_back({t.at("beta").get<double>(), PauliTerm::parse(t.at("label").get<std::string>())});
  if (terms.empty()) throw std::invalid_argument("Hamiltonian JSON has no terms");
  return PauliHamiltonian(terms.front().term.n_qubits(), terms);
}

inline json to_json(const MeasurementPlan& plan) {
  json bases = json::array();
  for (const auto& b : plan.per_group_basis) bases.push_back(b.label());
  return {{"groups", plan.groups}, {"bases", bases}};
}

inline json to_json(const IterationRecord& r) {
  return {{"K", r.K},
          {"energy", r.energy},
          {"delta", r.delta ? json(*r.delta) : json(nullptr)},
          {"basis_size", r.basis_size},
          {"retained_rank", r.retained_rank},
          {"degenerate", r.degenerate}};
}

inline json to_json(const GroundStateSolution& s) {
  json trace = json::array();
  for (const auto& r : s.trace) trace.push_back(to_json(r));
  return {{"energy", s.energy},
          {"alpha", to_json(s.alpha)},
          {"retained_rank", s.retained_rank},
          {"degenerate", s.degenerate},
          {"stop", to_string(s.stop)},
          {"trace", trace}};
}

/// {basis, hamiltonian, E, D_terms, provenance, exact}. Only factored sets
/// can be written, since offline use means recombining.
inline json to_json(const OverlapSet& set) {
  if (!set.factored()) throw std::invalid_argument("only factored overlap sets can be serialized");
  json D = json::array();
  for (const auto& Dk : set.D_terms) D.push_back(to_json(Dk));
  json gens = json::array();
  for (const auto& g : set.basis.generators()) gens.push_back(g.label());
  return {{"generators", gens},      {"basis", to_json(set.basis)}, {"hamiltonian", to_json(set.hamiltonian)},
          {"E", to_json(set.E)},     {"D_terms", D},                {"provenance", set.provenance},
          {"exact", set.exact}};
}

inline OverlapSet overlap_from_json(const json& j) {
  OverlapSet set;
  std::vector<PauliTerm> gens;
  for (const auto& g : j.at("generators")) gens.push_back(PauliTerm::parse(g.get<std::string>()));
  set.basis = basis_from_json(j.at("basis"), gens);
  set.hamiltonian = hamiltonian_from_json(j.at("hamiltonian"));
  set.E = matrix_from_json(j.at("E"));
  for (const auto& Dk : j.at("D_terms")) set.D_terms.push_back(matrix_from_json(Dk));
  set.provenance = j.at("provenance").get<std::string>();
  set.exact = j.at("exact").get<bool>();
  const auto dim = static_cast<Eigen::Index>(set.basis.size());
  if (set.E.rows() != dim || set.D_terms.size() != set.hamiltonian.size()) {
    throw std::invalid_argument("overlap JSON dimensions are inconsistent");
  }
  for (const auto& Dk : set.D_terms) {
    if (Dk.rows() != dim || Dk.cols() != dim) throw std::invalid_argument("overlap JSON D matrix has the wrong size");
  }
  return set;
}

}  // namespace iqae::io
