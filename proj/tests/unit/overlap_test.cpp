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

#include <gtest/gtest.h>

#include <set>

#include "iqae/backends.hpp"
#include "iqae/models.hpp"
#include "iqae/oracles.hpp"
#include "iqae/overlap.hpp"
#include "support.hpp"

using iqae::ExactBackend;
using iqae::MomentBasis;
using iqae::PauliTerm;
using iqae::ReferenceState;
using iqae::SplitMix64;

namespace {

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Overlaps from explicit dense basis vectors.
struct DenseOverlaps {
  Eigen::MatrixXcd E;
  Eigen::MatrixXcd D;
};

DenseOverlaps dense_overlaps(const MomentBasis& basis, const iqae::PauliHamiltonian& h, const Eigen::VectorXcd& psi) {
  Eigen::MatrixXcd states(psi.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    states.col(static_cast<Eigen::Index>(i)) = iqae::oracle::dense_pauli(basis[i].term) * psi;
  }
  const Eigen::MatrixXcd H = iqae::oracle::dense_hamiltonian(h);
  return {states.adjoint() * states, states.adjoint() * H * states};
}

class CountingBackend : public iqae::ExpectationBackend {
 public:
  explicit CountingBackend(const ReferenceState& s) : inner_(s) {}
  std::size_t n_qubits() const override { return inner_.n_qubits(); }
  std::string descriptor() const override { return "counting"; }
  std::multiset<std::string> seen;

 protected:
  std::vector<double> do_evaluate(std::span<const PauliTerm> strings) override {
    for (const auto& s : strings) seen.insert(s.label());
    return inner_.evaluate(strings);
  }

 private:
  ExactBackend inner_;
};

class FailingBackend : public iqae::ExpectationBackend {
 public:
  std::size_t n_qubits() const override { return 2; }
  std::string descriptor() const override { return "failing"; }

 protected:
  std::vector<double> do_evaluate(std::span<const PauliTerm> strings) override {
    for (const auto& s : strings) {
      if (s.label() == "XX") throw std::runtime_error("device offline");
    }
    return std::vector<double>(strings.size(), 0.0);
  }
};

}  // namespace

TEST(ReduceEntry, Examples) {
  const auto same = iqae::reduce_entry(PauliTerm::parse("XZ"), PauliTerm::parse("XZ"));
  EXPECT_EQ(same.prefactor_exp, 0);
  EXPECT_EQ(same.reduced, PauliTerm(2));

  const auto xz = iqae::reduce_entry(PauliTerm::parse("X"), PauliTerm::parse("Z"), PauliTerm::parse("I"));
  EXPECT_EQ(xz.prefactor(), std::complex<double>(0, -1));
  EXPECT_EQ(xz.reduced.label(), "Y");

  const auto zz = iqae::reduce_entry(PauliTerm::parse("ZI"), PauliTerm::parse("IZ"));
  EXPECT_EQ(zz.prefactor_exp, 0);
  EXPECT_EQ(zz.reduced.label(), "ZZ");
  EXPECT_THROW(iqae::reduce_entry(PauliTerm::parse("ZI"), PauliTerm::parse("Z")), iqae::SizeMismatch);
}

TEST(Assemble, HydrogenFromZeroStateHasRankTwo) {
  const auto h = iqae::models::h2();
  const MomentBasis b = MomentBasis::build(h.generators(), 1);
  ExactBackend backend(ReferenceState::basis_state(2));
  const auto set = iqae::assemble(b, h, backend);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(set.E);
  qr.setThreshold(1e-10);
  EXPECT_EQ(qr.rank(), 2);
  const auto dense = dense_overlaps(b, h, iqae::oracle::to_vector(ReferenceState::basis_state(2).statevector()));
  EXPECT_LT(max_diff(set.E, dense.E), 1e-14);
}

TEST(Assemble, BarrenToyOverlaps) {
  const auto h = iqae::models::barren_plateau_toy(4);
  const auto state = iqae::prepare_hardware_efficient(4, 30, 2);
  ExactBackend backend(state);
  const auto set = iqae::assemble(MomentBasis::build(h.generators(), 1), h, backend);
  const double zz = iqae::expectation_exact(state, PauliTerm::parse("ZZII"));
  ASSERT_EQ(set.dimension(), 2u);
  const Eigen::MatrixXcd D = set.D_assembled();
  EXPECT_NEAR(std::abs(D(0, 0) - zz), 0, 1e-14);
  EXPECT_NEAR(std::abs(D(1, 1) - zz), 0, 1e-14);
  EXPECT_NEAR(std::abs(D(0, 1) - 1.0), 0, 1e-14);
  EXPECT_NEAR(std::abs(D(1, 0) - 1.0), 0, 1e-14);
  EXPECT_EQ(iqae::unique_string_count(MomentBasis::build(h.generators(), 1), h), 2u);
}

TEST(Assemble, MatchesDenseGramConstruction) {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const auto h = iqae::models::random_pauli(n, 1 + rng.below(std::min<std::size_t>(5, (1u << (2 * n)) - 1)), trial);
    const auto state = iqae::prepare_hardware_efficient(n, 8, trial);
    ExactBackend backend(state);
    const MomentBasis b = MomentBasis::build(h.generators(), rng.below(3), 40);
    const auto set = iqae::assemble(b, h, backend);
    const auto dense = dense_overlaps(b, h, iqae::oracle::to_vector(state.amplitudes()));
    EXPECT_LT(max_diff(set.E, dense.E), 1e-10);
    EXPECT_LT(max_diff(set.D_assembled(), dense.D), 1e-10);
    for (Eigen::Index i = 0; i < set.E.rows(); ++i) EXPECT_NEAR(set.E(i, i).real(), 1.0, 1e-12);
    EXPECT_EQ(max_diff(set.E, set.E.adjoint()), 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(set.E);
    EXPECT_GE(eig.eigenvalues()[0], -1e-10);
  }
}

TEST(Assemble, LowerTriangleAgreesBeforeMirroring) {
  const auto h = iqae::models::ising(4, 1.0, 0.3);
  const auto state = iqae::prepare_hardware_efficient(4, 12, 9);
  ExactBackend backend(state);
  const MomentBasis b = MomentBasis::build(h.generators(), 2);
  double worst = 0;
  for (std::size_t n = 0; n < b.size(); ++n) {
    for (std::size_t m = 0; m < n; ++m) {
      for (const auto& [beta, U] : h.terms()) {
        const auto lower = iqae::reduce_entry(b[n], U, b[m]);
        const auto upper = iqae::reduce_entry(b[m], U, b[n]);
        const auto lv = lower.prefactor() * backend.evaluate(lower.reduced);
        const auto uv = upper.prefactor() * backend.evaluate(upper.reduced);
        worst = std::max(worst, std::abs(lv - std::conj(uv)));
      }
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Assemble, EachDistinctStringEvaluatedOnce) {
  const auto h = iqae::models::ising(5, 1.0, 0.5);
  CountingBackend backend(iqae::prepare_hardware_efficient(5, 10, 1));
  const MomentBasis b = MomentBasis::build(h.generators(), 2);
  const auto set = iqae::assemble(b, h, backend);
  for (const auto& label : backend.seen) EXPECT_EQ(backend.seen.count(label), 1u) << label;
  EXPECT_EQ(backend.seen.size(), set.cache.size());
  EXPECT_EQ(set.cache.size(), iqae::unique_string_count(b, h));
}

TEST(Assemble, UniqueCountMatchesBruteForce) {
  const auto h = iqae::models::h2();
  const MomentBasis b = MomentBasis::build(h.generators(), 1);
  std::set<std::string> brute;
  for (std::size_t n = 0; n < b.size(); ++n) {
    for (std::size_t m = 0; m < b.size(); ++m) {
      brute.insert((b[n].term * b[m].term).dephased().label());
      for (const auto& t : h.terms()) brute.insert((b[n].term * t.term * b[m].term).dephased().label());
    }
  }
  EXPECT_EQ(iqae::unique_string_count(b, h), brute.size());
  const MomentBasis single = MomentBasis::build(h.generators(), 0);
  EXPECT_EQ(iqae::unique_string_count(single, iqae::PauliHamiltonian(2, {{1.0, PauliTerm::parse("XX")}})), 2u);
}

TEST(Assemble, ExtendReusesEarlierEntries) {
  const auto h = iqae::models::ising(5, 1.0, 0.5);
  const auto state = iqae::prepare_hardware_efficient(5, 10, 4);
  ExactBackend backend(state);
  MomentBasis b = MomentBasis::build(h.generators(), 1);
  auto grown = iqae::assemble(b, h, backend, {.factored = false});
  b.extend_one_level();
  const std::size_t before = backend.call_count();
  iqae::extend(grown, b, backend);
  const std::size_t incremental_calls = backend.call_count() - before;
  ExactBackend fresh_backend(state);
  const auto fresh = iqae::assemble(b, h, fresh_backend, {.factored = false});
  EXPECT_LT(incremental_calls, fresh_backend.call_count());
  EXPECT_LT(max_diff(grown.E, fresh.E), 1e-14);
  EXPECT_LT(max_diff(*grown.D_fixed, *fresh.D_fixed), 1e-13);
  EXPECT_THROW(iqae::extend(grown, MomentBasis::build(iqae::models::h2().generators(), 1), backend), std::exception);
}

TEST(Recombine, LinearAndBackendFree) {
  const auto h = iqae::models::ising(4, 1.0, 0.5);
  ExactBackend backend(iqae::prepare_hardware_efficient(4, 10, 6));
  const auto set = iqae::assemble(MomentBasis::build(h.generators(), 2), h, backend);
  const std::size_t calls = backend.call_count();
  SplitMix64 rng(2);
  std::vector<double> b1(h.size());
  std::vector<double> b2(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    b1[k] = rng.uniform(-1, 1);
    b2[k] = rng.uniform(-1, 1);
  }
  const double a = 0.7;
  const double c = -1.3;
  std::vector<double> mix(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) mix[k] = a * b1[k] + c * b2[k];
  const auto D1 = iqae::recombine_D(set, b1);
  const auto D2 = iqae::recombine_D(set, b2);
  EXPECT_LT(max_diff(iqae::recombine_D(set, mix), a * D1 + c * D2), 1e-13);
  EXPECT_EQ(iqae::recombine_D(set, std::vector<double>(h.size(), 0.0)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(max_diff(D1, D1.adjoint()), 0.0);
  EXPECT_EQ(backend.call_count(), calls);
  EXPECT_THROW(iqae::recombine_D(set, std::vector<double>{1.0}), iqae::SizeMismatch);
}

TEST(Recombine, MatchesFreshAssemblyAtNewField) {
  const auto h_half = iqae::models::ising(8, 1.0, 0.5);
  const auto h_two = iqae::models::ising(8, 1.0, 2.0);
  const auto state = iqae::prepare_hardware_efficient(8, 20, 3);
  ExactBackend backend(state);
  const MomentBasis b = MomentBasis::build(h_half.generators(), 1);
  const auto set = iqae::assemble(b, h_half, backend);
  ExactBackend backend2(state);
  const auto fresh = iqae::assemble(b, h_two, backend2);
  EXPECT_LT(max_diff(iqae::recombine_D(set, h_two.coefficients_on(set.hamiltonian)), fresh.D_assembled()), 1e-12);
}

TEST(Assemble, BackendErrorNamesEntry) {
  const auto h = iqae::models::h2();
  FailingBackend backend;
  try {
    iqae::assemble(MomentBasis::build(h.generators(), 1), h, backend);
    FAIL() << "expected failure";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("XX"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("("), std::string::npos);
  }
}

TEST(Assemble, SampledCacheReusedAcrossEntries) {
  const auto h = iqae::models::ising(4, 1.0, 0.5);
  const auto state = iqae::prepare_hardware_efficient(4, 10, 8);
  auto inner = std::make_shared<ExactBackend>(state);
  iqae::SampledBackend sampled(inner, {256, 5, true});
  const MomentBasis b = MomentBasis::build(h.generators(), 2);
  const auto set = iqae::assemble(b, h, sampled);
  EXPECT_FALSE(set.exact);
  EXPECT_EQ(sampled.call_count(), set.cache.size());
  EXPECT_EQ(max_diff(set.E, set.E.adjoint()), 0.0);
  for (Eigen::Index i = 0; i < set.E.rows(); ++i) EXPECT_EQ(set.E(i, i), std::complex<double>(1.0));
}
