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

#include <sstream>

#include "iqae/oracles.hpp"
#include "iqae/pauli.hpp"
#include "support.hpp"

using iqae::PauliHamiltonian;
using iqae::PauliTerm;
using iqae::SplitMix64;

namespace {

// Single-qubit product table, written out by hand: returns (phase, factor).
std::pair<int, char> table(char a, char b) {
  if (a == 'I') return {0, b};
  if (b == 'I') return {0, a};
  if (a == b) return {0, 'I'};
  if (a == 'X' && b == 'Y') return {1, 'Z'};
  if (a == 'Y' && b == 'Z') return {1, 'X'};
  if (a == 'Z' && b == 'X') return {1, 'Y'};
  if (a == 'Y' && b == 'X') return {3, 'Z'};
  if (a == 'Z' && b == 'Y') return {3, 'X'};
  return {3, 'Y'};  // X * Z
}

PauliTerm naive_multiply(const PauliTerm& a, const PauliTerm& b) {
  PauliTerm out(a.n_qubits());
  int phase = a.phase_exp() + b.phase_exp();
  for (std::size_t q = 0; q < a.n_qubits(); ++q) {
    auto [p, f] = table(a.factor(q), b.factor(q));
    phase += p;
    out.set_factor(q, f);
  }
  out.set_phase_exp(phase);
  return out;
}

double dense_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(PauliMultiply, SingleQubitXY) {
  const PauliTerm r = PauliTerm::parse("X") * PauliTerm::parse("Y");
  EXPECT_EQ(r.label(), "iZ");
  EXPECT_EQ(r.phase_exp(), 1);
}

TEST(PauliMultiply, SquareIsIdentity) {
  const PauliTerm r = PauliTerm::parse("XX") * PauliTerm::parse("XX");
  EXPECT_EQ(r, PauliTerm(2));
}

TEST(PauliMultiply, ZXTimesXZ) {
  const PauliTerm r = PauliTerm::parse("ZX") * PauliTerm::parse("XZ");
  EXPECT_EQ(r.label(), "YY");
}

TEST(PauliMultiply, WidthMismatchThrows) {
  EXPECT_THROW(PauliTerm::parse("XX") * PauliTerm::parse("X"), iqae::SizeMismatch);
  EXPECT_THROW(iqae::commutes_qubitwise(PauliTerm::parse("XX"), PauliTerm::parse("X")), iqae::SizeMismatch);
}

TEST(PauliAdjoint, Examples) {
  EXPECT_EQ(iqae::adjoint(PauliTerm::parse("iZ")).label(), "-iZ");
  EXPECT_EQ(iqae::adjoint(PauliTerm::parse("X")).label(), "X");
  EXPECT_EQ(iqae::adjoint(PauliTerm(3)), PauliTerm(3));
}

TEST(PauliLabel, MasksFollowQubitOrder) {
  const PauliTerm t = PauliTerm::parse("XIZY");
  EXPECT_EQ(t.x().low_word(), 0b1001u);
  EXPECT_EQ(t.z().low_word(), 0b1100u);
  EXPECT_EQ(t.phase_exp(), 0);
  EXPECT_TRUE(t.is_hermitian());
}

TEST(PauliLabel, NegativeImaginaryPrefix) {
  const PauliTerm t = PauliTerm::parse("-iZZ");
  EXPECT_EQ(t.phase_exp(), 3);
  EXPECT_EQ(t.z().low_word(), 0b11u);
  EXPECT_EQ(t.x().low_word(), 0u);
  EXPECT_EQ(PauliTerm::parse("+X").label(), "X");
}

TEST(PauliLabel, MalformedReportsPosition) {
  try {
    PauliTerm::parse("XQ");
    FAIL() << "expected a parse error";
  } catch (const iqae::ParseError& e) {
    EXPECT_EQ(e.position(), 1u);
  }
  EXPECT_THROW(PauliTerm::parse(""), iqae::ParseError);
  EXPECT_THROW(PauliTerm::parse("-i"), iqae::ParseError);
}

TEST(PauliLabel, RoundTripRandom) {
  SplitMix64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + rng.below(150);
    const PauliTerm t = iqae::testing::random_term(n, rng, true);
    EXPECT_EQ(PauliTerm::parse(t.label()), t);
  }
}

TEST(PauliCommute, QubitwiseExamples) {
  EXPECT_TRUE(iqae::commutes_qubitwise(PauliTerm::parse("ZZ"), PauliTerm::parse("ZI")));
  EXPECT_FALSE(iqae::commutes_qubitwise(PauliTerm::parse("XX"), PauliTerm::parse("ZZ")));
  EXPECT_TRUE(iqae::commutes_qubitwise(PauliTerm::parse("XI"), PauliTerm::parse("IZ")));
  // XX and ZZ commute as operators but not qubit-wise.
  EXPECT_TRUE(iqae::commutes(PauliTerm::parse("XX"), PauliTerm::parse("ZZ")));
}

TEST(PauliProperties, ProductMatchesDenseMatrices) {
  SplitMix64 rng(1);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      const PauliTerm a = iqae::testing::random_term(n, rng, true);
      const PauliTerm b = iqae::testing::random_term(n, rng, true);
      const PauliTerm c = a * b;
      ASSERT_GE(c.phase_exp(), 0);
      ASSERT_LE(c.phase_exp(), 3);
      const Eigen::MatrixXcd dense = iqae::oracle::dense_pauli(a) * iqae::oracle::dense_pauli(b);
      EXPECT_LT(dense_distance(dense, iqae::oracle::dense_pauli(c)), 1e-14) << a.label() << " * " << b.label();
    }
  }
}

TEST(PauliProperties, CommutesMatchesDenseCommutator) {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(4);
    const PauliTerm a = iqae::testing::random_term(n, rng);
    const PauliTerm b = iqae::testing::random_term(n, rng);
    const Eigen::MatrixXcd A = iqae::oracle::dense_pauli(a);
    const Eigen::MatrixXcd B = iqae::oracle::dense_pauli(b);
    EXPECT_EQ(iqae::commutes(a, b), (A * B - B * A).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST(PauliProperties, GroupLaws) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(130);
    const PauliTerm a = iqae::testing::random_term(n, rng, true);
    const PauliTerm b = iqae::testing::random_term(n, rng, true);
    const PauliTerm c = iqae::testing::random_term(n, rng, true);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * PauliTerm(n), a);
    EXPECT_EQ(PauliTerm(n) * a, a);
    EXPECT_EQ(a * iqae::adjoint(a), PauliTerm(n));
    EXPECT_EQ(iqae::adjoint(iqae::adjoint(a)), a);
    const PauliTerm h = a.dephased();
    EXPECT_EQ(h * h, PauliTerm(n));
    EXPECT_EQ(a * b, naive_multiply(a, b));
  }
}

TEST(PauliProperties, WideMasksAcrossWordBoundary) {
  const std::size_t n = 200;
  PauliTerm a = PauliTerm::from_factors(n, {{63, 'X'}, {64, 'Y'}, {199, 'Z'}});
  PauliTerm b = PauliTerm::from_factors(n, {{63, 'Y'}, {64, 'Z'}, {199, 'X'}});
  const PauliTerm c = a * b;
  EXPECT_EQ(c.phase_exp(), 3);  // i * i * i
  EXPECT_EQ(c.factor(63), 'Z');
  EXPECT_EQ(c.factor(64), 'X');
  EXPECT_EQ(c.factor(199), 'Y');
  EXPECT_EQ(c.support().count(), 3u);
}

TEST(PauliHamiltonianTest, MergesDuplicates) {
  const PauliHamiltonian h(2, {{0.5, PauliTerm::parse("XX")}, {0.25, PauliTerm::parse("ZI")}, {0.5, PauliTerm::parse("XX")}});
  ASSERT_EQ(h.size(), 2u);
  EXPECT_DOUBLE_EQ(h[0].beta, 1.0);
  EXPECT_EQ(h[1].term.label(), "ZI");
}

TEST(PauliHamiltonianTest, RejectsPhasedAndMixedWidths) {
  EXPECT_THROW(PauliHamiltonian(2, {{1.0, PauliTerm::parse("-XX")}}), std::invalid_argument);
  EXPECT_THROW(PauliHamiltonian(2, {{1.0, PauliTerm::parse("XXX")}}), iqae::SizeMismatch);
}

TEST(PauliHamiltonianTest, TextFormat) {
  const std::string text =
      "# two-site model\n"
      "0.5 XXIIIIII\n"
      "\n"
      "-1 -ZIIIIIII   # sign folds into the coefficient\n";
  const PauliHamiltonian h = PauliHamiltonian::parse_text(text);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h.n_qubits(), 8u);
  EXPECT_DOUBLE_EQ(h[1].beta, 1.0);
  const PauliHamiltonian again = PauliHamiltonian::parse_text(h.to_text());
  EXPECT_EQ(again.to_text(), h.to_text());
  EXPECT_THROW(PauliHamiltonian::parse_text("1.0 iXX\n"), iqae::ParseError);
  EXPECT_THROW(PauliHamiltonian::parse_text("abc XX\n"), iqae::ParseError);
  EXPECT_THROW(PauliHamiltonian::parse_text("# nothing\n"), iqae::ParseError);
}

TEST(PauliHamiltonianTest, CoefficientsOnLayout) {
  const PauliHamiltonian layout(2, {{1.0, PauliTerm::parse("XX")}, {1.0, PauliTerm::parse("ZI")}});
  const PauliHamiltonian sub(2, {{3.0, PauliTerm::parse("ZI")}});
  EXPECT_EQ(sub.coefficients_on(layout), (std::vector<double>{0.0, 3.0}));
  const PauliHamiltonian other(2, {{3.0, PauliTerm::parse("YY")}});
  EXPECT_THROW(other.coefficients_on(layout), std::invalid_argument);
}
