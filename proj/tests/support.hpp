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


// Helpers shared by the unit and acceptance suites.

#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "iqae/backends.hpp"
#include "iqae/eigensolver.hpp"
#include "iqae/overlap.hpp"
#include "iqae/pauli.hpp"
#include "iqae/rng.hpp"

namespace iqae::testing {

inline PauliTerm random_term(std::size_t n, SplitMix64& rng, bool random_phase = false) {
  static constexpr char kFactors[4] = {'I', 'X', 'Y', 'Z'};
  PauliTerm t(n);
  for (std::size_t q = 0; q < n; ++q) t.set_factor(q, kFactors[rng.below(4)]);
  if (random_phase) t.set_phase_exp(static_cast<int>(rng.below(4)));
  return t;
}

inline PauliTerm random_non_identity(std::size_t n, SplitMix64& rng) {
  PauliTerm t(n);
  do {
    t = random_term(n, rng);
  } while (t.is_identity_string());
  return t;
}

/// Haar-random pure state of the given dimension.
inline Eigen::VectorXcd haar_state(Eigen::Index dim, SplitMix64& rng) {
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = {rng.normal(), rng.normal()};
  return v / v.norm();
}

inline std::vector<std::complex<double>> to_std(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

struct GradientCheck {
  double analytic = 0.0;
  double finite_difference = 0.0;
  /// d(alpha^dag E alpha)/dtheta from the returned d alpha.
  double norm_drift = 0.0;
};

inline OverlapSet ry_cnot_overlaps(const MomentBasis& basis, const PauliHamiltonian& h, const std::array<double, 4>& t) {
  ExactBackend backend(prepare_ry_cnot(t));
  return assemble(basis, h, backend);
}

/// Analytic hybrid gradient against a central difference in one circuit
/// angle. Derivative matrices come from the two-point shift rule.
inline GradientCheck ry_cnot_gradient(const MomentBasis& basis, const PauliHamiltonian& h, std::array<double, 4> t,
                                      std::size_t param, double reg, double step = 1e-5) {
  const OverlapSet set = ry_cnot_overlaps(basis, h, t);
  const GroundStateSolution sol = solve(set.D_assembled(), set.E, reg);
  auto shifted = [&](double by) {
    std::array<double, 4> s = t;
    s[param] += by;
    return ry_cnot_overlaps(basis, h, s);
  };
  const OverlapSet plus = shifted(std::numbers::pi / 2);
  const OverlapSet minus = shifted(-std::numbers::pi / 2);
  const Eigen::MatrixXcd dE = 0.5 * (plus.E - minus.E);
  const Eigen::MatrixXcd dD = 0.5 * (plus.D_assembled() - minus.D_assembled());
  const HybridGradient g = hybrid_gradient(set.E, set.D_assembled(), dE, dD, sol.alpha, reg);

  auto energy_at = [&](double by) {
    const OverlapSet s = shifted(by);
    return solve(s.D_assembled(), s.E, reg).energy;
  };
  GradientCheck out;
  out.analytic = g.denergy;
  out.finite_difference = (energy_at(step) - energy_at(-step)) / (2 * step);
  out.norm_drift = 2.0 * (g.dalpha.adjoint() * set.E * sol.alpha)(0).real() + (sol.alpha.adjoint() * dE * sol.alpha)(0).real();
  return out;
}

}  // namespace iqae::testing
