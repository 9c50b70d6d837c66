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

// min a^dag D a  subject to  a^dag E a = 1, solved by canonical
// orthogonalization of E, plus the moment-iteration driver, coefficient
// sweeps and the hybrid gradient.

#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <lapacke.h>

#include "iqae/backends.hpp"
#include "iqae/error.hpp"
#include "iqae/moment_basis.hpp"
#include "iqae/overlap.hpp"
#include "iqae/pauli.hpp"

namespace iqae {

struct SolverConfig {
  /// E eigenvalues below this are discarded. Unset picks 1e-8 for exact
  /// overlaps and 1e-1 for sampled ones.
  std::optional<double> reg_threshold{};
  double stop_threshold = 1e-6;
  std::size_t K_max = 8;
  std::optional<std::size_t> cap{};

  double reg_for(bool exact) const { return reg_threshold.value_or(exact ? 1e-8 : 1e-1); }

  void validate() const {
    if (reg_threshold && *reg_threshold < 0) throw ConfigError("solver.reg_threshold must be nonnegative");
    if (!(stop_threshold > 0)) throw ConfigError("solver.stop_threshold must be positive");
    if (cap && *cap == 0) throw ConfigError("solver.cap must be positive");
  }
};

enum class StopReason { none, converged, k_max, closure, cap };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::converged: return "converged";
    case StopReason::k_max: return "k_max";
    case StopReason::closure: return "closure";
    case StopReason::cap: return "cap";
    default: return "none";
  }
}

struct IterationRecord {
  std::size_t K = 0;
  double energy = 0.0;
  /// E_K - E_{K-1}; unset at K = 0.
  std::optional<double> delta;
  std::size_t basis_size = 0;
  std::size_t retained_rank = 0;
  bool degenerate = false;
};

struct GroundStateSolution {
  double energy = 0.0;
  Eigen::VectorXcd alpha;
  std::size_t retained_rank = 0;
  /// Smallest two reduced eigenvalues closer than 1e-10.
  bool degenerate = false;
  std::vector<IterationRecord> trace;
  StopReason stop = StopReason::none;
};

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors; // columns
};

inline double max_abs(const Eigen::MatrixXcd& A) { return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff(); }

inline EigenDecomposition hermitian_eig(const Eigen::MatrixXcd& A) {
  if (A.rows() != A.cols()) throw SizeMismatch("matrix is not square");
  const double asym = max_abs(A - A.adjoint());
  if (asym > 1e-10 * std::max(1.0, max_abs(A))) {
    throw std::invalid_argument("matrix is not Hermitian (max asymmetry " + std::to_string(asym) + ")");
  }
  EigenDecomposition out{Eigen::VectorXd(A.rows()), 0.5 * (A + A.adjoint())};
  if (A.rows() == 0) return out;
  const auto n = static_cast<lapack_int>(A.rows());
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                         reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n,
                                         out.values.data());
  if (info != 0) throw NumericalError("Hermitian eigensolver failed (zheevd info " + std::to_string(info) + ")");
  return out;
}

/// Whitening map X = V_r L_r^{-1/2} over the E eigenpairs at or above the
/// threshold. Built once per E and reusable for any number of D matrices.
class CanonicalOrthogonalizer {
 public:
  CanonicalOrthogonalizer(const Eigen::MatrixXcd& E, double threshold) : dim_(E.rows()) {
    EigenDecomposition eig = hermitian_eig(E);
    Eigen::Index first = 0;
    while (first < eig.values.size() && eig.values[first] < threshold) ++first;
    const Eigen::Index rank = eig.values.size() - first;
    if (rank == 0) {
      throw NumericalError("every overlap eigenvalue is below the regularization threshold " +
                           std::to_string(threshold));
    }
    values_ = eig.values.tail(rank);
    vectors_ = eig.vectors.rightCols(rank);
    X_ = vectors_ * values_.cwiseSqrt().cwiseInverse().asDiagonal();
  }

  std::size_t rank() const { return static_cast<std::size_t>(values_.size()); }
  Eigen::Index dimension() const { return dim_; }
  const Eigen::MatrixXcd& whitening() const { return X_; }

  /// E^+ restricted to the retained eigenpairs.
  Eigen::MatrixXcd pseudo_inverse() const { return vectors_ * values_.cwiseInverse().asDiagonal() * vectors_.adjoint(); }

  GroundStateSolution solve(const Eigen::MatrixXcd& D) const {
    if (D.rows() != dim_ || D.cols() != dim_) {
      throw SizeMismatch("D is " + std::to_string(D.rows()) + "x" + std::to_string(D.cols()) + ", E is " +
                         std::to_string(dim_) + "x" + std::to_string(dim_));
    }
    Eigen::MatrixXcd reduced = X_.adjoint() * D * X_;
    reduced = 0.5 * (reduced + reduced.adjoint()).eval();
    const EigenDecomposition eig = hermitian_eig(reduced);
    GroundStateSolution sol;
    sol.energy = eig.values[0];
    sol.alpha = X_ * eig.vectors.col(0);
    sol.retained_rank = rank();
    sol.degenerate = eig.values.size() > 1 && eig.values[1] - eig.values[0] < 1e-10;
    return sol;
  }

 private:
  Eigen::Index dim_;
  Eigen::VectorXd values_;
  Eigen::MatrixXcd vectors_;
  Eigen::MatrixXcd X_;
};

inline GroundStateSolution solve(const Eigen::MatrixXcd& D, const Eigen::MatrixXcd& E, double reg_threshold) {
  if (D.rows() != E.rows() || D.cols() != E.cols()) throw SizeMismatch("D and E have different shapes");
  return CanonicalOrthogonalizer(E, reg_threshold).solve(D);
}

inline GroundStateSolution solve(const Eigen::MatrixXcd& D, const Eigen::MatrixXcd& E, const SolverConfig& config,
                                 bool exact = true) {
  return solve(D, E, config.reg_for(exact));
}

/// One solve per coefficient vector, all sharing the assembled E.
inline std::vector<GroundStateSolution> sweep(const OverlapSet& set, const std::vector<std::vector<double>>& grid,
                                              const SolverConfig& config) {
  for (const auto& beta : grid) {
    if (beta.size() != set.D_terms.size()) throw SizeMismatch("sweep point length does not match the term count");
  }
  const CanonicalOrthogonalizer ortho(set.E, config.reg_for(set.exact));
  std::vector<GroundStateSolution> out;
  out.reserve(grid.size());
  for (const auto& beta : grid) out.push_back(ortho.solve(recombine_D(set, beta)));
  return out;
}

/// Solutions on the leading m x m blocks for each m in `sizes`.
inline std::vector<GroundStateSolution> solve_prefixes(const OverlapSet& set, const std::vector<std::size_t>& sizes,
                                                       const SolverConfig& config) {
  const Eigen::MatrixXcd D = set.D_assembled();
  std::vector<GroundStateSolution> out;
  out.reserve(sizes.size());
  for (std::size_t m : sizes) {
    if (m == 0 || m > set.dimension()) throw std::out_of_range("prefix size " + std::to_string(m) + " out of range");
    const auto k = static_cast<Eigen::Index>(m);
    out.push_back(solve(D.topLeftCorner(k, k), set.E.topLeftCorner(k, k), config, set.exact));
  }
  return out;
}

struct IterationResult {
  GroundStateSolution solution;
  OverlapSet overlaps;
};

/// Grows the moment basis one level at a time, reusing earlier overlap
/// entries, until |E_K - E_{K-1}| < stop_threshold, K = K_max, the basis
/// closes, or the cap is hit.
inline IterationResult iterate_with_overlaps(const PauliHamiltonian& h, ExpectationBackend& backend,
                                             const SolverConfig& config) {
  config.validate();
  const double reg = config.reg_for(backend.is_exact());
  MomentBasis basis = MomentBasis::build(h.generators(), 0, config.cap);
  OverlapSet set = assemble(basis, h, backend, {.factored = false});
  std::vector<IterationRecord> trace;
  GroundStateSolution sol;
  StopReason stop = StopReason::none;
  while (true) {
    sol = solve(*set.D_fixed, set.E, reg);
    IterationRecord rec{basis.K(), sol.energy, std::nullopt, basis.size(), sol.retained_rank, sol.degenerate};
    if (!trace.empty()) rec.delta = sol.energy - trace.back().energy;
    trace.push_back(rec);
    if (rec.delta && std::abs(*rec.delta) < config.stop_threshold) {
      stop = StopReason::converged;
      break;
    }
    if (basis.K() >= config.K_max) {
      stop = StopReason::k_max;
      break;
    }
    if (basis.is_saturated()) {
      stop = StopReason::cap;
      break;
    }
    if (basis.extend_one_level() == 0) {
      stop = StopReason::closure;
      break;
    }
    extend(set, basis, backend);
  }
  sol.trace = std::move(trace);
  sol.stop = stop;
  return {std::move(sol), std::move(set)};
}

inline GroundStateSolution iterate(const PauliHamiltonian& h, ExpectationBackend& backend, const SolverConfig& config) {
  return iterate_with_overlaps(h, backend, config).solution;
}

inline GroundStateSolution iterate(const PauliHamiltonian& h, const ReferenceState& state, ExpectationBackend& backend,
                                   const SolverConfig& config) {
  if (state.n_qubits() != h.n_qubits() || backend.n_qubits() != h.n_qubits()) {
    throw SizeMismatch("Hamiltonian, state and backend act on different qubit counts");
  }
  return iterate(h, backend, config);
}

struct HybridGradient {
  Eigen::VectorXcd dalpha;
  double denergy = 0.0;
};

/// d alpha = -1/2 E^+ (dE) alpha and
/// dEnergy = alpha^dag dD alpha + 2 Re(d alpha^dag D alpha).
inline HybridGradient hybrid_gradient(const Eigen::MatrixXcd& E, const Eigen::MatrixXcd& D, const Eigen::MatrixXcd& dE,
                                      const Eigen::MatrixXcd& dD, const Eigen::VectorXcd& alpha, double reg_threshold) {
  const Eigen::Index n = E.rows();
  if (D.rows() != n || dE.rows() != n || dD.rows() != n || alpha.size() != n || E.cols() != n || D.cols() != n ||
      dE.cols() != n || dD.cols() != n) {
    throw SizeMismatch("hybrid gradient operands have inconsistent dimensions");
  }
  const CanonicalOrthogonalizer ortho(E, reg_threshold);
  HybridGradient g;
  g.dalpha = -0.5 * ortho.pseudo_inverse() * (dE * alpha);
  g.denergy = (alpha.adjoint() * dD * alpha)(0).real() + 2.0 * (g.dalpha.adjoint() * D * alpha)(0).real();
  return g;
}

inline HybridGradient hybrid_gradient(const OverlapSet& set, const Eigen::MatrixXcd& dE, const Eigen::MatrixXcd& dD,
                                      const Eigen::VectorXcd& alpha, const SolverConfig& config) {
  return hybrid_gradient(set.E, set.D_assembled(), dE, dD, alpha, config.reg_for(set.exact));
}

/// sum_n alpha_n T_n |psi> as a dense vector.
inline StateVector reconstruct(const MomentBasis& basis, const Eigen::VectorXcd& alpha, const StateVector& psi) {
  if (static_cast<std::size_t>(alpha.size()) != basis.size()) throw SizeMismatch("alpha length differs from basis size");
  StateVector out(psi.size(), cplx{0});
  for (std::size_t n = 0; n < basis.size(); ++n) {
    if (alpha[static_cast<Eigen::Index>(n)] == cplx{0}) continue;
    const StateVector t = apply_pauli(basis[n].term, psi);
    for (std::size_t i = 0; i < psi.size(); ++i) out[i] += alpha[static_cast<Eigen::Index>(n)] * t[i];
  }
  return out;
}

}  // namespace iqae
