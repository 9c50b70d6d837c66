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

// Dense reference computations for small systems. Operators here are built
// from Kronecker products of 2x2 matrices and never go through the symplectic
// multiply or the overlap assembler.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "iqae/eigensolver.hpp"
#include "iqae/error.hpp"
#include "iqae/moment_basis.hpp"
#include "iqae/pauli.hpp"

namespace iqae::oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class DenseOperator {
 public:
  explicit DenseOperator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw SizeMismatch("dense operator must be square");
    hermitian_ = (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= 1e-10;
  }
  const Matrix& matrix() const { return m_; }
  bool hermitian() const { return hermitian_; }
  Eigen::Index dimension() const { return m_.rows(); }

 private:
  Matrix m_;
  bool hermitian_ = false;
};

inline Matrix single_qubit(char f) {
  using C = std::complex<double>;
  Matrix m(2, 2);
  switch (f) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("not a Pauli factor");
  }
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

inline void check_dense_width(std::size_t n, std::size_t limit) {
  if (n > limit) {
    throw std::invalid_argument("dense oracle limited to " + std::to_string(limit) + " qubits, got " + std::to_string(n));
  }
}

/// Qubit 0 is the least significant index bit, so it is the rightmost
/// Kronecker factor.
inline Matrix dense_pauli(const PauliTerm& p) {
  check_dense_width(p.n_qubits(), 12);
  Matrix m = Matrix::Identity(1, 1);
  for (std::size_t q = p.n_qubits(); q-- > 0;) m = kron(m, single_qubit(p.factor(q)));
  return p.phase() * m;
}

// Kronecker products of single-qubit factors are diagonal or antidiagonal in
// each factor, so the full matrix has one nonzero per column; build it
// directly for the larger sizes instead of chaining dense kron calls.
inline Matrix dense_hamiltonian(const PauliHamiltonian& h) {
  const std::size_t n = h.n_qubits();
  check_dense_width(n, 12);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& [beta, term] : h.terms()) {
    if (n <= 6) {
      out += beta * dense_pauli(term);
      continue;
    }
    for (Eigen::Index col = 0; col < dim; ++col) {
      std::complex<double> amp = term.phase();
      Eigen::Index row = 0;
      for (std::size_t q = 0; q < n; ++q) {
        const bool bit = (col >> q) & 1;
        const Matrix f = single_qubit(term.factor(q));
        const int r = f(0, bit) != 0.0 ? 0 : 1;
        amp *= f(r, bit);
        row |= static_cast<Eigen::Index>(r) << q;
      }
      out(row, col) += beta * amp;
    }
  }
  return out;
}

struct GroundState {
  double energy = 0.0;
  Vector vector;
};

inline Eigen::SelfAdjointEigenSolver<Matrix> spectrum(const PauliHamiltonian& h) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(dense_hamiltonian(h));
}

inline GroundState exact_ground(const PauliHamiltonian& h) {
  const auto eig = spectrum(h);
  return {eig.eigenvalues()[0], eig.eigenvectors().col(0)};
}

/// Ground energy of H restricted to the computational basis states reachable
/// from |start> by the terms' bit flips (an invariant subspace of H).
inline double reachable_ground_energy(const PauliHamiltonian& h, std::uint64_t start = 0) {
  const Matrix H = dense_hamiltonian(h);
  std::vector<std::uint64_t> flips;
  for (const auto& t : h.terms()) flips.push_back(t.term.x().low_word());
  std::vector<std::uint64_t> states{start};
  std::vector<bool> seen(static_cast<std::size_t>(H.rows()), false);
  seen[start] = true;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::uint64_t f : flips) {
      const std::uint64_t next = states[i] ^ f;
      if (!seen[next]) {
        seen[next] = true;
        states.push_back(next);
      }
    }
  }
  const auto dim = static_cast<Eigen::Index>(states.size());
  Matrix sub(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      sub(r, c) = H(static_cast<Eigen::Index>(states[r]), static_cast<Eigen::Index>(states[c]));
    }
  }
  return Eigen::SelfAdjointEigenSolver<Matrix>(sub, Eigen::EigenvaluesOnly).eigenvalues()[0];
}

inline Vector to_vector(const std::vector<std::complex<double>>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// e^{-tau H} psi0, normalized, through the dense eigenbasis (shifted by the
/// lowest eigenvalue so large tau does not underflow).
inline Vector ite_evolve(const PauliHamiltonian& h, const Vector& psi0, double tau) {
  check_dense_width(h.n_qubits(), 12);
  if (tau < 0) throw std::invalid_argument("imaginary time must be nonnegative");
  const auto eig = spectrum(h);
  const Matrix& V = eig.eigenvectors();
  Vector c = V.adjoint() * psi0;
  const double e0 = eig.eigenvalues()[0];
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(-tau * (eig.eigenvalues()[k] - e0));
  Vector out = V * c;
  const double norm = out.norm();
  if (!(norm > 1e-300)) throw NumericalError("imaginary-time evolved state has zero norm");
  return out / norm;
}

inline double energy(const Matrix& H, const Vector& v) { return (v.adjoint() * H * v)(0).real() / v.squaredNorm(); }

struct TruncatedIteDiagnostics {
  Vector gamma_K;
  double A_K = 0.0;
  double containment_residual = 0.0;
  /// Ground-state population of the full e^{-tau H} state.
  double P_g = 0.0;
  /// |a_1|^2 |A_K|^2 with a_1 = <phi_1|psi0>.
  double a1_sq_A_K_sq = 0.0;
};

/// |gamma_K> is the normalized degree-K Taylor truncation of e^{-tau H}psi0.
/// A_K is the ground amplitude ratio computed from the moments <psi|H^p|psi>,
/// normalized by the square root of <gamma_K|gamma_K> (unnormalized) so that
/// |a_1|^2 |A_K|^2 is exactly the ground population of gamma_K.
inline TruncatedIteDiagnostics truncated_ite_diagnostics(const PauliHamiltonian& h, const Vector& psi0, double tau,
                                                         std::size_t K) {
  check_dense_width(h.n_qubits(), 10);
  const Matrix H = dense_hamiltonian(h);
  const auto eig = Eigen::SelfAdjointEigenSolver<Matrix>(H);
  const double lambda1 = eig.eigenvalues()[0];

  std::vector<Vector> powers{psi0};
  for (std::size_t p = 1; p <= 2 * K; ++p) powers.push_back(H * powers.back());
  std::vector<double> moments(2 * K + 1);
  for (std::size_t p = 0; p <= 2 * K; ++p) moments[p] = psi0.dot(powers[p]).real();

  Vector gamma = Vector::Zero(psi0.size());
  double coeff = 1.0;
  double numerator = 0.0;
  double lam_coeff = 1.0;
  for (std::size_t p = 0; p <= K; ++p) {
    if (p > 0) {
      coeff *= -tau / static_cast<double>(p);
      lam_coeff *= -lambda1 * tau / static_cast<double>(p);
    }
    gamma += coeff * powers[p];
    numerator += lam_coeff;
  }
  double denom = 0.0;
  double c1 = 1.0;
  for (std::size_t p1 = 0; p1 <= K; ++p1) {
    if (p1 > 0) c1 *= -tau / static_cast<double>(p1);
    double c2 = 1.0;
    for (std::size_t p2 = 0; p2 <= K; ++p2) {
      if (p2 > 0) c2 *= -tau / static_cast<double>(p2);
      denom += c1 * c2 * moments[p1 + p2];
    }
  }

  TruncatedIteDiagnostics out;
  out.gamma_K = gamma / gamma.norm();
  out.A_K = numerator / std::sqrt(denom);

  // Residual after projecting onto span{T psi0 : T in CS_K}; the span basis
  // is orthonormalized with a rank-revealing QR.
  const MomentBasis basis = MomentBasis::build(h.generators(), K);
  Matrix states(psi0.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) states.col(static_cast<Eigen::Index>(i)) = dense_pauli(basis[i].term) * psi0;
  Eigen::ColPivHouseholderQR<Matrix> qr(states);
  qr.setThreshold(1e-12);
  const Eigen::Index rank = qr.rank();
  const Matrix Q = Matrix(qr.householderQ()).leftCols(rank);
  out.containment_residual = (out.gamma_K - Q * (Q.adjoint() * out.gamma_K)).norm();

  const Vector phi1 = eig.eigenvectors().col(0);
  const double a1_sq = std::norm(phi1.dot(psi0));
  out.a1_sq_A_K_sq = a1_sq * out.A_K * out.A_K;
  out.P_g = std::norm(phi1.dot(ite_evolve(h, psi0, tau)));
  return out;
}

/// Closed-form average of <psi|H|psi>^p over Haar-random psi, p in {1, 2, 3}.
inline double haar_moment(const PauliHamiltonian& h, int p) {
  check_dense_width(h.n_qubits(), 10);
  if (p < 1 || p > 3) throw std::invalid_argument("haar_moment supports p = 1, 2, 3");
  const Matrix H = dense_hamiltonian(h);
  const double N = static_cast<double>(H.rows());
  const double t1 = H.trace().real();
  const Matrix H2 = H * H;
  const double t2 = H2.trace().real();
  switch (p) {
    case 1: return t1 / N;
    case 2: return (t1 * t1 + t2) / (N * (N + 1));
    default: {
      const double t3 = (H2 * H).trace().real();
      return (t1 * t1 * t1 + 3 * t2 * t1 + 2 * t3) / (N * (N + 1) * (N + 2));
    }
  }
}

/// QCQP over span{psi, H psi, ..., H^K psi} built from the dense moments
/// m_p = <psi|H^p|psi>. Basis vectors are rescaled by 1/sqrt(m_2i) so the
/// overlap matrix has unit diagonal.
inline GroundStateSolution krylov_power_solve(const PauliHamiltonian& h, const Vector& psi, std::size_t K,
                                              double reg_threshold = 1e-8) {
  check_dense_width(h.n_qubits(), 12);
  const Matrix H = dense_hamiltonian(h);
  std::vector<Vector> powers{psi};
  for (std::size_t p = 1; p <= K; ++p) powers.push_back(H * powers.back());
  std::vector<double> m(2 * K + 2);
  for (std::size_t p = 0; p < m.size(); ++p) {
    const std::size_t a = std::min(p / 2, K);
    const std::size_t b = p - a;
    const Vector Hb = b <= K ? powers[b] : Vector(H * powers[K]);
    m[p] = powers[a].dot(Hb).real();
  }
  const auto dim = static_cast<Eigen::Index>(K + 1);
  Eigen::VectorXd s(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    s[i] = std::sqrt(m[2 * static_cast<std::size_t>(i)]);
    if (!(s[i] > 0)) s[i] = 1.0;
  }
  Matrix E(dim, dim);
  Matrix D(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      E(i, j) = m[static_cast<std::size_t>(i + j)] / (s[i] * s[j]);
      D(i, j) = m[static_cast<std::size_t>(i + j + 1)] / (s[i] * s[j]);
    }
  }
  return solve(D, E, reg_threshold);
}

}  // namespace iqae::oracle
