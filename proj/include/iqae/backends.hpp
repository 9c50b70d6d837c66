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

// Reference states and engines that return <psi|P|psi> for Hermitian Pauli
// strings: a dense statevector engine, an analytic product-state engine and a
// shot-noise sampler wrapping either of them.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "iqae/error.hpp"
#include "iqae/grouping.hpp"
#include "iqae/pauli.hpp"
#include "iqae/rng.hpp"

namespace iqae {

using cplx = std::complex<double>;
using StateVector = std::vector<cplx>;

inline constexpr std::size_t kDefaultStatevectorLimit = 14;

/// P|v> for a Pauli string on a dense vector (qubit q is bit q of the index).
inline StateVector apply_pauli(const PauliTerm& p, const StateVector& v) {
  const std::size_t n = p.n_qubits();
  if (n > 63 || v.size() != (std::size_t{1} << n)) throw SizeMismatch("vector size does not match Pauli width");
  const std::uint64_t x = p.x().low_word();
  const std::uint64_t z = p.z().low_word();
  const cplx base = p.phase() * std::array<cplx, 4>{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}}[std::popcount(x & z) % 4];
  StateVector out(v.size());
  for (std::uint64_t b = 0; b < v.size(); ++b) {
    const cplx c = (std::popcount(z & b) & 1) ? -base : base;
    out[b ^ x] = c * v[b];
  }
  return out;
}

/// <v|P|v> (real part; P is expected Hermitian).
inline double pauli_expectation(const PauliTerm& p, const StateVector& v) {
  const std::size_t n = p.n_qubits();
  if (n > 63 || v.size() != (std::size_t{1} << n)) throw SizeMismatch("vector size does not match Pauli width");
  const std::uint64_t x = p.x().low_word();
  const std::uint64_t z = p.z().low_word();
  const cplx base = p.phase() * std::array<cplx, 4>{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}}[std::popcount(x & z) % 4];
  cplx acc = 0;
  for (std::uint64_t b = 0; b < v.size(); ++b) {
    const cplx term = std::conj(v[b ^ x]) * v[b];
    acc += (std::popcount(z & b) & 1) ? -term : term;
  }
  return (base * acc).real();
}

/// Dense eigendecomposition of a Hamiltonian, shared by evolution gates so it
/// is computed once per Hamiltonian.
struct SpectralGenerator {
  PauliHamiltonian hamiltonian;
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;

  static std::shared_ptr<const SpectralGenerator> make(const PauliHamiltonian& h) {
    const std::size_t n = h.n_qubits();
    if (n > 12) throw std::invalid_argument("dense Hamiltonian evolution is limited to 12 qubits");
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    StateVector column(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      std::fill(column.begin(), column.end(), cplx{0});
      column[c] = 1;
      for (const auto& [beta, term] : h.terms()) {
        const StateVector image = apply_pauli(term, column);
        for (std::size_t r = 0; r < dim; ++r) {
          dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += beta * image[r];
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense);
    auto gen = std::make_shared<SpectralGenerator>();
    gen->hamiltonian = h;
    gen->values = eig.eigenvalues();
    gen->vectors = eig.eigenvectors();
    return gen;
  }
};

/// exp(-i angle/2 sigma_axis) on one qubit.
struct Rotation {
  std::size_t qubit = 0;
  char axis = 'z';
  double angle = 0.0;
};

struct ControlledZ {
  std::size_t a = 0;
  std::size_t b = 0;
};

struct ControlledNot {
  std::size_t control = 0;
  std::size_t target = 0;
};

struct Hadamard {
  std::size_t qubit = 0;
};

/// exp(-i time H), applied exactly through the dense eigenbasis.
struct HamiltonianEvolution {
  std::shared_ptr<const SpectralGenerator> generator;
  double time = 0.0;
};

using Gate = std::variant<Rotation, ControlledZ, ControlledNot, Hadamard, HamiltonianEvolution>;

namespace detail {

inline void check_qubit(std::size_t q, std::size_t n) {
  if (q >= n) throw std::out_of_range("gate acts on qubit " + std::to_string(q) + " of " + std::to_string(n));
}

inline void apply_gate(const Gate& gate, StateVector& v, std::size_t n) {
  const std::uint64_t dim = v.size();
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Rotation>) {
          check_qubit(g.qubit, n);
          const std::uint64_t bit = std::uint64_t{1} << g.qubit;
          const double c = std::cos(g.angle / 2);
          const double s = std::sin(g.angle / 2);
          for (std::uint64_t b = 0; b < dim; ++b) {
            if (b & bit) continue;
            const cplx a0 = v[b];
            const cplx a1 = v[b | bit];
            switch (g.axis) {
              case 'x':
                v[b] = c * a0 - cplx{0, s} * a1;
                v[b | bit] = -cplx{0, s} * a0 + c * a1;
                break;
              case 'y':
                v[b] = c * a0 - s * a1;
                v[b | bit] = s * a0 + c * a1;
                break;
              case 'z':
                v[b] = cplx{c, -s} * a0;
                v[b | bit] = cplx{c, s} * a1;
                break;
              default:
                throw std::invalid_argument(std::string("rotation axis must be x, y or z, got '") + g.axis + "'");
            }
          }
        } else if constexpr (std::is_same_v<G, ControlledZ>) {
          check_qubit(g.a, n);
          check_qubit(g.b, n);
          const std::uint64_t mask = (std::uint64_t{1} << g.a) | (std::uint64_t{1} << g.b);
          for (std::uint64_t b = 0; b < dim; ++b) {
            if ((b & mask) == mask) v[b] = -v[b];
          }
        } else if constexpr (std::is_same_v<G, ControlledNot>) {
          check_qubit(g.control, n);
          check_qubit(g.target, n);
          if (g.control == g.target) throw std::invalid_argument("CNOT control equals target");
          const std::uint64_t cbit = std::uint64_t{1} << g.control;
          const std::uint64_t tbit = std::uint64_t{1} << g.target;
          for (std::uint64_t b = 0; b < dim; ++b) {
            if ((b & cbit) && !(b & tbit)) std::swap(v[b], v[b | tbit]);
          }
        } else if constexpr (std::is_same_v<G, Hadamard>) {
          check_qubit(g.qubit, n);
          const std::uint64_t bit = std::uint64_t{1} << g.qubit;
          const double r = std::numbers::sqrt2 / 2;
          for (std::uint64_t b = 0; b < dim; ++b) {
            if (b & bit) continue;
            const cplx a0 = v[b];
            const cplx a1 = v[b | bit];
            v[b] = r * (a0 + a1);
            v[b | bit] = r * (a0 - a1);
          }
        } else {
          if (!g.generator || g.generator->hamiltonian.n_qubits() != n) {
            throw SizeMismatch("evolution Hamiltonian width does not match the circuit");
          }
          const auto& V = g.generator->vectors;
          Eigen::Map<Eigen::VectorXcd> psi(v.data(), static_cast<Eigen::Index>(dim));
          Eigen::VectorXcd coeffs = V.adjoint() * psi;
          for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
            coeffs[k] *= std::exp(cplx{0, -g.time * g.generator->values[k]});
          }
          psi = V * coeffs;
        }
      },
      gate);
}

}  // namespace detail

/// Either a product of single-qubit pure states (Bloch vectors) or a gate
/// list applied to |0...0>. Circuit states are materialized at construction.
class ReferenceState {
 public:
  enum class Kind { product, circuit };

  static ReferenceState product(std::vector<std::array<double, 3>> bloch) {
    if (bloch.empty()) throw std::invalid_argument("product state needs at least one qubit");
    for (std::size_t q = 0; q < bloch.size(); ++q) {
      const auto& b = bloch[q];
      const double norm = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
      if (std::abs(norm - 1.0) > 1e-12) {
        throw std::invalid_argument("Bloch vector of qubit " + std::to_string(q) + " is not unit length");
      }
    }
    ReferenceState s;
    s.kind_ = Kind::product;
    s.n_ = bloch.size();
    s.bloch_ = std::move(bloch);
    return s;
  }

  /// Computational basis state; bit q of `bits` set means qubit q is |1>.
  static ReferenceState basis_state(std::size_t n, const std::vector<bool>& ones = {}) {
    std::vector<std::array<double, 3>> bloch(n, {0.0, 0.0, 1.0});
    for (std::size_t q = 0; q < ones.size() && q < n; ++q) {
      if (ones[q]) bloch[q] = {0.0, 0.0, -1.0};
    }
    return product(std::move(bloch));
  }

  static ReferenceState plus_state(std::size_t n) {
    return product(std::vector<std::array<double, 3>>(n, {1.0, 0.0, 0.0}));
  }

  static ReferenceState circuit(std::size_t n, std::vector<Gate> gates,
                                std::size_t statevector_limit = kDefaultStatevectorLimit) {
    if (n == 0) throw std::invalid_argument("circuit needs at least one qubit");
    if (n > statevector_limit) {
      throw std::invalid_argument("circuit on " + std::to_string(n) + " qubits exceeds the statevector limit of " +
                                  std::to_string(statevector_limit));
    }
    ReferenceState s;
    s.kind_ = Kind::circuit;
    s.n_ = n;
    s.gates_ = std::move(gates);
    StateVector v(std::size_t{1} << n, cplx{0});
    v[0] = 1;
    for (const auto& g : s.gates_) detail::apply_gate(g, v, n);
    s.amplitudes_ = std::make_shared<const StateVector>(std::move(v));
    return s;
  }

  Kind kind() const { return kind_; }
  std::size_t n_qubits() const { return n_; }
  const std::vector<std::array<double, 3>>& bloch() const { return bloch_; }
  const std::vector<Gate>& gates() const { return gates_; }

  /// Dense amplitudes. Product states are expanded on demand.
  StateVector statevector(std::size_t limit = kDefaultStatevectorLimit) const {
    if (kind_ == Kind::circuit) return *amplitudes_;
    if (n_ > limit) throw std::invalid_argument("product state too wide for a dense statevector");
    StateVector v{cplx{1}};
    for (std::size_t q = 0; q < n_; ++q) {
      const auto& b = bloch_[q];
      cplx a0;
      cplx a1;
      if (1.0 + b[2] > 1e-300) {
        a0 = std::sqrt((1.0 + b[2]) / 2.0);
        a1 = cplx{b[0], b[1]} / std::sqrt(2.0 * (1.0 + b[2]));
      } else {
        a0 = 0;
        a1 = 1;
      }
      // Qubit q is bit q, so the new factor doubles the index space above.
      StateVector next(v.size() * 2);
      for (std::size_t i = 0; i < v.size(); ++i) {
        next[i] = v[i] * a0;
        next[i + v.size()] = v[i] * a1;
      }
      v = std::move(next);
    }
    return v;
  }

  const StateVector& amplitudes() const {
    if (kind_ != Kind::circuit) throw std::logic_error("amplitudes() is only cached for circuit states");
    return *amplitudes_;
  }

 private:
  Kind kind_ = Kind::product;
  std::size_t n_ = 0;
  std::vector<std::array<double, 3>> bloch_;
  std::vector<Gate> gates_;
  std::shared_ptr<const StateVector> amplitudes_;
};

/// Analytic expectation of a Hermitian Pauli string on a product state.
inline double product_expectation(const std::vector<std::array<double, 3>>& bloch, const PauliTerm& p) {
  double value = p.phase_exp() == 2 ? -1.0 : 1.0;
  const auto xw = p.x().words();
  const auto zw = p.z().words();
  for (std::size_t w = 0; w < xw.size(); ++w) {
    std::uint64_t support = xw[w] | zw[w];
    while (support) {
      const int bit = std::countr_zero(support);
      support &= support - 1;
      const std::size_t q = w * 64 + static_cast<std::size_t>(bit);
      const bool xb = (xw[w] >> bit) & 1U;
      const bool zb = (zw[w] >> bit) & 1U;
      value *= xb ? (zb ? bloch[q][1] : bloch[q][0]) : bloch[q][2];
      if (value == 0.0) return 0.0;
    }
  }
  return value;
}

namespace detail {

inline void check_measurable(const PauliTerm& p, std::size_t n) {
  if (p.n_qubits() != n) {
    throw SizeMismatch("Pauli string '" + p.label() + "' has " + std::to_string(p.n_qubits()) +
                       " qubits, state has " + std::to_string(n));
  }
  if (!p.is_hermitian()) throw std::invalid_argument("Pauli string '" + p.label() + "' is not Hermitian");
}

}  // namespace detail

/// Batch expectation engine. Implementations must be pure given their state.
class ExpectationBackend {
 public:
  virtual ~ExpectationBackend() = default;

  std::vector<double> evaluate(std::span<const PauliTerm> strings) {
    for (const auto& s : strings) detail::check_measurable(s, n_qubits());
    calls_ += strings.size();
    return do_evaluate(strings);
  }

  double evaluate(const PauliTerm& p) { return evaluate(std::span<const PauliTerm>(&p, 1)).front(); }

  /// Number of strings evaluated so far.
  std::size_t call_count() const { return calls_.load(); }

  virtual std::size_t n_qubits() const = 0;
  virtual std::string descriptor() const = 0;
  virtual bool is_exact() const { return true; }

 protected:
  virtual std::vector<double> do_evaluate(std::span<const PauliTerm> strings) = 0;

 private:
  std::atomic<std::size_t> calls_{0};
};

/// Dense statevector engine; accepts product states by expanding them.
class ExactBackend final : public ExpectationBackend {
 public:
  explicit ExactBackend(const ReferenceState& state, std::size_t statevector_limit = kDefaultStatevectorLimit)
      : n_(state.n_qubits()), psi_(state.statevector(statevector_limit)) {}

  std::size_t n_qubits() const override { return n_; }
  std::string descriptor() const override { return "exact-statevector"; }
  const StateVector& statevector() const { return psi_; }

 protected:
  std::vector<double> do_evaluate(std::span<const PauliTerm> strings) override {
    std::vector<double> out;
    out.reserve(strings.size());
    for (const auto& s : strings) out.push_back(pauli_expectation(s, psi_));
    return out;
  }

 private:
  std::size_t n_;
  StateVector psi_;
};

/// Closed-form engine for product states; no width limit.
class ProductBackend final : public ExpectationBackend {
 public:
  explicit ProductBackend(const ReferenceState& state) : n_(state.n_qubits()), bloch_(state.bloch()) {
    if (state.kind() != ReferenceState::Kind::product) {
      throw std::invalid_argument("product backend requires a product reference state");
    }
  }

  std::size_t n_qubits() const override { return n_; }
  std::string descriptor() const override { return "product-analytic"; }

 protected:
  std::vector<double> do_evaluate(std::span<const PauliTerm> strings) override {
    std::vector<double> out;
    out.reserve(strings.size());
    for (const auto& s : strings) out.push_back(product_expectation(bloch_, s));
    return out;
  }

 private:
  std::size_t n_;
  std::vector<std::array<double, 3>> bloch_;
};

struct ShotModel {
  std::size_t shots_per_setting = 8192;
  std::uint64_t seed = 0;
  bool grouping = false;
};

/// Platform-independent content hash of a Pauli string (masks and phase).
inline std::uint64_t content_hash(const PauliTerm& p) {
  std::uint64_t h = mix64(p.n_qubits() ^ (static_cast<std::uint64_t>(p.phase_exp()) << 56));
  for (std::uint64_t w : p.x().words()) h = mix64(h ^ w);
  h = mix64(h ^ 0xA5A5A5A5A5A5A5A5ULL);
  for (std::uint64_t w : p.z().words()) h = mix64(h ^ w);
  return h;
}

/// Mean of `shots` +-1 outcomes with P(+1) = (1 + exact) / 2.
inline double sample_mean(double exact, std::size_t shots, std::uint64_t key) {
  const double p = std::clamp((1.0 + exact) / 2.0, 0.0, 1.0);
  SplitMix64 rng(key);
  std::size_t plus = 0;
  for (std::size_t s = 0; s < shots; ++s) plus += rng.uniform() < p ? 1 : 0;
  return (2.0 * static_cast<double>(plus) - static_cast<double>(shots)) / static_cast<double>(shots);
}

namespace detail {

inline void check_shot_model(const ShotModel& model) {
  if (model.shots_per_setting == 0) throw std::invalid_argument("shots_per_setting must be positive");
}

}  // namespace detail

/// Shot-noise wrapper. Without grouping, string s uses the stream
/// derive_key(seed, {content_hash(s), 0}). With grouping, each batch is
/// partitioned into measurement settings and string j of group g uses
/// derive_key(seed, {g, j}).
class SampledBackend final : public ExpectationBackend {
 public:
  SampledBackend(std::shared_ptr<ExpectationBackend> inner, ShotModel model)
      : inner_(std::move(inner)), model_(model) {
    if (!inner_) throw std::invalid_argument("sampled backend needs an inner backend");
    detail::check_shot_model(model_);
  }

  std::size_t n_qubits() const override { return inner_->n_qubits(); }
  std::string descriptor() const override {
    return "sampled(" + inner_->descriptor() + ", shots=" + std::to_string(model_.shots_per_setting) +
           ", seed=" + std::to_string(model_.seed) + ", grouping=" + (model_.grouping ? "on" : "off") + ")";
  }
  bool is_exact() const override { return false; }

  const ShotModel& model() const { return model_; }
  const MeasurementPlan& last_plan() const { return last_plan_; }
  /// Measurement settings used across all batches (strings when ungrouped).
  std::size_t settings_used() const { return settings_used_; }

 protected:
  std::vector<double> do_evaluate(std::span<const PauliTerm> strings) override {
    const std::vector<double> exact = inner_->evaluate(strings);
    std::vector<double> out(strings.size());
    if (model_.grouping) {
      last_plan_ = plan(strings);
      for (std::size_t g = 0; g < last_plan_.groups.size(); ++g) {
        const auto& group = last_plan_.groups[g];
        for (std::size_t j = 0; j < group.size(); ++j) {
          out[group[j]] = sample_mean(exact[group[j]], model_.shots_per_setting, derive_key(model_.seed, {g, j}));
        }
      }
      settings_used_ += last_plan_.settings_count;
    } else {
      for (std::size_t i = 0; i < strings.size(); ++i) {
        out[i] = sample_mean(exact[i], model_.shots_per_setting, derive_key(model_.seed, {content_hash(strings[i]), 0}));
      }
      settings_used_ += strings.size();
    }
    return out;
  }

 private:
  std::shared_ptr<ExpectationBackend> inner_;
  ShotModel model_;
  MeasurementPlan last_plan_;
  std::size_t settings_used_ = 0;
};

inline double expectation_exact(const ReferenceState& state, const PauliTerm& p) {
  detail::check_measurable(p, state.n_qubits());
  if (state.kind() == ReferenceState::Kind::product) return product_expectation(state.bloch(), p);
  return pauli_expectation(p, state.amplitudes());
}

inline double expectation_sampled(const ReferenceState& state, const PauliTerm& p, const ShotModel& model) {
  detail::check_shot_model(model);
  const double exact = expectation_exact(state, p);
  return sample_mean(exact, model.shots_per_setting, derive_key(model.seed, {content_hash(p), 0}));
}

/// <psi|H|psi> through a backend.
inline double energy(const PauliHamiltonian& h, ExpectationBackend& backend) {
  const auto gens = h.generators();
  const auto values = backend.evaluate(gens);
  double e = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) e += h[k].beta * values[k];
  return e;
}

/// prod_k exp(-i beta_k sum_j X_j) exp(-i gamma_k H) |+>^N. Each pair in
/// `angles` is (gamma_k, beta_k).
inline ReferenceState prepare_qaoa(const PauliHamiltonian& h, const std::vector<std::pair<double, double>>& angles,
                                   std::shared_ptr<const SpectralGenerator> generator = nullptr,
                                   std::size_t statevector_limit = kDefaultStatevectorLimit) {
  const std::size_t n = h.n_qubits();
  if (n > statevector_limit) throw std::invalid_argument("QAOA state exceeds the statevector limit");
  std::vector<Gate> gates;
  for (std::size_t q = 0; q < n; ++q) gates.emplace_back(Hadamard{q});
  if (!angles.empty() && !generator) generator = SpectralGenerator::make(h);
  for (const auto& [gamma, beta] : angles) {
    gates.emplace_back(HamiltonianEvolution{generator, gamma});
    for (std::size_t q = 0; q < n; ++q) gates.emplace_back(Rotation{q, 'x', 2.0 * beta});
  }
  return ReferenceState::circuit(n, std::move(gates), statevector_limit);
}

/// Angles minimizing the QAOA energy: a coarse grid over a single repeated
/// (gamma, beta) pair, then a compass search over all 2p angles.
inline std::vector<std::pair<double, double>> optimize_qaoa_angles(const PauliHamiltonian& h, std::size_t p,
                                                                   std::size_t grid = 24) {
  if (p == 0) return {};
  auto generator = SpectralGenerator::make(h);
  auto cost = [&](const std::vector<double>& flat) {
    std::vector<std::pair<double, double>> angles(p);
    for (std::size_t k = 0; k < p; ++k) angles[k] = {flat[2 * k], flat[2 * k + 1]};
    const ReferenceState s = prepare_qaoa(h, angles, generator);
    double e = 0.0;
    for (const auto& [beta, term] : h.terms()) e += beta * pauli_expectation(term, s.amplitudes());
    return e;
  };

  std::vector<double> best(2 * p, 0.0);
  double best_e = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < grid; ++a) {
    for (std::size_t b = 0; b < grid; ++b) {
      std::vector<double> trial(2 * p);
      for (std::size_t k = 0; k < p; ++k) {
        trial[2 * k] = std::numbers::pi * (a + 0.5) / grid;
        trial[2 * k + 1] = 0.5 * std::numbers::pi * (b + 0.5) / grid;
      }
      const double e = cost(trial);
      if (e < best_e) {
        best_e = e;
        best = trial;
      }
    }
  }

  double step = std::numbers::pi / grid;
  while (step > 1e-5) {
    bool improved = false;
    for (std::size_t i = 0; i < best.size(); ++i) {
      for (double dir : {1.0, -1.0}) {
        std::vector<double> trial = best;
        trial[i] += dir * step;
        const double e = cost(trial);
        if (e < best_e - 1e-14) {
          best_e = e;
          best = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step /= 2;
  }
  std::vector<std::pair<double, double>> out(p);
  for (std::size_t k = 0; k < p; ++k) out[k] = {best[2 * k], best[2 * k + 1]};
  return out;
}

/// Seeded random circuit: per layer, one rotation about a random axis by a
/// random angle on every qubit, then CZ on each neighbouring pair.
inline ReferenceState prepare_hardware_efficient(std::size_t n, std::size_t layers, std::uint64_t seed,
                                                 std::size_t statevector_limit = kDefaultStatevectorLimit) {
  SplitMix64 rng(derive_key(seed, {0x6877u, n, layers}));
  std::vector<Gate> gates;
  gates.reserve(layers * (2 * n));
  static constexpr char kAxes[3] = {'x', 'y', 'z'};
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t q = 0; q < n; ++q) {
      const char axis = kAxes[rng.below(3)];
      gates.emplace_back(Rotation{q, axis, rng.uniform(0.0, 2.0 * std::numbers::pi)});
    }
    for (std::size_t q = 0; q + 1 < n; ++q) gates.emplace_back(ControlledZ{q, q + 1});
  }
  return ReferenceState::circuit(n, std::move(gates), statevector_limit);
}

/// Two-qubit Ry / CNOT / Ry circuit with independent angles
/// Ry_0(t[2]) Ry_1(t[3]) CNOT(0,1) Ry_0(t[0]) Ry_1(t[1]) |00>.
inline ReferenceState prepare_ry_cnot(const std::array<double, 4>& t) {
  return ReferenceState::circuit(2, {Rotation{0, 'y', t[0]}, Rotation{1, 'y', t[1]}, ControlledNot{0, 1},
                                     Rotation{0, 'y', t[2]}, Rotation{1, 'y', t[3]}});
}

/// Same circuit with the angle shared per layer.
inline ReferenceState prepare_ry_cnot(double theta1, double theta2) {
  return prepare_ry_cnot({theta1, theta1, theta2, theta2});
}

}  // namespace iqae
