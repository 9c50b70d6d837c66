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

// N-qubit Pauli strings in symplectic (x, z) form with an exact i^k phase.
//
// Conventions:
//  * qubit 0 is the leftmost label character and the lowest bit of a mask;
//  * a qubit with x = z = 1 carries a genuine Y factor, so the operator is
//    i^phase_exp (x) P_q with P_q in {I, X, Y, Z}. Under this convention a
//    freshly parsed label such as "XYZ" has phase_exp = 0, and a term is
//    Hermitian exactly when phase_exp is even.

#pragma once

#include <algorithm>
#include <bit>
#include <charconv>
#include <complex>
#include <cstdint>
#include <functional>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iqae/error.hpp"

namespace iqae {

/// Fixed-width bit set over qubits. Widths up to 64 live in one inline word;
/// wider masks spill to a heap word array. Bits past size() are always zero.
class QubitMask {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  QubitMask() = default;

  explicit QubitMask(std::size_t n_bits) : n_(n_bits) {
    if (n_ > kWordBits) heap_.assign(word_count(n_), 0);
  }

  std::size_t size() const { return n_; }

  std::span<const word_type> words() const {
    if (n_ == 0) return {};
    if (n_ <= kWordBits) return {&inline_, 1};
    return heap_;
  }

  std::span<word_type> words() {
    if (n_ == 0) return {};
    if (n_ <= kWordBits) return {&inline_, 1};
    return heap_;
  }

  bool test(std::size_t q) const { return (words()[q / kWordBits] >> (q % kWordBits)) & 1U; }

  void set(std::size_t q, bool value = true) {
    word_type& w = words()[q / kWordBits];
    const word_type bit = word_type{1} << (q % kWordBits);
    w = value ? (w | bit) : (w & ~bit);
  }

  bool none() const {
    return std::ranges::all_of(words(), [](word_type w) { return w == 0; });
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (word_type w : words()) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  QubitMask& operator^=(const QubitMask& other) {
    check_width(other);
    auto dst = words();
    auto src = other.words();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
    return *this;
  }

  QubitMask& operator&=(const QubitMask& other) {
    check_width(other);
    auto dst = words();
    auto src = other.words();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] &= src[i];
    return *this;
  }

  QubitMask& operator|=(const QubitMask& other) {
    check_width(other);
    auto dst = words();
    auto src = other.words();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
    return *this;
  }

  friend QubitMask operator^(QubitMask a, const QubitMask& b) { return a ^= b; }
  friend QubitMask operator&(QubitMask a, const QubitMask& b) { return a &= b; }
  friend QubitMask operator|(QubitMask a, const QubitMask& b) { return a |= b; }

  friend bool operator==(const QubitMask& a, const QubitMask& b) {
    return a.n_ == b.n_ && std::ranges::equal(a.words(), b.words());
  }

  std::size_t hash() const {
    std::uint64_t h = 0x84222325CBF29CE4ULL ^ n_;
    for (word_type w : words()) {
      h ^= w + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  /// Lowest word as an integer; only meaningful for widths <= 64.
  word_type low_word() const { return n_ == 0 ? 0 : words()[0]; }

  static std::size_t word_count(std::size_t n_bits) { return (n_bits + kWordBits - 1) / kWordBits; }

 private:
  void check_width(const QubitMask& other) const {
    if (other.n_ != n_) {
      throw SizeMismatch("qubit mask widths differ: " + std::to_string(n_) + " vs " +
                         std::to_string(other.n_));
    }
  }

  std::size_t n_ = 0;
  word_type inline_ = 0;
  std::vector<word_type> heap_;
};

/// One Pauli string i^phase_exp (x) P_q.
class PauliTerm {
 public:
  PauliTerm() = default;

  /// Identity on n qubits.
  explicit PauliTerm(std::size_t n_qubits) : x_(n_qubits), z_(n_qubits) {}

  PauliTerm(QubitMask x, QubitMask z, int phase_exp = 0) : x_(std::move(x)), z_(std::move(z)) {
    if (x_.size() != z_.size()) throw SizeMismatch("x and z masks have different widths");
    set_phase_exp(phase_exp);
  }

  /// Term with the given single-qubit factors ('I', 'X', 'Y', 'Z') at the
  /// listed qubits and identity elsewhere.
  static PauliTerm from_factors(std::size_t n_qubits,
                                std::initializer_list<std::pair<std::size_t, char>> factors) {
    PauliTerm t(n_qubits);
    for (auto [q, c] : factors) t.set_factor(q, c);
    return t;
  }

  /// Parses `[+|-][i]? [IXYZ]{n}`.
  static PauliTerm parse(std::string_view label) {
    std::size_t pos = 0;
    int phase = 0;
    if (pos < label.size() && (label[pos] == '+' || label[pos] == '-')) {
      if (label[pos] == '-') phase += 2;
      ++pos;
    }
    if (pos < label.size() && label[pos] == 'i') {
      phase += 1;
      ++pos;
    }
    if (pos == label.size()) throw ParseError("Pauli label has no qubit factors", pos);
    PauliTerm t(label.size() - pos);
    for (std::size_t q = 0; pos < label.size(); ++pos, ++q) {
      const char c = label[pos];
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        throw ParseError(std::string("malformed Pauli label: unexpected character '") + c + "'", pos);
      }
      t.set_factor(q, c);
    }
    t.set_phase_exp(phase);
    return t;
  }

  /// Canonical label: "", "i", "-", "-i" prefix for phase 0..3, then one
  /// letter per qubit.
  std::string label() const {
    static constexpr const char* kPrefix[4] = {"", "i", "-", "-i"};
    std::string out = kPrefix[phase_exp_];
    out.reserve(out.size() + n_qubits());
    for (std::size_t q = 0; q < n_qubits(); ++q) out.push_back(factor(q));
    return out;
  }

  std::size_t n_qubits() const { return x_.size(); }
  const QubitMask& x() const { return x_; }
  const QubitMask& z() const { return z_; }
  int phase_exp() const { return phase_exp_; }

  /// i^phase_exp as a complex number.
  std::complex<double> phase() const {
    static constexpr std::complex<double> kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kPhases[phase_exp_];
  }

  bool is_hermitian() const { return phase_exp_ % 2 == 0; }

  /// True when both masks are empty (any phase).
  bool is_identity_string() const { return x_.none() && z_.none(); }

  /// Qubits carrying a non-identity factor.
  QubitMask support() const { return x_ | z_; }

  char factor(std::size_t q) const {
    const bool xb = x_.test(q);
    const bool zb = z_.test(q);
    if (xb && zb) return 'Y';
    if (xb) return 'X';
    if (zb) return 'Z';
    return 'I';
  }

  void set_factor(std::size_t q, char c) {
    switch (c) {
      case 'I': x_.set(q, false); z_.set(q, false); break;
      case 'X': x_.set(q, true); z_.set(q, false); break;
      case 'Y': x_.set(q, true); z_.set(q, true); break;
      case 'Z': x_.set(q, false); z_.set(q, true); break;
      default: throw std::invalid_argument(std::string("not a Pauli factor: ") + c);
    }
  }

  void set_phase_exp(int phase_exp) { phase_exp_ = ((phase_exp % 4) + 4) % 4; }

  PauliTerm with_phase_exp(int phase_exp) const {
    PauliTerm t = *this;
    t.set_phase_exp(phase_exp);
    return t;
  }

  /// Same masks with phase_exp 0.
  PauliTerm dephased() const { return with_phase_exp(0); }

  friend bool operator==(const PauliTerm& a, const PauliTerm& b) {
    return a.phase_exp_ == b.phase_exp_ && a.x_ == b.x_ && a.z_ == b.z_;
  }

  /// Phase-blind comparison of the (x, z) masks.
  bool same_masks(const PauliTerm& other) const { return x_ == other.x_ && z_ == other.z_; }

  std::size_t hash() const {
    return x_.hash() * 0x9E3779B97F4A7C15ULL ^ (z_.hash() + 0x632BE59BD9B4E019ULL) ^
           static_cast<std::size_t>(phase_exp_);
  }

 private:
  QubitMask x_;
  QubitMask z_;
  int phase_exp_ = 0;
};

namespace detail {

inline void require_same_width(const PauliTerm& a, const PauliTerm& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw SizeMismatch("Pauli terms act on different qubit counts: " + std::to_string(a.n_qubits()) +
                       " vs " + std::to_string(b.n_qubits()));
  }
}

}  // namespace detail

/// Operator product a * b.
///
/// Per qubit, XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i; the
/// counts of both patterns are taken word-parallel.
inline PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  detail::require_same_width(a, b);
  QubitMask x = a.x();
  QubitMask z = a.z();
  x ^= b.x();
  z ^= b.z();

  const auto ax = a.x().words();
  const auto az = a.z().words();
  const auto bx = b.x().words();
  const auto bz = b.z().words();
  long long plus = 0;
  long long minus = 0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const std::uint64_t a_x = ax[i] & ~az[i];
    const std::uint64_t a_y = ax[i] & az[i];
    const std::uint64_t a_z = ~ax[i] & az[i];
    const std::uint64_t b_x = bx[i] & ~bz[i];
    const std::uint64_t b_y = bx[i] & bz[i];
    const std::uint64_t b_z = ~bx[i] & bz[i];
    plus += std::popcount((a_x & b_y) | (a_y & b_z) | (a_z & b_x));
    minus += std::popcount((a_y & b_x) | (a_z & b_y) | (a_x & b_z));
  }
  const long long phase = a.phase_exp() + b.phase_exp() + plus - minus;
  return PauliTerm(std::move(x), std::move(z), static_cast<int>(((phase % 4) + 4) % 4));
}

inline PauliTerm operator*(const PauliTerm& a, const PauliTerm& b) { return multiply(a, b); }

/// Hermitian conjugate: conjugates the phase, masks unchanged.
inline PauliTerm adjoint(const PauliTerm& a) { return a.with_phase_exp(-a.phase_exp()); }

/// True iff on every qubit the factors agree or one of them is identity.
inline bool commutes_qubitwise(const PauliTerm& a, const PauliTerm& b) {
  detail::require_same_width(a, b);
  const auto ax = a.x().words();
  const auto az = a.z().words();
  const auto bx = b.x().words();
  const auto bz = b.z().words();
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const std::uint64_t both = (ax[i] | az[i]) & (bx[i] | bz[i]);
    if (both & ((ax[i] ^ bx[i]) | (az[i] ^ bz[i]))) return false;
  }
  return true;
}

/// Full (symplectic) commutation.
inline bool commutes(const PauliTerm& a, const PauliTerm& b) {
  detail::require_same_width(a, b);
  const auto ax = a.x().words();
  const auto az = a.z().words();
  const auto bx = b.x().words();
  const auto bz = b.z().words();
  int parity = 0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    parity ^= std::popcount((ax[i] & bz[i]) ^ (az[i] & bx[i])) & 1;
  }
  return parity == 0;
}

struct PauliTermHash {
  std::size_t operator()(const PauliTerm& t) const { return t.hash(); }
};

/// One (beta, U) pair of a Hamiltonian.
struct HamiltonianTerm {
  double beta = 0.0;
  PauliTerm term;
};

/// H = sum_k beta_k U_k with real beta and phase-free Pauli strings.
/// Duplicate strings are merged at construction by summing their
/// coefficients; first-occurrence order is kept.
class PauliHamiltonian {
 public:
  PauliHamiltonian() = default;

  PauliHamiltonian(std::size_t n_qubits, const std::vector<HamiltonianTerm>& terms) : n_(n_qubits) {
    if (n_qubits == 0) throw std::invalid_argument("Hamiltonian needs at least one qubit");
    std::unordered_map<PauliTerm, std::size_t, PauliTermHash> index;
    for (const auto& [beta, term] : terms) {
      if (term.n_qubits() != n_) {
        throw SizeMismatch("Hamiltonian term '" + term.label() + "' has " +
                           std::to_string(term.n_qubits()) + " qubits, expected " + std::to_string(n_));
      }
      if (term.phase_exp() != 0) {
        throw std::invalid_argument("Hamiltonian term '" + term.label() + "' must be phase-free");
      }
      auto [it, inserted] = index.try_emplace(term, terms_.size());
      if (inserted) {
        terms_.push_back({beta, term});
      } else {
        terms_[it->second].beta += beta;
      }
    }
  }

  std::size_t n_qubits() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  const HamiltonianTerm& operator[](std::size_t k) const { return terms_[k]; }

  std::vector<PauliTerm> generators() const {
    std::vector<PauliTerm> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(t.term);
    return out;
  }

  std::vector<double> coefficients() const {
    std::vector<double> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(t.beta);
    return out;
  }

  /// Coefficients of this Hamiltonian laid out on `layout`'s term order.
  /// Strings absent here get 0; strings absent from the layout are an error.
  std::vector<double> coefficients_on(const PauliHamiltonian& layout) const {
    if (layout.n_qubits() != n_) throw SizeMismatch("Hamiltonian layouts act on different qubit counts");
    std::unordered_map<PauliTerm, std::size_t, PauliTermHash> index;
    for (std::size_t k = 0; k < layout.size(); ++k) index.emplace(layout[k].term, k);
    std::vector<double> beta(layout.size(), 0.0);
    for (const auto& t : terms_) {
      auto it = index.find(t.term);
      if (it == index.end()) {
        throw std::invalid_argument("term '" + t.term.label() + "' is not part of the reference layout");
      }
      beta[it->second] = t.beta;
    }
    return beta;
  }

  /// Text form: one `<beta> <label>` line per term.
  std::string to_text() const {
    std::string out;
    for (const auto& [beta, term] : terms_) {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof(buf), beta);
      out.append(buf, res.ptr);
      out.push_back(' ');
      out += term.label();
      out.push_back('\n');
    }
    return out;
  }

  /// Reads the text form. `#` starts a comment; blank lines are ignored. A
  /// real sign on the label is folded into the coefficient.
  static PauliHamiltonian parse_text(std::istream& in) {
    std::vector<HamiltonianTerm> terms;
    std::size_t n = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream fields(line);
      std::string coeff;
      std::string label;
      if (!(fields >> coeff)) continue;
      const std::string where = "Hamiltonian line " + std::to_string(line_no);
      if (!(fields >> label)) throw ParseError(where + ": missing Pauli label", line_no);
      std::string extra;
      if (fields >> extra) throw ParseError(where + ": trailing text '" + extra + "'", line_no);
      double beta = 0.0;
      auto [ptr, ec] = std::from_chars(coeff.data(), coeff.data() + coeff.size(), beta);
      if (ec != std::errc{} || ptr != coeff.data() + coeff.size()) {
        throw ParseError(where + ": bad coefficient '" + coeff + "'", line_no);
      }
      PauliTerm term = PauliTerm::parse(label);
      if (!term.is_hermitian()) throw ParseError(where + ": imaginary phase on '" + label + "'", line_no);
      if (term.phase_exp() == 2) beta = -beta;
      term.set_phase_exp(0);
      if (n == 0) n = term.n_qubits();
      terms.push_back({beta, std::move(term)});
    }
    if (terms.empty()) throw ParseError("Hamiltonian text has no terms", 0);
    return PauliHamiltonian(n, terms);
  }

  static PauliHamiltonian parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_text(in);
  }

 private:
  std::size_t n_ = 0;
  std::vector<HamiltonianTerm> terms_;
};

}  // namespace iqae

template <>
struct std::hash<iqae::PauliTerm> {
  std::size_t operator()(const iqae::PauliTerm& t) const { return t.hash(); }
};
