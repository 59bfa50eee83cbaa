// Copyright 2026 The xent Authors
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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace xent {

inline constexpr std::size_t words_for(std::size_t bits) noexcept { return (bits + 63) / 64; }

enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

/// Signed Hermitian Pauli operator on n qubits. Bit pair (x, z) at a qubit
/// encodes I, X, Z, or Y = iXZ; the overall phase is +1 or -1.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n) : n_(n), xs_(words_for(n), 0), zs_(words_for(n), 0) {}

  /// Parses e.g. "+XZ_Y", "-ZZ", "XIY" (leading sign optional, '_' and 'I' are identity).
  static PauliString parse(std::string_view text);
  static PauliString single(std::size_t n, std::size_t qubit, Pauli p);

  std::size_t size() const noexcept { return n_; }
  std::size_t num_words() const noexcept { return xs_.size(); }

  bool x(std::size_t q) const noexcept { return (xs_[q >> 6] >> (q & 63)) & 1; }
  bool z(std::size_t q) const noexcept { return (zs_[q >> 6] >> (q & 63)) & 1; }
  Pauli at(std::size_t q) const noexcept {
    return static_cast<Pauli>(static_cast<int>(x(q)) | (static_cast<int>(z(q)) << 1));
  }
  void set(std::size_t q, Pauli p) noexcept;
  void set_x(std::size_t q, bool v) noexcept { set_bit(xs_, q, v); }
  void set_z(std::size_t q, bool v) noexcept { set_bit(zs_, q, v); }

  bool negative() const noexcept { return negative_; }
  void set_negative(bool v) noexcept { negative_ = v; }
  PauliString& negate() noexcept {
    negative_ = !negative_;
    return *this;
  }

  const std::vector<std::uint64_t>& x_words() const noexcept { return xs_; }
  const std::vector<std::uint64_t>& z_words() const noexcept { return zs_; }
  std::vector<std::uint64_t>& x_words() noexcept { return xs_; }
  std::vector<std::uint64_t>& z_words() noexcept { return zs_; }

  bool is_identity() const noexcept;  // ignores the sign
  std::size_t weight() const noexcept;
  bool commutes_with(const PauliString& other) const noexcept;

  /// In-place product this = this * rhs. Both operands must commute so the
  /// product stays Hermitian; throws std::logic_error otherwise.
  PauliString& operator*=(const PauliString& rhs);

  /// Same bits, ignoring sign.
  bool same_unsigned(const PauliString& other) const noexcept {
    return n_ == other.n_ && xs_ == other.xs_ && zs_ == other.zs_;
  }

  std::string str() const;

  friend bool operator==(const PauliString& a, const PauliString& b) noexcept {
    return a.negative_ == b.negative_ && a.same_unsigned(b);
  }
  friend bool operator<(const PauliString& a, const PauliString& b) noexcept;

 private:
  static void set_bit(std::vector<std::uint64_t>& w, std::size_t q, bool v) noexcept {
    const std::uint64_t m = std::uint64_t{1} << (q & 63);
    w[q >> 6] = v ? (w[q >> 6] | m) : (w[q >> 6] & ~m);
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> xs_;
  std::vector<std::uint64_t> zs_;
  bool negative_ = false;
};

inline PauliString operator*(PauliString a, const PauliString& b) {
  a *= b;
  return a;
}

/// Power of i (mod 4) picked up by the ordered product a * b of the unsigned
/// operators, i.e. unsigned(a) * unsigned(b) = i^k unsigned(a xor b).
int product_phase(const PauliString& a, const PauliString& b) noexcept;

/// Word-parallel phase contribution of one 64-qubit block of a product; see
/// product_phase. Returns (plus count - minus count).
inline int product_phase_word(std::uint64_t x1, std::uint64_t z1, std::uint64_t x2,
                              std::uint64_t z2) noexcept {
  const std::uint64_t X1 = x1 & ~z1, Y1 = x1 & z1, Z1 = ~x1 & z1;
  const std::uint64_t X2 = x2 & ~z2, Y2 = x2 & z2, Z2 = ~x2 & z2;
  const std::uint64_t plus = (X1 & Y2) | (Y1 & Z2) | (Z1 & X2);
  const std::uint64_t minus = (X1 & Z2) | (Y1 & X2) | (Z1 & Y2);
  return std::popcount(plus) - std::popcount(minus);
}

/// Pauli operator with an explicit phase i^phase; used where intermediate
/// products may be anti-Hermitian.
struct PhasedPauli {
  PauliString op;  // sign kept false; phase carries everything
  int phase = 0;   // power of i, mod 4

  explicit PhasedPauli(std::size_t n) : op(n) {}
  explicit PhasedPauli(const PauliString& p) : op(p), phase(p.negative() ? 2 : 0) {
    op.set_negative(false);
  }

  PhasedPauli& operator*=(const PauliString& rhs);
  PhasedPauli& operator*=(const PhasedPauli& rhs);

  bool hermitian() const noexcept { return (phase & 1) == 0; }
  /// Signed Hermitian operator; throws std::logic_error if the phase is +-i.
  PauliString to_hermitian() const;
};

}  // namespace xent
