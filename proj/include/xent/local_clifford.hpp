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

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "xent/pauli.hpp"
#include "xent/random.hpp"

namespace xent {

/// Clifford unitary on one or two qubits, stored as its conjugation action
/// U P U^dagger on every local Pauli. Local Paulis are indexed by the bits
/// (x0, z0, x1, z1) packed little-endian into [0, 4^arity).
class LocalClifford {
 public:
  /// Builds from the images of X0, Z0 (, X1, Z1); each image is a signed
  /// Pauli on `arity` qubits. Throws std::invalid_argument if the images do not
  /// satisfy the Pauli commutation relations.
  static LocalClifford from_images(std::span<const PauliString> images);

  int arity() const noexcept { return arity_; }
  int table_size() const noexcept { return 1 << (2 * arity_); }

  std::uint8_t image_bits(int v) const noexcept { return out_[v]; }
  bool image_negative(int v) const noexcept { return neg_[v]; }

  /// U P U^dagger for a local Pauli P given on `arity` qubits.
  PauliString conjugate(const PauliString& local) const;
  PauliString image(int v) const;

  LocalClifford inverse() const;

  /// Output bit j equals parity(input & out_mask(j)).
  std::uint8_t out_mask(int j) const noexcept { return masks_[j]; }
  /// Algebraic normal form of the sign flip: bit m set means the monomial
  /// AND_{i in m} input_i contributes.
  std::uint16_t sign_anf() const noexcept { return anf_; }

  friend bool operator==(const LocalClifford& a, const LocalClifford& b) noexcept {
    return a.arity_ == b.arity_ && a.out_ == b.out_ && a.neg_ == b.neg_;
  }

 private:
  void finalize();

  int arity_ = 1;
  std::array<std::uint8_t, 16> out_{};
  std::array<bool, 16> neg_{};
  std::array<std::uint8_t, 4> masks_{};
  std::uint16_t anf_ = 0;
};

enum class NamedGate { I, H, S, Sdg, X, Y, Z, CNOT, CZ, SWAP };

NamedGate parse_named_gate(std::string_view name);
const LocalClifford& named_gate(NamedGate g);

inline constexpr std::uint32_t kTwoQubitCliffordCount = 11520;
inline constexpr std::uint32_t kSymplecticClassCount = 720;

/// Symplectic 4x4 matrices over GF(2), as the image bits of (X0, Z0, X1, Z1),
/// in lexicographic order of the column tuple.
const std::vector<std::array<std::uint8_t, 4>>& symplectic_group_sp4();

/// Two-qubit Clifford number `id` (mod global phase): symplectic class id / 16
/// with the low four bits giving the signs of the images of X0, Z0, X1, Z1.
const LocalClifford& two_qubit_clifford(std::uint32_t id);
const LocalClifford& two_qubit_clifford_inverse(std::uint32_t id);

inline constexpr std::uint32_t symplectic_class(std::uint32_t id) noexcept { return id >> 4; }

/// Uniform draw over the two-qubit Clifford group modulo phase.
inline std::uint32_t sample_two_qubit_clifford(Rng& rng) {
  return static_cast<std::uint32_t>(rng.below(kTwoQubitCliffordCount));
}

/// Symplectic form of two local Paulis in packed-bit form.
inline constexpr int symplectic_product(std::uint8_t a, std::uint8_t b) noexcept {
  const unsigned s = ((static_cast<unsigned>(a) & 0b0101u) << 1 & b) ^
                     ((static_cast<unsigned>(a) & 0b1010u) >> 1 & b);
  return std::popcount(s) & 1;
}

}  // namespace xent
