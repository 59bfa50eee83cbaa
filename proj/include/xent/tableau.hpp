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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "xent/local_clifford.hpp"
#include "xent/pauli.hpp"
#include "xent/random.hpp"

namespace xent {

/// Per-site initial state. Not every engine accepts every kind: the tableau
/// rejects T, the dense engine rejects MaximallyMixed.
enum class SiteKind : std::uint8_t { Zero, Plus, T, MaximallyMixed };

const char* site_kind_name(SiteKind k) noexcept;
SiteKind parse_site_kind(std::string_view name);

struct MeasureOutcome {
  int outcome = +1;  // +1 or -1
  bool was_random = false;
  bool contradiction = false;  // forced outcome impossible
};

/// Mixed or pure stabilizer state on n qubits.
///
/// The tableau always holds a full symplectic basis: destabilizer rows D_i and
/// stabilizer rows S_i with D_i, S_i anticommuting pairwise and commuting with
/// every other row. Stabilizer slot i is either active (S_i is a generator of
/// the state's group) or inactive, in which case (D_i, S_i) is a pair of
/// logical operators of the mixed state. The rank k is the number of active
/// slots; k == n iff the state is pure.
///
/// Storage is column-major: for every qubit the X and Z bits of all rows are
/// packed into 64-bit words, so gates touch O(n/64) words and a measurement
/// updates all affected rows at once.
class StabilizerTableau {
 public:
  /// Maximally mixed state on n qubits.
  explicit StabilizerTableau(std::size_t n);

  static StabilizerTableau product_state(std::span<const SiteKind> sites);

  std::size_t num_qubits() const noexcept { return n_; }
  std::size_t rank() const noexcept;
  bool is_pure() const noexcept { return rank() == n_; }

  void apply(const LocalClifford& g, std::size_t a);
  void apply(const LocalClifford& g, std::size_t a, std::size_t b);
  void apply(NamedGate g, std::size_t a);
  void apply(NamedGate g, std::size_t a, std::size_t b);

  /// Measures Z on qubit q, drawing random outcomes from rng.
  MeasureOutcome measure_z(std::size_t q, Rng& rng);
  /// Measures Z on qubit q, forcing the outcome (+1 or -1). A deterministic
  /// measurement that disagrees with `outcome` leaves the state untouched and
  /// reports contradiction.
  MeasureOutcome measure_z_forced(std::size_t q, int outcome);
  /// Outcome of a Z measurement if it is deterministic.
  std::optional<int> peek_z(std::size_t q) const;

  void apply_pauli(Pauli p, std::size_t q);

  /// Completely dephases qubit q in the Z basis: keeps exactly the stabilizers
  /// that commute with Z_q.
  void dephase_z(std::size_t q);

  PauliString stabilizer_row(std::size_t i) const { return row(xs_, zs_, ss_, i); }
  PauliString destabilizer_row(std::size_t i) const { return row(xd_, zd_, sd_, i); }
  bool is_active(std::size_t i) const noexcept { return (active_[i >> 6] >> (i & 63)) & 1; }

  /// Generators of the stabilizer group (the active rows).
  std::vector<PauliString> stabilizers() const;

  /// Throws std::logic_error if the symplectic structure is broken. O(n^3).
  void validate() const;

  friend bool operator==(const StabilizerTableau& a, const StabilizerTableau& b) noexcept = default;

 private:
  using Words = std::vector<std::uint64_t>;

  std::uint64_t* col(Words& v, std::size_t q) noexcept { return v.data() + q * wn_; }
  const std::uint64_t* col(const Words& v, std::size_t q) const noexcept { return v.data() + q * wn_; }
  PauliString row(const Words& xs, const Words& zs, const Words& signs, std::size_t i) const;
  void check_qubit(std::size_t q) const;

  MeasureOutcome measure_impl(std::size_t q, std::optional<int> forced, Rng* rng);
  int deterministic_sign(std::size_t q) const;
  void swap_pair(std::size_t i);
  void multiply_into(bool pivot_in_stab, std::size_t p, const Words& td, const Words& ts);

  std::size_t n_ = 0;
  std::size_t wn_ = 0;
  Words xd_, zd_, xs_, zs_;  // n columns of wn_ words each
  Words sd_, ss_;            // signs, wn_ words
  Words active_;             // active stabilizer slots, wn_ words
};

}  // namespace xent
