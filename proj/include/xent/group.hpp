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

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "xent/pauli.hpp"

namespace xent {

// Operations on stabilizer groups given as lists of commuting, signed
// generators. Generators may be dependent on input; outputs never are.

/// Reduced row echelon form over GF(2) with pivot columns ordered
/// x_0, z_0, x_1, z_1, ... Signs ride along with row products, so the result
/// generates the same signed group. Unique for a given group; throws
/// std::invalid_argument if the generators produce -I.
std::vector<PauliString> canonicalize(std::vector<PauliString> gens);

std::size_t group_rank(std::span<const PauliString> gens);

/// Signed membership test.
bool group_contains(std::span<const PauliString> gens, const PauliString& p);

/// Generators of the subgroup of elements acting as identity outside
/// `subset`, expressed on the |subset| qubits in the order listed.
std::vector<PauliString> restrict_group(std::span<const PauliString> gens,
                                        std::span<const std::size_t> subset);

/// tr(rho_A rho_B) for the stabilizer states rho = 2^{-r} sum_{g in S} g.
struct GroupOverlap {
  bool zero = false;  // some common unsigned element has opposite signs
  int log2 = 0;       // dim(S_A cap S_B) - r when not zero

  double value() const { return zero ? 0.0 : std::ldexp(1.0, log2); }
};

GroupOverlap group_overlap(std::span<const PauliString> a, std::span<const PauliString> b,
                           std::size_t r);

}  // namespace xent
