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

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "xent/local_clifford.hpp"
#include "xent/pauli.hpp"
#include "xent/random.hpp"
#include "xent/tableau.hpp"

namespace xent {

struct FramedMeasurement {
  int outcome = +1;
  double probability = 1.0;
  bool was_random = false;
};

/// Exact pure state of the form U (|0...0> (x) |phi>): a Clifford frame U over
/// all n qubits and a dense vector phi over the t sites that started in |T>.
/// Clifford gates, Pauli errors and Z measurements keep this form, so
/// circuits with few magic sites cost O(n^2/64 + 2^t) per step instead of 2^n.
///
/// The frame is stored through its inverse action on single-qubit Paulis,
/// rows U^dag X_q U and U^dag Z_q U.
class FramedState {
 public:
  static constexpr std::size_t kMaxDense = 24;

  explicit FramedState(std::span<const SiteKind> sites);

  std::size_t num_qubits() const noexcept { return n_; }
  std::size_t num_dense() const noexcept { return dense_sites_.size(); }
  double log2_norm_deficit() const noexcept { return deficit_; }

  void apply(const LocalClifford& g, std::size_t a);
  void apply(const LocalClifford& g, std::size_t a, std::size_t b);
  /// Same as apply(g, a, b) with g's inverse supplied by the caller.
  void apply_with_inverse(const LocalClifford& inverse, std::size_t a, std::size_t b);
  void apply_pauli(Pauli p, std::size_t q);

  FramedMeasurement measure_z(std::size_t q, Rng& rng);
  /// Zero-probability outcomes report probability 0 and set the deficit to
  /// -infinity without changing the state.
  FramedMeasurement measure_z_forced(std::size_t q, int outcome);

  const PauliString& frame_x(std::size_t q) const { return inv_x_[q]; }
  const PauliString& frame_z(std::size_t q) const { return inv_z_[q]; }
  const Eigen::VectorXcd& dense_part() const noexcept { return phi_; }

 private:
  enum class Kind { Frame, Dense, Deterministic };
  struct Analysis {
    Kind kind;
    std::size_t pivot = 0;    // frame case: register site with X support
    double p_plus = 1.0;      // dense / deterministic
    Eigen::VectorXcd image;   // dense case: sign * P_D phi
  };

  Analysis analyze(std::size_t q) const;
  void collapse_frame(std::size_t q, std::size_t pivot, int outcome);
  void collapse_dense(const Analysis& a, int outcome, double prob);
  void conjugate_rows(const LocalClifford& inverse, std::span<const std::size_t> sites);

  std::size_t n_;
  std::vector<PauliString> inv_x_, inv_z_;
  std::vector<std::size_t> dense_sites_;
  std::vector<std::uint64_t> frame_mask_;  // sites outside the dense block
  Eigen::VectorXcd phi_;
  double deficit_ = 0.0;
};

}  // namespace xent
