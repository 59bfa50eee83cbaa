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
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "xent/local_clifford.hpp"
#include "xent/pauli.hpp"
#include "xent/random.hpp"
#include "xent/tableau.hpp"

namespace xent {

inline constexpr std::size_t kDefaultDenseCap = 22;

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

/// Haar-random 4x4 unitary: QR of a complex Gaussian matrix with the phases of
/// R's diagonal folded into Q.
Matrix4c sample_haar_2q(Rng& rng);

/// Dense matrix of a signed Pauli; qubit i is bit i of the basis index.
Eigen::MatrixXcd pauli_matrix(const PauliString& p);

/// Unitary (up to global phase) implementing a one- or two-qubit Clifford;
/// local qubit 0 is bit 0 of the matrix index.
Eigen::MatrixXcd clifford_matrix(const LocalClifford& g);

/// Cached matrix of two_qubit_clifford(id).
const Matrix4c& two_qubit_clifford_matrix(std::uint32_t id);

struct DenseMeasurement {
  int outcome = +1;
  double probability = 1.0;
};

/// Pure state on n qubits as 2^n complex amplitudes, qubit i = bit i.
/// Forced measurements renormalize and accumulate log2 of their Born
/// probabilities in log2_norm_deficit.
template <class Scalar>
class DenseState {
 public:
  using Complex = std::complex<Scalar>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  /// Probabilities below this are treated as exact zeros.
  static constexpr double kZeroProbability = std::is_same_v<Scalar, float> ? 1e-10 : 1e-20;

  DenseState(std::span<const SiteKind> sites, std::size_t cap = kDefaultDenseCap) : n_(sites.size()) {
    if (n_ == 0) throw std::invalid_argument("dense state needs at least one qubit");
    if (n_ > cap)
      throw std::length_error("dense state on " + std::to_string(n_) + " qubits exceeds the cap of " +
                              std::to_string(cap));
    amps_ = Vector::Zero(Eigen::Index{1} << n_);
    amps_(0) = 1;
    const double h = std::sqrt(0.5);
    Matrix2c single;
    for (std::size_t q = 0; q < n_; ++q) {
      switch (sites[q]) {
        case SiteKind::Zero:
          continue;
        case SiteKind::Plus:
          single << h, 0, h, 0;
          break;
        case SiteKind::T:
          single << h, 0, std::polar(h, std::numbers::pi / 4), 0;
          break;
        case SiteKind::MaximallyMixed:
          throw std::invalid_argument("the dense engine holds pure states only");
      }
      apply(single, q);
    }
  }

  std::size_t num_qubits() const noexcept { return n_; }
  const Vector& amplitudes() const noexcept { return amps_; }
  Vector& amplitudes() noexcept { return amps_; }
  double log2_norm_deficit() const noexcept { return deficit_; }
  bool impossible() const noexcept { return deficit_ == -std::numeric_limits<double>::infinity(); }
  double norm() const { return static_cast<double>(amps_.norm()); }

  void apply(const Matrix2c& u, std::size_t a) {
    check(a);
    const std::size_t d = std::size_t{1} << n_, m = std::size_t{1} << a;
    const Complex u00(u(0, 0)), u01(u(0, 1)), u10(u(1, 0)), u11(u(1, 1));
    Complex* v = amps_.data();
    for (std::size_t base = 0; base < d; base += 2 * m)
      for (std::size_t i = base; i < base + m; ++i) {
        const Complex v0 = v[i], v1 = v[i + m];
        v[i] = mul(u00, v0) + mul(u01, v1);
        v[i + m] = mul(u10, v0) + mul(u11, v1);
      }
  }

  /// Applies a 4x4 unitary whose local qubit 0 is site a and qubit 1 is b.
  void apply(const Matrix4c& u, std::size_t a, std::size_t b) {
    check(a);
    check(b);
    if (a == b) throw std::invalid_argument("two-qubit gate on a single site");
    const std::size_t ma = std::size_t{1} << a, mb = std::size_t{1} << b;
    const std::size_t lo = std::min(ma, mb), hi = std::max(ma, mb);
    Complex w[4][4];
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) w[r][c] = Complex(u(r, c));
    Complex* v = amps_.data();
    const std::size_t quarter = (std::size_t{1} << n_) >> 2;
    for (std::size_t k = 0; k < quarter; ++k) {
      std::size_t i = ((k & ~(lo - 1)) << 1) | (k & (lo - 1));
      i = ((i & ~(hi - 1)) << 1) | (i & (hi - 1));
      Complex* p0 = v + i;
      Complex* p1 = v + (i | ma);
      Complex* p2 = v + (i | mb);
      Complex* p3 = v + (i | ma | mb);
      const Complex x[4] = {*p0, *p1, *p2, *p3};
      Complex* out[4] = {p0, p1, p2, p3};
      for (int r = 0; r < 4; ++r) {
        Scalar re = 0, im = 0;
        for (int c = 0; c < 4; ++c) {
          re += w[r][c].real() * x[c].real() - w[r][c].imag() * x[c].imag();
          im += w[r][c].real() * x[c].imag() + w[r][c].imag() * x[c].real();
        }
        *out[r] = Complex(re, im);
      }
    }
  }

  void apply(const LocalClifford& g, std::size_t a) { apply(Matrix2c(clifford_matrix(g)), a); }
  void apply(const LocalClifford& g, std::size_t a, std::size_t b) { apply(Matrix4c(clifford_matrix(g)), a, b); }

  void apply_pauli(Pauli p, std::size_t q) {
    Matrix2c m;
    switch (p) {
      case Pauli::I:
        return;
      case Pauli::X:
        m << 0, 1, 1, 0;
        break;
      case Pauli::Y:
        m << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
        break;
      case Pauli::Z:
        m << 1, 0, 0, -1;
        break;
    }
    apply(m, q);
  }

  /// Born probability of outcome +1 (bit 0) on qubit q.
  double probability_plus(std::size_t q) const {
    check(q);
    const std::size_t d = std::size_t{1} << n_, m = std::size_t{1} << q;
    const Complex* v = amps_.data();
    double p0 = 0, p1 = 0;
    for (std::size_t base = 0; base < d; base += 2 * m)
      for (std::size_t i = base; i < base + m; ++i) {
        p0 += std::norm(v[i]);
        p1 += std::norm(v[i + m]);
      }
    return p0 / (p0 + p1);
  }

  DenseMeasurement measure_z(std::size_t q, Rng& rng) {
    double p_plus = probability_plus(q);
    if (p_plus < kZeroProbability) p_plus = 0;
    if (1 - p_plus < kZeroProbability) p_plus = 1;
    const int outcome = rng.uniform() < p_plus ? +1 : -1;
    const double prob = outcome > 0 ? p_plus : 1 - p_plus;
    project(q, outcome, prob);
    return {outcome, prob};
  }

  /// Projects onto `outcome`. Zero-probability branches leave the amplitudes
  /// alone and set the deficit to -infinity.
  DenseMeasurement measure_z_forced(std::size_t q, int outcome) {
    const double p_plus = probability_plus(q);
    const double prob = outcome > 0 ? p_plus : 1 - p_plus;
    if (prob < kZeroProbability) {
      deficit_ = -std::numeric_limits<double>::infinity();
      return {outcome, 0.0};
    }
    deficit_ += std::log2(prob);
    project(q, outcome, prob);
    return {outcome, prob};
  }

  /// z-values 2^n |<x|psi>|^2 over all bitstrings x.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> bitstring_distribution() const {
    const Scalar scale = static_cast<Scalar>(std::ldexp(1.0, static_cast<int>(n_)));
    return amps_.cwiseAbs2() * scale;
  }

 private:
  // Plain complex product; std::complex's operator* pays for C99 inf/nan rules.
  static Complex mul(Complex a, Complex b) noexcept {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
  }

  void check(std::size_t q) const {
    if (q >= n_) throw std::out_of_range("qubit " + std::to_string(q) + " out of range");
  }

  void project(std::size_t q, int outcome, double prob) {
    const std::size_t d = std::size_t{1} << n_, m = std::size_t{1} << q;
    const Scalar s = static_cast<Scalar>(1.0 / std::sqrt(prob));
    const std::size_t keep = outcome < 0 ? m : 0, drop = m - keep;
    Complex* v = amps_.data();
    for (std::size_t base = 0; base < d; base += 2 * m)
      for (std::size_t i = base; i < base + m; ++i) {
        v[i + keep] *= s;
        v[i + drop] = 0;
      }
  }

  std::size_t n_;
  Vector amps_;
  double deficit_ = 0.0;
};

}  // namespace xent
