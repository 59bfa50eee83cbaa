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

#include "xent/dense_state.hpp"

#include <array>
#include <bit>
#include <memory>
#include <mutex>

namespace xent {

Matrix4c sample_haar_2q(Rng& rng) {
  Matrix4c g;
  const double s = std::sqrt(0.5);
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) {
      const double re = rng.normal(), im = rng.normal();
      g(r, c) = {s * re, s * im};
    }
  Eigen::HouseholderQR<Matrix4c> qr(g);
  const Matrix4c q = qr.householderQ();
  const Matrix4c r = qr.matrixQR().triangularView<Eigen::Upper>();
  Matrix4c u = q;
  for (int k = 0; k < 4; ++k) {
    const std::complex<double> d = r(k, k);
    u.col(k) *= d / std::abs(d);
  }
  return u;
}

Eigen::MatrixXcd pauli_matrix(const PauliString& p) {
  const std::size_t n = p.size(), d = std::size_t{1} << n;
  std::size_t xm = 0, zm = 0;
  for (std::size_t q = 0; q < n; ++q) {
    xm |= std::size_t{p.x(q)} << q;
    zm |= std::size_t{p.z(q)} << q;
  }
  static constexpr std::array<std::complex<double>, 4> kIPow = {
      std::complex<double>{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::complex<double> base =
      kIPow[std::popcount(xm & zm) & 3] * (p.negative() ? -1.0 : 1.0);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t b = 0; b < d; ++b) m(b ^ xm, b) = (std::popcount(zm & b) & 1) ? -base : base;
  return m;
}

Eigen::MatrixXcd clifford_matrix(const LocalClifford& g) {
  // sum_P U P U^dag A P^dag = 2^n tr(U^dag A) U for any A; try Paulis until
  // the trace is nonzero.
  const int n = g.arity();
  const auto d = Eigen::Index{1} << n;
  for (int a = 0; a < g.table_size(); ++a) {
    PauliString pa(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      pa.set_x(j, (a >> (2 * j)) & 1);
      pa.set_z(j, (a >> (2 * j + 1)) & 1);
    }
    const Eigen::MatrixXcd am = pauli_matrix(pa);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (int v = 0; v < g.table_size(); ++v) {
      PauliString pv(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        pv.set_x(j, (v >> (2 * j)) & 1);
        pv.set_z(j, (v >> (2 * j + 1)) & 1);
      }
      m += pauli_matrix(g.image(v)) * am * pauli_matrix(pv);
    }
    const double scale = m.col(0).norm();
    if (scale > 1e-6) {
      // Fix the global phase so the first nonzero entry of column 0 is real.
      Eigen::Index row = 0;
      while (std::abs(m(row, 0)) < 1e-9) ++row;
      const std::complex<double> phase = m(row, 0) / std::abs(m(row, 0));
      return m / (scale * phase);
    }
  }
  throw std::logic_error("failed to reconstruct a Clifford unitary");
}

const Matrix4c& two_qubit_clifford_matrix(std::uint32_t id) {
  static std::unique_ptr<Matrix4c[]> table;
  static std::once_flag once;
  std::call_once(once, [] {
    table = std::make_unique<Matrix4c[]>(kTwoQubitCliffordCount);
    for (std::uint32_t k = 0; k < kTwoQubitCliffordCount; ++k) table[k] = clifford_matrix(two_qubit_clifford(k));
  });
  if (id >= kTwoQubitCliffordCount) throw std::out_of_range("two-qubit Clifford id out of range");
  return table[id];
}

}  // namespace xent
