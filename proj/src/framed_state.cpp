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

#include "xent/framed_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace xent {
namespace {

constexpr double kCut = 1e-12;

}  // namespace

FramedState::FramedState(std::span<const SiteKind> sites)
    : n_(sites.size()), frame_mask_(words_for(sites.size()), 0) {
  if (n_ == 0) throw std::invalid_argument("framed state needs at least one qubit");
  for (std::size_t q = 0; q < n_; ++q) {
    inv_x_.push_back(PauliString::single(n_, q, Pauli::X));
    inv_z_.push_back(PauliString::single(n_, q, Pauli::Z));
    switch (sites[q]) {
      case SiteKind::Zero:
        break;
      case SiteKind::Plus:
        std::swap(inv_x_[q], inv_z_[q]);  // frame H on this site
        break;
      case SiteKind::T:
        dense_sites_.push_back(q);
        continue;
      case SiteKind::MaximallyMixed:
        throw std::invalid_argument("the framed engine holds pure states only");
    }
    frame_mask_[q >> 6] |= std::uint64_t{1} << (q & 63);
  }
  if (dense_sites_.size() > kMaxDense) throw std::length_error("too many magic sites for the dense block");
  const std::size_t t = dense_sites_.size();
  // phi = |T>^{(x) t}
  phi_ = Eigen::VectorXcd(Eigen::Index{1} << t);
  const std::complex<double> w = std::polar(1.0, std::numbers::pi / 4);
  const double amp = std::pow(0.5, 0.5 * static_cast<double>(t));
  for (Eigen::Index i = 0; i < phi_.size(); ++i)
    phi_(i) = amp * std::pow(w, std::popcount(static_cast<std::uint64_t>(i)));
}

void FramedState::conjugate_rows(const LocalClifford& inverse, std::span<const std::size_t> sites) {
  const int k = static_cast<int>(sites.size());
  std::vector<PauliString> fresh;
  for (int v = 0; v < 2 * k; ++v) {
    const int bits = inverse.image_bits(1 << v);
    PhasedPauli acc(n_);
    if (inverse.image_negative(1 << v)) acc.phase = 2;
    for (int j = 0; j < k; ++j) {
      const bool x = (bits >> (2 * j)) & 1, z = (bits >> (2 * j + 1)) & 1;
      if (x && z) acc.phase = (acc.phase + 1) & 3;
      if (x) acc *= inv_x_[sites[j]];
      if (z) acc *= inv_z_[sites[j]];
    }
    fresh.push_back(acc.to_hermitian());
  }
  for (int j = 0; j < k; ++j) {
    inv_x_[sites[j]] = std::move(fresh[2 * j]);
    inv_z_[sites[j]] = std::move(fresh[2 * j + 1]);
  }
}

void FramedState::apply(const LocalClifford& g, std::size_t a) {
  if (g.arity() != 1) throw std::invalid_argument("gate arity does not match site count");
  if (a >= n_) throw std::out_of_range("qubit out of range");
  const std::size_t s[1] = {a};
  conjugate_rows(g.inverse(), s);
}

void FramedState::apply(const LocalClifford& g, std::size_t a, std::size_t b) {
  apply_with_inverse(g.inverse(), a, b);
}

void FramedState::apply_with_inverse(const LocalClifford& inverse, std::size_t a, std::size_t b) {
  if (inverse.arity() != 2) throw std::invalid_argument("gate arity does not match site count");
  if (a >= n_ || b >= n_) throw std::out_of_range("qubit out of range");
  if (a == b) throw std::invalid_argument("two-qubit gate on a single site");
  const std::size_t s[2] = {a, b};
  conjugate_rows(inverse, s);
}

void FramedState::apply_pauli(Pauli p, std::size_t q) {
  if (q >= n_) throw std::out_of_range("qubit out of range");
  const int v = static_cast<int>(p);
  if (v & 1) inv_z_[q].negate();
  if (v & 2) inv_x_[q].negate();
}

FramedState::Analysis FramedState::analyze(std::size_t q) const {
  if (q >= n_) throw std::out_of_range("qubit out of range");
  const PauliString& P = inv_z_[q];
  Analysis a;
  for (std::size_t w = 0; w < frame_mask_.size(); ++w) {
    const std::uint64_t hit = P.x_words()[w] & frame_mask_[w];
    if (hit) {
      a.kind = Kind::Frame;
      a.pivot = w * 64 + static_cast<std::size_t>(std::countr_zero(hit));
      a.p_plus = 0.5;
      return a;
    }
  }
  std::uint64_t xm = 0, zm = 0;
  for (std::size_t k = 0; k < dense_sites_.size(); ++k) {
    xm |= std::uint64_t{P.x(dense_sites_[k])} << k;
    zm |= std::uint64_t{P.z(dense_sites_[k])} << k;
  }
  const double sign = P.negative() ? -1.0 : 1.0;
  if (xm == 0 && zm == 0) {
    a.kind = Kind::Deterministic;
    a.p_plus = sign > 0 ? 1.0 : 0.0;
    return a;
  }
  static constexpr std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::complex<double> base = sign * kIPow[std::popcount(xm & zm) & 3];
  a.kind = Kind::Dense;
  a.image.resize(phi_.size());
  for (Eigen::Index i = 0; i < phi_.size(); ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    a.image(static_cast<Eigen::Index>(u ^ xm)) = (std::popcount(u & zm) & 1 ? -base : base) * phi_(i);
  }
  const double e = phi_.dot(a.image).real();
  a.p_plus = std::clamp(0.5 * (1.0 + e), 0.0, 1.0);
  if (a.p_plus < kCut) a.p_plus = 0.0;
  if (a.p_plus > 1.0 - kCut) a.p_plus = 1.0;
  return a;
}

void FramedState::collapse_frame(std::size_t q, std::size_t pivot, int outcome) {
  const PauliString P = inv_z_[q];
  const PauliString zj = PauliString::single(n_, pivot, Pauli::Z);
  auto update = [&](PauliString& r) {
    const bool anti_z = r.x(pivot);
    const bool anti_p = !r.commutes_with(P);
    if (anti_z && anti_p) {
      r.negate();
    } else if (anti_z || anti_p) {
      PhasedPauli acc(r);
      if (anti_z) {
        acc *= P;
        acc *= zj;
      } else {
        acc *= zj;
        acc *= P;
      }
      if (outcome < 0) acc.phase = (acc.phase + 2) & 3;
      r = acc.to_hermitian();
    }
  };
  for (auto& r : inv_x_) update(r);
  for (auto& r : inv_z_) update(r);
}

void FramedState::collapse_dense(const Analysis& a, int outcome, double prob) {
  const double s = outcome > 0 ? 1.0 : -1.0;
  phi_ = (phi_ + s * a.image) / (2.0 * std::sqrt(prob));
}

FramedMeasurement FramedState::measure_z(std::size_t q, Rng& rng) {
  const Analysis a = analyze(q);
  FramedMeasurement m;
  switch (a.kind) {
    case Kind::Frame:
      m.outcome = rng.coin() ? -1 : +1;
      m.probability = 0.5;
      m.was_random = true;
      collapse_frame(q, a.pivot, m.outcome);
      break;
    case Kind::Deterministic:
      m.outcome = a.p_plus > 0.5 ? +1 : -1;
      break;
    case Kind::Dense:
      m.outcome = rng.uniform() < a.p_plus ? +1 : -1;
      m.probability = m.outcome > 0 ? a.p_plus : 1.0 - a.p_plus;
      m.was_random = a.p_plus > 0.0 && a.p_plus < 1.0;
      if (m.was_random) collapse_dense(a, m.outcome, m.probability);
      break;
  }
  return m;
}

FramedMeasurement FramedState::measure_z_forced(std::size_t q, int outcome) {
  if (outcome != 1 && outcome != -1) throw std::invalid_argument("forced outcome must be +1 or -1");
  const Analysis a = analyze(q);
  FramedMeasurement m;
  m.outcome = outcome;
  m.was_random = a.kind == Kind::Frame || (a.p_plus > 0.0 && a.p_plus < 1.0);
  m.probability = outcome > 0 ? a.p_plus : 1.0 - a.p_plus;
  if (m.probability == 0.0) {
    deficit_ = -std::numeric_limits<double>::infinity();
    return m;
  }
  deficit_ += std::log2(m.probability);
  if (a.kind == Kind::Frame)
    collapse_frame(q, a.pivot, outcome);
  else if (m.was_random)
    collapse_dense(a, outcome, m.probability);
  return m;
}

}  // namespace xent
