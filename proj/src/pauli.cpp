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

#include "xent/pauli.hpp"

#include <stdexcept>

namespace xent {

PauliString PauliString::parse(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  PauliString p(text.size());
  for (std::size_t q = 0; q < text.size(); ++q) {
    switch (text[q]) {
      case 'I':
      case '_':
        break;
      case 'X':
        p.set(q, Pauli::X);
        break;
      case 'Y':
        p.set(q, Pauli::Y);
        break;
      case 'Z':
        p.set(q, Pauli::Z);
        break;
      default:
        throw std::invalid_argument("bad Pauli character '" + std::string(1, text[q]) + "'");
    }
  }
  p.set_negative(negative);
  return p;
}

PauliString PauliString::single(std::size_t n, std::size_t qubit, Pauli p) {
  PauliString s(n);
  s.set(qubit, p);
  return s;
}

void PauliString::set(std::size_t q, Pauli p) noexcept {
  const auto v = static_cast<int>(p);
  set_bit(xs_, q, v & 1);
  set_bit(zs_, q, v & 2);
}

bool PauliString::is_identity() const noexcept {
  for (std::size_t w = 0; w < xs_.size(); ++w)
    if (xs_[w] | zs_[w]) return false;
  return true;
}

std::size_t PauliString::weight() const noexcept {
  std::size_t c = 0;
  for (std::size_t w = 0; w < xs_.size(); ++w) c += std::popcount(xs_[w] | zs_[w]);
  return c;
}

bool PauliString::commutes_with(const PauliString& other) const noexcept {
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < xs_.size(); ++w)
    acc ^= (xs_[w] & other.zs_[w]) ^ (zs_[w] & other.xs_[w]);
  return (std::popcount(acc) & 1) == 0;
}

int product_phase(const PauliString& a, const PauliString& b) noexcept {
  int k = 0;
  for (std::size_t w = 0; w < a.num_words(); ++w)
    k += product_phase_word(a.x_words()[w], a.z_words()[w], b.x_words()[w], b.z_words()[w]);
  return k & 3;
}

PauliString& PauliString::operator*=(const PauliString& rhs) {
  if (rhs.n_ != n_) throw std::invalid_argument("PauliString size mismatch");
  const int k = product_phase(*this, rhs);
  if (k & 1) throw std::logic_error("product of anticommuting Paulis is not Hermitian");
  negative_ = negative_ ^ rhs.negative_ ^ (k == 2);
  for (std::size_t w = 0; w < xs_.size(); ++w) {
    xs_[w] ^= rhs.xs_[w];
    zs_[w] ^= rhs.zs_[w];
  }
  return *this;
}

std::string PauliString::str() const {
  std::string s(1, negative_ ? '-' : '+');
  for (std::size_t q = 0; q < n_; ++q) s.push_back("_XZY"[static_cast<int>(at(q))]);
  return s;
}

bool operator<(const PauliString& a, const PauliString& b) noexcept {
  if (a.xs_ != b.xs_) return a.xs_ < b.xs_;
  if (a.zs_ != b.zs_) return a.zs_ < b.zs_;
  return a.negative_ < b.negative_;
}

PhasedPauli& PhasedPauli::operator*=(const PauliString& rhs) {
  phase = (phase + product_phase(op, rhs) + (rhs.negative() ? 2 : 0)) & 3;
  for (std::size_t w = 0; w < op.num_words(); ++w) {
    op.x_words()[w] ^= rhs.x_words()[w];
    op.z_words()[w] ^= rhs.z_words()[w];
  }
  return *this;
}

PhasedPauli& PhasedPauli::operator*=(const PhasedPauli& rhs) {
  *this *= rhs.op;
  phase = (phase + rhs.phase) & 3;
  return *this;
}

PauliString PhasedPauli::to_hermitian() const {
  if (!hermitian()) throw std::logic_error("Pauli product carries a phase of +-i");
  PauliString p = op;
  p.set_negative(phase == 2);
  return p;
}

}  // namespace xent
