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

#include "xent/tableau.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace xent {
namespace {

constexpr std::uint64_t bit(std::size_t i) noexcept { return std::uint64_t{1} << (i & 63); }

// Inclusive prefix parity inside one word.
constexpr std::uint64_t prefix_xor(std::uint64_t v) noexcept {
  v ^= v << 1;
  v ^= v << 2;
  v ^= v << 4;
  v ^= v << 8;
  v ^= v << 16;
  v ^= v << 32;
  return v;
}

std::size_t lowest_set(const std::uint64_t* a, const std::uint64_t* mask, std::size_t wn) {
  for (std::size_t w = 0; w < wn; ++w) {
    const std::uint64_t v = mask ? (a[w] & mask[w]) : a[w];
    if (v) return w * 64 + static_cast<std::size_t>(std::countr_zero(v));
  }
  return SIZE_MAX;
}

}  // namespace

const char* site_kind_name(SiteKind k) noexcept {
  switch (k) {
    case SiteKind::Zero:
      return "zero";
    case SiteKind::Plus:
      return "plus";
    case SiteKind::T:
      return "T";
    case SiteKind::MaximallyMixed:
      return "maximally_mixed";
  }
  return "?";
}

SiteKind parse_site_kind(std::string_view name) {
  if (name == "zero") return SiteKind::Zero;
  if (name == "plus") return SiteKind::Plus;
  if (name == "T") return SiteKind::T;
  if (name == "maximally_mixed" || name == "mixed") return SiteKind::MaximallyMixed;
  throw std::invalid_argument("unknown site kind '" + std::string(name) + "'");
}

StabilizerTableau::StabilizerTableau(std::size_t n)
    : n_(n),
      wn_(words_for(n)),
      xd_(n * wn_, 0),
      zd_(n * wn_, 0),
      xs_(n * wn_, 0),
      zs_(n * wn_, 0),
      sd_(wn_, 0),
      ss_(wn_, 0),
      active_(wn_, 0) {
  if (n == 0) throw std::invalid_argument("tableau needs at least one qubit");
  for (std::size_t q = 0; q < n; ++q) {
    col(xd_, q)[q >> 6] |= bit(q);
    col(zs_, q)[q >> 6] |= bit(q);
  }
}

StabilizerTableau StabilizerTableau::product_state(std::span<const SiteKind> sites) {
  StabilizerTableau t(sites.size());
  for (std::size_t q = 0; q < sites.size(); ++q) {
    switch (sites[q]) {
      case SiteKind::Zero:
        t.active_[q >> 6] |= bit(q);
        break;
      case SiteKind::Plus:
        t.active_[q >> 6] |= bit(q);
        t.apply(NamedGate::H, q);
        break;
      case SiteKind::MaximallyMixed:
        break;
      case SiteKind::T:
        throw std::invalid_argument("the stabilizer engine cannot hold a T state");
    }
  }
  return t;
}

std::size_t StabilizerTableau::rank() const noexcept {
  std::size_t k = 0;
  for (auto w : active_) k += static_cast<std::size_t>(std::popcount(w));
  return k;
}

void StabilizerTableau::check_qubit(std::size_t q) const {
  if (q >= n_)
    throw std::out_of_range("qubit " + std::to_string(q) + " out of range for " + std::to_string(n_) +
                            " qubits");
}

void StabilizerTableau::apply(NamedGate g, std::size_t a) { apply(named_gate(g), a); }
void StabilizerTableau::apply(NamedGate g, std::size_t a, std::size_t b) { apply(named_gate(g), a, b); }

void StabilizerTableau::apply(const LocalClifford& g, std::size_t a) {
  if (g.arity() != 1) throw std::invalid_argument("gate arity does not match site count");
  check_qubit(a);
  const std::uint8_t m0 = g.out_mask(0), m1 = g.out_mask(1);
  const std::uint16_t anf = g.sign_anf();
  auto run = [&](std::uint64_t* x, std::uint64_t* z, std::uint64_t* s) {
    for (std::size_t w = 0; w < wn_; ++w) {
      const std::uint64_t v[2] = {x[w], z[w]};
      std::uint64_t flip = 0;
      if (anf & 2) flip ^= v[0];
      if (anf & 4) flip ^= v[1];
      if (anf & 8) flip ^= v[0] & v[1];
      x[w] = ((m0 & 1) ? v[0] : 0) ^ ((m0 & 2) ? v[1] : 0);
      z[w] = ((m1 & 1) ? v[0] : 0) ^ ((m1 & 2) ? v[1] : 0);
      s[w] ^= flip;
    }
  };
  run(col(xd_, a), col(zd_, a), sd_.data());
  run(col(xs_, a), col(zs_, a), ss_.data());
}

void StabilizerTableau::apply(const LocalClifford& g, std::size_t a, std::size_t b) {
  if (g.arity() != 2) throw std::invalid_argument("gate arity does not match site count");
  check_qubit(a);
  check_qubit(b);
  if (a == b) throw std::invalid_argument("two-qubit gate on a single site");
  const std::uint8_t masks[4] = {g.out_mask(0), g.out_mask(1), g.out_mask(2), g.out_mask(3)};
  std::uint8_t monomials[16];
  int num_monomials = 0;
  for (int m = 1; m < 16; ++m)
    if ((g.sign_anf() >> m) & 1) monomials[num_monomials++] = static_cast<std::uint8_t>(m);
  auto run = [&](std::uint64_t* xa, std::uint64_t* za, std::uint64_t* xb, std::uint64_t* zb,
                 std::uint64_t* s) {
    std::uint64_t* io[4] = {xa, za, xb, zb};
    for (std::size_t w = 0; w < wn_; ++w) {
      const std::uint64_t v[4] = {xa[w], za[w], xb[w], zb[w]};
      std::uint64_t flip = 0;
      for (int k = 0; k < num_monomials; ++k) {
        std::uint64_t t = ~std::uint64_t{0};
        for (int i = 0; i < 4; ++i)
          if ((monomials[k] >> i) & 1) t &= v[i];
        flip ^= t;
      }
      for (int j = 0; j < 4; ++j) {
        std::uint64_t o = 0;
        for (int i = 0; i < 4; ++i)
          if ((masks[j] >> i) & 1) o ^= v[i];
        io[j][w] = o;
      }
      s[w] ^= flip;
    }
  };
  run(col(xd_, a), col(zd_, a), col(xd_, b), col(zd_, b), sd_.data());
  run(col(xs_, a), col(zs_, a), col(xs_, b), col(zs_, b), ss_.data());
}

void StabilizerTableau::apply_pauli(Pauli p, std::size_t q) {
  check_qubit(q);
  const bool px = static_cast<int>(p) & 1, pz = static_cast<int>(p) & 2;
  for (std::size_t w = 0; w < wn_; ++w) {
    std::uint64_t fd = 0, fs = 0;
    if (px) fd ^= col(zd_, q)[w], fs ^= col(zs_, q)[w];
    if (pz) fd ^= col(xd_, q)[w], fs ^= col(xs_, q)[w];
    sd_[w] ^= fd;
    ss_[w] ^= fs;
  }
}

PauliString StabilizerTableau::row(const Words& xs, const Words& zs, const Words& signs,
                                   std::size_t i) const {
  PauliString p(n_);
  const std::size_t w = i >> 6;
  const std::uint64_t m = bit(i);
  for (std::size_t c = 0; c < n_; ++c) {
    p.set_x(c, col(xs, c)[w] & m);
    p.set_z(c, col(zs, c)[w] & m);
  }
  p.set_negative(signs[w] & m);
  return p;
}

std::vector<PauliString> StabilizerTableau::stabilizers() const {
  std::vector<PauliString> out;
  for (std::size_t i = 0; i < n_; ++i)
    if (is_active(i)) out.push_back(stabilizer_row(i));
  return out;
}

MeasureOutcome StabilizerTableau::measure_z(std::size_t q, Rng& rng) {
  return measure_impl(q, std::nullopt, &rng);
}

MeasureOutcome StabilizerTableau::measure_z_forced(std::size_t q, int outcome) {
  if (outcome != 1 && outcome != -1) throw std::invalid_argument("forced outcome must be +1 or -1");
  return measure_impl(q, outcome, nullptr);
}

std::optional<int> StabilizerTableau::peek_z(std::size_t q) const {
  check_qubit(q);
  for (std::size_t w = 0; w < wn_; ++w)
    if (col(xs_, q)[w] || (col(xd_, q)[w] & ~active_[w])) return std::nullopt;
  return deterministic_sign(q) ? -1 : +1;
}

// Sign bit of the product of the active stabilizers S_i whose partner D_i
// anticommutes with Z_q; that product equals +-Z_q when Z_q is in the group.
int StabilizerTableau::deterministic_sign(std::size_t q) const {
  const std::uint64_t* sel = col(xd_, q);
  int phase = 0;  // power of i
  for (std::size_t c = 0; c < n_; ++c) {
    const std::uint64_t* x = col(xs_, c);
    const std::uint64_t* z = col(zs_, c);
    int xpar = 0, zpar = 0, carry = 0;
    for (std::size_t w = 0; w < wn_; ++w) {
      const std::uint64_t xv = x[w] & sel[w], zv = z[w] & sel[w];
      const std::uint64_t before = (prefix_xor(zv) << 1) ^ (carry ? ~std::uint64_t{0} : 0);
      phase += std::popcount(xv & zv) + 2 * std::popcount(before & xv);
      carry ^= std::popcount(zv) & 1;
      xpar ^= std::popcount(xv) & 1;
      zpar ^= std::popcount(zv) & 1;
    }
    phase -= xpar & zpar;
  }
  for (std::size_t w = 0; w < wn_; ++w) phase += 2 * std::popcount(ss_[w] & sel[w]);
  phase &= 3;
  if (phase & 1) throw std::logic_error("stabilizer product picked up an imaginary phase");
  return phase >> 1;
}

void StabilizerTableau::swap_pair(std::size_t i) {
  const std::size_t w = i >> 6;
  const std::uint64_t m = bit(i);
  auto swap_bits = [&](std::uint64_t& a, std::uint64_t& b) {
    if ((a ^ b) & m) {
      a ^= m;
      b ^= m;
    }
  };
  for (std::size_t c = 0; c < n_; ++c) {
    swap_bits(col(xd_, c)[w], col(xs_, c)[w]);
    swap_bits(col(zd_, c)[w], col(zs_, c)[w]);
  }
  swap_bits(sd_[w], ss_[w]);
}

// Multiplies the pivot row (stabilizer or destabilizer row p) into every row
// selected by td (destabilizer half) and ts (stabilizer half). All selected
// rows must commute with the pivot.
void StabilizerTableau::multiply_into(bool pivot_in_stab, std::size_t p, const Words& td,
                                      const Words& ts) {
  const Words& px_src = pivot_in_stab ? xs_ : xd_;
  const Words& pz_src = pivot_in_stab ? zs_ : zd_;
  const std::size_t pw = p >> 6;
  const std::uint64_t pm = bit(p);
  const bool psign = ((pivot_in_stab ? ss_ : sd_)[pw] & pm) != 0;

  Words c0d(wn_, 0), c1d(wn_, 0), c0s(wn_, 0), c1s(wn_, 0);
  auto step = [&](std::uint64_t* x, std::uint64_t* z, const Words& t, Words& c0, Words& c1, bool px,
                  bool pz) {
    for (std::size_t w = 0; w < wn_; ++w) {
      const std::uint64_t xv = x[w], zv = z[w];
      std::uint64_t plus, minus;
      if (px && !pz) {
        plus = ~xv & zv;
        minus = xv & zv;
      } else if (px && pz) {
        plus = xv & ~zv;
        minus = ~xv & zv;
      } else {
        plus = xv & zv;
        minus = xv & ~zv;
      }
      plus &= t[w];
      minus &= t[w];
      const std::uint64_t carry = (c0[w] & plus) | (~c0[w] & minus);
      c0[w] ^= plus | minus;
      c1[w] ^= carry;
      if (px) x[w] ^= t[w];
      if (pz) z[w] ^= t[w];
    }
  };
  for (std::size_t c = 0; c < n_; ++c) {
    const bool px = (col(px_src, c)[pw] & pm) != 0;
    const bool pz = (col(pz_src, c)[pw] & pm) != 0;
    if (!px && !pz) continue;
    step(col(xd_, c), col(zd_, c), td, c0d, c1d, px, pz);
    step(col(xs_, c), col(zs_, c), ts, c0s, c1s, px, pz);
  }
  const std::uint64_t s = psign ? ~std::uint64_t{0} : 0;
  for (std::size_t w = 0; w < wn_; ++w) {
    if ((c0d[w] & td[w]) | (c0s[w] & ts[w]))
      throw std::logic_error("row product picked up an imaginary phase");
    sd_[w] ^= (s ^ c1d[w]) & td[w];
    ss_[w] ^= (s ^ c1s[w]) & ts[w];
  }
}

MeasureOutcome StabilizerTableau::measure_impl(std::size_t q, std::optional<int> forced, Rng* rng) {
  check_qubit(q);
  std::size_t p = lowest_set(col(xs_, q), active_.data(), wn_);
  bool case_ii = p != SIZE_MAX;
  if (!case_ii) {
    for (std::size_t w = 0; w < wn_ && p == SIZE_MAX; ++w) {
      const std::uint64_t v = (col(xd_, q)[w] | col(xs_, q)[w]) & ~active_[w];
      if (v) p = w * 64 + static_cast<std::size_t>(std::countr_zero(v));
    }
    if (p == SIZE_MAX) {
      const int value = deterministic_sign(q) ? -1 : +1;
      MeasureOutcome out{value, false, false};
      if (forced && *forced != value) out.contradiction = true;
      return out;
    }
    // Case (iii): make the destabilizer of logical pair p anticommute with Z_q.
    if (!(col(xd_, q)[p >> 6] & bit(p))) swap_pair(p);
  }

  MeasureOutcome out;
  out.was_random = true;
  out.outcome = forced ? *forced : (rng->coin() ? -1 : +1);

  Words td(col(xd_, q), col(xd_, q) + wn_);
  Words ts(col(xs_, q), col(xs_, q) + wn_);
  td[p >> 6] &= ~bit(p);
  ts[p >> 6] &= ~bit(p);
  multiply_into(case_ii, p, td, ts);

  const std::size_t w = p >> 6;
  const std::uint64_t m = bit(p);
  for (std::size_t c = 0; c < n_; ++c) {
    std::uint64_t& dx = col(xd_, c)[w];
    std::uint64_t& dz = col(zd_, c)[w];
    std::uint64_t& sx = col(xs_, c)[w];
    std::uint64_t& sz = col(zs_, c)[w];
    if (case_ii) {
      dx = (dx & ~m) | (sx & m);
      dz = (dz & ~m) | (sz & m);
    }
    sx &= ~m;
    sz = c == q ? (sz | m) : (sz & ~m);
  }
  if (case_ii) sd_[w] = (sd_[w] & ~m) | (ss_[w] & m);
  ss_[w] = out.outcome < 0 ? (ss_[w] | m) : (ss_[w] & ~m);
  active_[w] |= m;
  return out;
}

void StabilizerTableau::dephase_z(std::size_t q) {
  check_qubit(q);
  const std::size_t p = lowest_set(col(xs_, q), active_.data(), wn_);
  if (p == SIZE_MAX) return;
  measure_impl(q, +1, nullptr);
  active_[p >> 6] &= ~bit(p);
}

void StabilizerTableau::validate() const {
  std::vector<PauliString> d, s;
  for (std::size_t i = 0; i < n_; ++i) {
    d.push_back(destabilizer_row(i));
    s.push_back(stabilizer_row(i));
  }
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      if (!d[i].commutes_with(s[j]) != (i == j)) throw std::logic_error("destabilizer pairing broken");
      if (i < j && (!d[i].commutes_with(d[j]) || !s[i].commutes_with(s[j])))
        throw std::logic_error("tableau rows fail to commute");
    }
  std::uint64_t stray = 0;
  if (n_ & 63) stray = active_.back() >> (n_ & 63);
  if (stray) throw std::logic_error("active mask has bits beyond n");
}

}  // namespace xent
