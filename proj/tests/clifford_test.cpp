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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include "naive_stabilizer.hpp"
#include "xent/group.hpp"
#include "xent/local_clifford.hpp"
#include "xent/pauli.hpp"
#include "xent/tableau.hpp"

using namespace xent;
using xent::testing::NaiveStabilizer;

namespace {

PauliString random_pauli(std::size_t n, Rng& rng) {
  PauliString p(n);
  for (std::size_t q = 0; q < n; ++q) p.set(q, static_cast<Pauli>(rng.below(4)));
  p.set_negative(rng.coin());
  return p;
}

std::vector<SiteKind> random_sites(std::size_t n, Rng& rng, bool allow_mixed = true) {
  std::vector<SiteKind> s(n);
  for (auto& k : s) {
    const auto r = rng.below(allow_mixed ? 3 : 2);
    k = r == 0 ? SiteKind::Zero : r == 1 ? SiteKind::Plus : SiteKind::MaximallyMixed;
  }
  return s;
}

void scramble(StabilizerTableau& t, Rng& rng, int gates) {
  const std::size_t n = t.num_qubits();
  for (int g = 0; g < gates; ++g) {
    if (n >= 2 && rng.coin()) {
      const std::size_t a = rng.below(n);
      std::size_t b = rng.below(n - 1);
      if (b >= a) ++b;
      t.apply(two_qubit_clifford(sample_two_qubit_clifford(rng)), a, b);
    } else {
      t.apply(static_cast<NamedGate>(1 + rng.below(6)), rng.below(n));
    }
  }
}

using CMat = Eigen::MatrixXcd;

// Dense matrix of a signed Pauli, qubit i = bit i of the basis index.
CMat pauli_matrix(const PauliString& p) {
  const std::size_t n = p.size(), d = std::size_t{1} << n;
  std::size_t xm = 0, zm = 0;
  for (std::size_t q = 0; q < n; ++q) {
    xm |= std::size_t{p.x(q)} << q;
    zm |= std::size_t{p.z(q)} << q;
  }
  const std::complex<double> i_pow[4] = {1.0, {0.0, 1.0}, -1.0, {0.0, -1.0}};
  const std::complex<double> base = i_pow[std::popcount(xm & zm) & 3] * (p.negative() ? -1.0 : 1.0);
  CMat m = CMat::Zero(d, d);
  for (std::size_t b = 0; b < d; ++b)
    m(b ^ xm, b) = base * ((std::popcount(zm & b) & 1) ? -1.0 : 1.0);
  return m;
}

CMat density(const std::vector<PauliString>& gens, std::size_t r) {
  const std::size_t d = std::size_t{1} << r;
  CMat rho = CMat::Zero(d, d);
  for (const auto& e : xent::testing::all_elements(gens, r)) rho += pauli_matrix(e);
  return rho / static_cast<double>(d);
}

}  // namespace

TEST(PauliString, ParseAndPrint) {
  const auto p = PauliString::parse("-XZ_Y");
  EXPECT_EQ(p.size(), 4u);
  EXPECT_TRUE(p.negative());
  EXPECT_EQ(p.at(0), Pauli::X);
  EXPECT_EQ(p.at(3), Pauli::Y);
  EXPECT_EQ(p.str(), "-XZ_Y");
  EXPECT_EQ(PauliString::parse("IXI").str(), "+_X_");
  EXPECT_THROW(PauliString::parse("XQ"), std::invalid_argument);
}

TEST(PauliString, ProductsMatchMatrices) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_pauli(3, rng), b = random_pauli(3, rng);
    PhasedPauli prod(a);
    prod *= b;
    const std::complex<double> i_pow[4] = {1.0, {0.0, 1.0}, -1.0, {0.0, -1.0}};
    PauliString bare = prod.op;
    bare.set_negative(false);
    const CMat expect = pauli_matrix(a) * pauli_matrix(b);
    EXPECT_LT((expect - i_pow[prod.phase] * pauli_matrix(bare)).norm(), 1e-12);
    if (a.commutes_with(b)) {
      EXPECT_LT((expect - pauli_matrix(a * b)).norm(), 1e-12);
    } else {
      PauliString c = a;
      EXPECT_THROW(c *= b, std::logic_error);
    }
  }
}

TEST(PauliString, MultiplicationIsAssociative) {
  Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(130);
    const PhasedPauli a(random_pauli(n, rng)), b(random_pauli(n, rng)), c(random_pauli(n, rng));
    PhasedPauli left = a;
    left *= b;
    left *= c;
    PhasedPauli bc = b;
    bc *= c;
    PhasedPauli right = a;
    right *= bc;
    EXPECT_EQ(left.op, right.op);
    EXPECT_EQ(left.phase, right.phase);
  }
}

TEST(LocalClifford, SymplecticGroupHas720Elements) {
  const auto& sp = symplectic_group_sp4();
  EXPECT_EQ(sp.size(), kSymplecticClassCount);
  std::set<std::array<std::uint8_t, 4>> distinct(sp.begin(), sp.end());
  EXPECT_EQ(distinct.size(), sp.size());
  // |Sp(4,2)| = 2^4 (2^2 - 1)(2^4 - 1)
  EXPECT_EQ(sp.size(), 16u * 3u * 15u);
}

TEST(LocalClifford, TableEntriesAreDistinctAutomorphisms) {
  std::set<std::pair<std::array<std::uint8_t, 16>, std::uint16_t>> seen;
  for (std::uint32_t id = 0; id < kTwoQubitCliffordCount; id += 7) {
    const auto& g = two_qubit_clifford(id);
    std::array<std::uint8_t, 16> out{};
    std::uint16_t neg = 0;
    for (int v = 0; v < 16; ++v) {
      out[v] = g.image_bits(v);
      neg |= static_cast<std::uint16_t>(g.image_negative(v)) << v;
      for (int u = 0; u < 16; ++u)
        EXPECT_EQ(symplectic_product(g.image_bits(u), g.image_bits(v)), symplectic_product(u, v));
    }
    EXPECT_TRUE(seen.insert({out, neg}).second);
    EXPECT_EQ(g.inverse(), two_qubit_clifford_inverse(id));
    for (int v = 0; v < 16; ++v) {
      const auto p = g.image(v);
      const auto back = g.inverse().conjugate(p);
      EXPECT_EQ(back.str(), g.inverse().inverse().inverse().conjugate(p).str());
      PauliString orig(2);
      orig.set_x(0, v & 1);
      orig.set_z(0, v & 2);
      orig.set_x(1, v & 4);
      orig.set_z(1, v & 8);
      EXPECT_EQ(back, orig);
    }
  }
}

TEST(LocalClifford, BitSlicedFormMatchesTable) {
  for (std::uint32_t id = 0; id < kTwoQubitCliffordCount; id += 13) {
    const auto& g = two_qubit_clifford(id);
    for (int v = 0; v < 16; ++v) {
      int out = 0;
      for (int j = 0; j < 4; ++j) out |= (std::popcount(static_cast<unsigned>(v & g.out_mask(j))) & 1) << j;
      EXPECT_EQ(out, g.image_bits(v));
      bool flip = false;
      for (int m = 0; m < 16; ++m)
        if (((g.sign_anf() >> m) & 1) && (v & m) == m) flip = !flip;
      EXPECT_EQ(flip, g.image_negative(v));
    }
  }
}

TEST(LocalClifford, NamedGates) {
  EXPECT_EQ(named_gate(NamedGate::H).conjugate(PauliString::parse("+Z")).str(), "+X");
  EXPECT_EQ(named_gate(NamedGate::S).conjugate(PauliString::parse("+X")).str(), "+Y");
  EXPECT_EQ(named_gate(NamedGate::H).conjugate(PauliString::parse("+Y")).str(), "-Y");
  EXPECT_EQ(named_gate(NamedGate::CNOT).conjugate(PauliString::parse("+_Z")).str(), "+ZZ");
  EXPECT_EQ(named_gate(NamedGate::CNOT).conjugate(PauliString::parse("+YY")).str(), "-XZ");
  EXPECT_EQ(named_gate(NamedGate::CZ).conjugate(PauliString::parse("+X_")).str(), "+XZ");
  EXPECT_EQ(named_gate(NamedGate::SWAP).conjugate(PauliString::parse("-XZ")).str(), "-ZX");
  EXPECT_EQ(parse_named_gate("CX"), NamedGate::CNOT);
  EXPECT_THROW(parse_named_gate("T"), std::invalid_argument);
  EXPECT_THROW(LocalClifford::from_images(std::vector{PauliString::parse("X"), PauliString::parse("X")}),
               std::invalid_argument);
}

TEST(LocalClifford, SamplingIsDeterministic) {
  Rng a(5, 1, 2, Purpose::Gates), b(5, 1, 2, Purpose::Gates);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_two_qubit_clifford(a), sample_two_qubit_clifford(b));
}

TEST(LocalClifford, SymplecticPartIsUniform) {
  // Pearson chi-square over the 720 symplectic classes, 10^6 draws, 1% level.
  constexpr int kDraws = 1000000;
  std::vector<int> counts(kSymplecticClassCount, 0);
  Rng rng(2024);
  for (int i = 0; i < kDraws; ++i) ++counts[symplectic_class(sample_two_qubit_clifford(rng))];
  const double expected = static_cast<double>(kDraws) / kSymplecticClassCount;
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // Wilson-Hilferty approximation of the 99% quantile, z_0.99 = 2.3263.
  const double df = kSymplecticClassCount - 1;
  const double h = 2.0 / (9.0 * df);
  const double critical = df * std::pow(1.0 - h + 2.3263478740 * std::sqrt(h), 3);
  EXPECT_LT(chi2, critical);
}

TEST(Tableau, ProductStates) {
  const std::vector<SiteKind> one{SiteKind::Zero};
  auto t = StabilizerTableau::product_state(one);
  EXPECT_EQ(t.rank(), 1u);
  EXPECT_EQ(t.stabilizers()[0].str(), "+Z");

  const std::vector<SiteKind> two{SiteKind::Plus, SiteKind::MaximallyMixed};
  t = StabilizerTableau::product_state(two);
  ASSERT_EQ(t.rank(), 1u);
  EXPECT_EQ(t.stabilizers()[0].str(), "+X_");

  EXPECT_EQ(StabilizerTableau(5).rank(), 0u);
  const std::vector<SiteKind> magic{SiteKind::T};
  EXPECT_THROW(StabilizerTableau::product_state(magic), std::invalid_argument);
}

TEST(Tableau, GateConjugation) {
  const std::vector<SiteKind> z1{SiteKind::Zero};
  auto t = StabilizerTableau::product_state(z1);
  t.apply(NamedGate::H, 0);
  EXPECT_EQ(t.stabilizers()[0].str(), "+X");

  const std::vector<SiteKind> z2{SiteKind::MaximallyMixed, SiteKind::Zero};
  auto u = StabilizerTableau::product_state(z2);
  u.apply(NamedGate::CNOT, 0, 1);
  EXPECT_EQ(u.stabilizers()[0].str(), "+ZZ");
  EXPECT_THROW(u.apply(NamedGate::CNOT, 0, 2), std::out_of_range);
  EXPECT_THROW(u.apply(NamedGate::CNOT, 1, 1), std::invalid_argument);
}

TEST(Tableau, GatesThenInverseRestoreState) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    const auto sites = random_sites(n, rng);
    const auto start = StabilizerTableau::product_state(sites);
    auto t = start;
    std::vector<std::tuple<std::uint32_t, std::size_t, std::size_t>> seq;
    for (int g = 0; g < 3; ++g) {
      const std::size_t a = rng.below(n);
      std::size_t b = rng.below(n - 1);
      if (b >= a) ++b;
      seq.emplace_back(sample_two_qubit_clifford(rng), a, b);
      t.apply(two_qubit_clifford(std::get<0>(seq.back())), a, b);
    }
    for (auto it = seq.rbegin(); it != seq.rend(); ++it)
      t.apply(two_qubit_clifford_inverse(std::get<0>(*it)), std::get<1>(*it), std::get<2>(*it));
    EXPECT_EQ(canonicalize(t.stabilizers()), canonicalize(start.stabilizers()));
  }
}

TEST(Tableau, MeasurementCases) {
  Rng rng(8);
  const std::vector<SiteKind> zero{SiteKind::Zero};
  auto t = StabilizerTableau::product_state(zero);
  auto m = t.measure_z(0, rng);
  EXPECT_EQ(m.outcome, +1);
  EXPECT_FALSE(m.was_random);
  EXPECT_TRUE(t.measure_z_forced(0, -1).contradiction);

  StabilizerTableau mixed(1);
  m = mixed.measure_z(0, rng);
  EXPECT_TRUE(m.was_random);
  EXPECT_EQ(mixed.rank(), 1u);
  const auto again = mixed.measure_z(0, rng);
  EXPECT_FALSE(again.was_random);
  EXPECT_EQ(again.outcome, m.outcome);

  const std::vector<SiteKind> plus{SiteKind::Plus};
  double sum = 0;
  constexpr int kTrials = 100000;
  for (int i = 0; i < kTrials; ++i) {
    auto p = StabilizerTableau::product_state(plus);
    const auto r = p.measure_z(0, rng);
    EXPECT_TRUE(r.was_random);
    sum += r.outcome;
  }
  EXPECT_NEAR(sum / kTrials, 0.0, 0.02);
}

TEST(Tableau, PauliErrors) {
  const std::vector<SiteKind> zero{SiteKind::Zero};
  auto t = StabilizerTableau::product_state(zero);
  t.apply_pauli(Pauli::Z, 0);
  EXPECT_EQ(t.stabilizers()[0].str(), "+Z");
  t.apply_pauli(Pauli::X, 0);
  EXPECT_EQ(t.stabilizers()[0].str(), "-Z");
  t.apply_pauli(Pauli::X, 0);
  EXPECT_EQ(t.stabilizers()[0].str(), "+Z");
  t.apply_pauli(Pauli::Y, 0);
  EXPECT_EQ(t.stabilizers()[0].str(), "-Z");
}

TEST(Tableau, MatchesNaiveEngineOnRandomPrograms) {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const auto sites = random_sites(n, rng);
    auto t = StabilizerTableau::product_state(sites);
    NaiveStabilizer ref{n, t.stabilizers()};
    for (int step = 0; step < 40; ++step) {
      const auto kind = rng.below(4);
      if (kind == 0 && n >= 2) {
        const std::size_t a = rng.below(n);
        std::size_t b = rng.below(n - 1);
        if (b >= a) ++b;
        const auto& g = two_qubit_clifford(sample_two_qubit_clifford(rng));
        t.apply(g, a, b);
        ref.apply(g, {a, b});
      } else if (kind == 1) {
        const auto g = static_cast<NamedGate>(rng.below(7));
        const std::size_t a = rng.below(n);
        t.apply(g, a);
        ref.apply(named_gate(g), {a});
      } else if (kind == 2) {
        const auto p = static_cast<Pauli>(1 + rng.below(3));
        const std::size_t a = rng.below(n);
        t.apply_pauli(p, a);
        ref.apply_pauli(p, a);
      } else {
        const std::size_t a = rng.below(n);
        const int wanted = rng.coin() ? -1 : +1;
        const auto peek = t.peek_z(a);
        const auto got = t.measure_z_forced(a, wanted);
        const auto [v, random, contra] = ref.measure(a, wanted);
        ASSERT_EQ(got.was_random, random);
        ASSERT_EQ(got.contradiction, contra);
        ASSERT_EQ(got.outcome, v);
        ASSERT_EQ(peek.has_value(), !random);
        if (peek) ASSERT_EQ(*peek, v);
      }
      ASSERT_EQ(canonicalize(t.stabilizers()), canonicalize(ref.gens));
    }
    t.validate();
  }
}

TEST(Tableau, PureStatesNeverGrow) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(100);
    auto t = StabilizerTableau::product_state(random_sites(n, rng, false));
    scramble(t, rng, 200);
    for (int k = 0; k < 30; ++k) {
      const std::size_t q = rng.below(n);
      const auto first = t.measure_z(q, rng);
      EXPECT_EQ(t.rank(), n);
      const auto second = t.measure_z(q, rng);
      EXPECT_FALSE(second.was_random);
      EXPECT_EQ(second.outcome, first.outcome);
    }
    if (n <= 70) t.validate();
  }
}

TEST(Tableau, DephasingKeepsCommutingStabilizers) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    auto t = StabilizerTableau::product_state(random_sites(n, rng));
    scramble(t, rng, 20);
    const std::size_t q = rng.below(n);
    const auto before = xent::testing::all_elements(t.stabilizers(), n);
    t.dephase_z(q);
    t.validate();
    const PauliString zq = PauliString::single(n, q, Pauli::Z);
    std::vector<PauliString> kept;
    for (const auto& e : before)
      if (e.commutes_with(zq)) kept.push_back(e);
    EXPECT_EQ(canonicalize(t.stabilizers()), canonicalize(kept));
  }
}

TEST(Group, CanonicalizeExamples) {
  const auto c = canonicalize({PauliString::parse("+ZZ"), PauliString::parse("+_Z")});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].str(), "+Z_");
  EXPECT_EQ(c[1].str(), "+_Z");
  EXPECT_THROW(canonicalize({PauliString::parse("+Z"), PauliString::parse("-Z")}), std::invalid_argument);
}

TEST(Group, CanonicalFormIsUniqueAndIdempotent) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    auto t = StabilizerTableau::product_state(random_sites(n, rng));
    scramble(t, rng, 30);
    const auto gens = t.stabilizers();
    const auto canon = canonicalize(gens);
    EXPECT_EQ(canonicalize(canon), canon);
    EXPECT_EQ(group_rank(gens), gens.size());
    // Resample a generating set by random products and shuffles.
    auto other = gens;
    for (int k = 0; k < 20 && other.size() >= 2; ++k) {
      const std::size_t i = rng.below(other.size());
      std::size_t j = rng.below(other.size() - 1);
      if (j >= i) ++j;
      other[i] *= other[j];
      std::swap(other[rng.below(other.size())], other[rng.below(other.size())]);
    }
    if (!other.empty()) other.push_back(other.front() * other.back());
    EXPECT_EQ(canonicalize(other), canon);
  }
}

TEST(Group, RestrictExamples) {
  const std::vector<std::size_t> second{1};
  auto r = restrict_group(std::vector{PauliString::parse("+Z_"), PauliString::parse("+_Z")}, second);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].str(), "+Z");
  r = restrict_group(std::vector{PauliString::parse("+XX"), PauliString::parse("+ZZ")}, second);
  EXPECT_TRUE(r.empty());
}

TEST(Group, RestrictMatchesExhaustiveScan) {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    auto t = StabilizerTableau::product_state(random_sites(n, rng));
    scramble(t, rng, 40);
    std::vector<std::size_t> subset;
    for (std::size_t q = 0; q < n; ++q)
      if (rng.coin()) subset.push_back(q);
    std::shuffle(subset.begin(), subset.end(), rng);
    std::vector<PauliString> scan;
    for (const auto& e : xent::testing::all_elements(t.stabilizers(), n)) {
      bool local = true;
      for (std::size_t q = 0; q < n; ++q)
        if (std::find(subset.begin(), subset.end(), q) == subset.end() && e.at(q) != Pauli::I) local = false;
      if (!local) continue;
      PauliString p(subset.size());
      for (std::size_t j = 0; j < subset.size(); ++j) p.set(j, e.at(subset[j]));
      p.set_negative(e.negative());
      scan.push_back(p);
    }
    const auto got = restrict_group(t.stabilizers(), subset);
    EXPECT_EQ(got.size(), group_rank(got));
    EXPECT_EQ(std::size_t{1} << got.size(), scan.size());
    EXPECT_EQ(canonicalize(got), canonicalize(scan));
  }
}

TEST(Group, OverlapExamples) {
  const std::vector a{PauliString::parse("+Z")};
  EXPECT_DOUBLE_EQ(group_overlap(a, a, 1).value(), 1.0);
  EXPECT_DOUBLE_EQ(group_overlap(a, std::vector{PauliString::parse("+X")}, 1).value(), 0.5);
  EXPECT_DOUBLE_EQ(group_overlap(a, std::vector{PauliString::parse("-Z")}, 1).value(), 0.0);
  EXPECT_DOUBLE_EQ(group_overlap(std::vector<PauliString>{}, std::vector<PauliString>{}, 3).value(), 0.125);
}

TEST(Group, OverlapMatchesDensityMatrices) {
  Rng rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t r = 1 + rng.below(4);
    auto ta = StabilizerTableau::product_state(random_sites(r, rng));
    auto tb = StabilizerTableau::product_state(random_sites(r, rng));
    scramble(ta, rng, 6);
    scramble(tb, rng, 6);
    if (rng.coin()) tb = ta, tb.apply_pauli(static_cast<Pauli>(1 + rng.below(3)), rng.below(r));
    const auto a = ta.stabilizers(), b = tb.stabilizers();
    const double expect = (density(a, r) * density(b, r)).trace().real();
    const double got = group_overlap(a, b, r).value();
    EXPECT_NEAR(got, expect, 1e-12);
    EXPECT_EQ(got, group_overlap(b, a, r).value());
  }
}
