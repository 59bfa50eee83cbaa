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

#include <algorithm>
#include <cmath>
#include <functional>

#include "xent/xeb.hpp"

using namespace xent;

namespace {

CircuitInstance instance(std::size_t L, double p, std::uint64_t seed, std::uint64_t idx, double q = 0.0,
                         GateSet set = GateSet::Clifford) {
  auto s = CircuitSpec::with_defaults(L, p);
  s.master_seed = seed;
  s.noise_q = q;
  s.gate_set = set;
  return generate_instance(s, idx);
}

std::uint32_t identity_id() {
  for (std::uint32_t id = 0; id < kTwoQubitCliffordCount; ++id) {
    const auto& g = two_qubit_clifford(id);
    bool ok = true;
    for (unsigned v = 0; v < 16 && ok; ++v) ok = g.image_bits(v) == v && !g.image_negative(v);
    if (ok) return id;
  }
  throw std::logic_error("no identity");
}

// L = 2, one identity layer, site 0 measured once.
CircuitInstance toy() {
  CircuitInstance c;
  c.spec = CircuitSpec::with_defaults(2, 0.5);
  c.spec.encoding_enabled = false;
  c.spec.t_encoding = 0;
  c.spec.t_bulk = 1;
  c.layers.push_back({{{0, 1, identity_id()}}, {0}});
  return c;
}

// Exact sum_m p_rho(m) p_sigma(m) and sum_m p_sigma(m)^2 by branching both
// dense states over every outcome.
std::pair<double, double> enumerate_dense(const CircuitInstance& c, const InitialStatePair& pair) {
  double num = 0, den = 0;
  using E = DenseEngine<double>;
  std::function<void(std::size_t, std::size_t, E, E, double, double)> go =
      [&](std::size_t t, std::size_t k, E r, E s, double pr, double ps) {
        if (t == c.layers.size()) {
          num += pr * ps;
          den += ps * ps;
          return;
        }
        if (k == 0) {
          apply_gates(c, t, r);
          apply_gates(c, t, s);
        }
        if (k == c.layers[t].measured.size()) return go(t + 1, 0, std::move(r), std::move(s), pr, ps);
        const auto q = c.layers[t].measured[k];
        for (int o : {+1, -1}) {
          E r2 = r, s2 = s;
          const double a = r2.state.measure_z_forced(q, o).probability;
          const double b = s2.state.measure_z_forced(q, o).probability;
          if (a == 0 && b == 0) continue;
          go(t, k + 1, std::move(r2), std::move(s2), pr * a, ps * b);
        }
      };
  go(0, 0, E{DenseState<double>(pair.rho)}, E{DenseState<double>(pair.sigma)}, 1.0, 1.0);
  return {num, den};
}

double binomial_band(double chi, std::size_t M) { return 4 * std::sqrt(std::max(0.0, chi * (1 - chi)) / M) + 1e-9; }

}  // namespace

TEST(Xeb, SubgroupCondition) {
  EXPECT_TRUE(make_pair(StatePreset::MixedVsZero, 8).subgroup_condition());
  EXPECT_TRUE(make_pair(StatePreset::SingleSite, 8, 4).subgroup_condition());
  EXPECT_TRUE(make_pair(StatePreset::Identical, 8).subgroup_condition());
  EXPECT_FALSE(make_pair(StatePreset::PlusVsZero, 8).subgroup_condition());
  EXPECT_FALSE(make_pair(StatePreset::HalfPlusVsZero, 8).subgroup_condition());
  EXPECT_FALSE(make_pair(StatePreset::MagicVsZero, 8).subgroup_condition());
  EXPECT_EQ(parse_preset("magic_vs_zero"), StatePreset::MagicVsZero);
  EXPECT_THROW(parse_preset("bogus"), std::invalid_argument);
}

TEST(Xeb, NoMeasurementsGivesOne) {
  const auto c = instance(8, 0.0, 11, 0);
  const auto pair = make_pair(StatePreset::MixedVsZero, 8);
  EXPECT_EQ(chi_exact_subgroup(c, pair).value, 1.0);
  EXPECT_EQ(chi_exact_register(c, pair).value, 1.0);
  EXPECT_EQ(chi_sampled(c, pair, 50).value, 1.0);
  EXPECT_EQ(chi_sampled(c, make_pair(StatePreset::MagicVsZero, 8), 50).value, 1.0);
}

TEST(Xeb, HandToyIsOneHalf) {
  const auto c = toy();
  const auto mixed = make_pair(StatePreset::SingleSite, 2, 0);
  EXPECT_EQ(chi_exact_subgroup(c, mixed).value, 0.5);
  EXPECT_EQ(chi_exact_register(c, mixed).value, 0.5);
  const auto s = chi_sampled(c, mixed, 4000);
  EXPECT_NEAR(s.value, 0.5, binomial_band(0.5, 4000));
  InitialStatePair plus{{SiteKind::Plus, SiteKind::Zero}, {SiteKind::Zero, SiteKind::Zero}};
  EXPECT_EQ(chi_exact_register(c, plus).value, 0.5);
  const auto [num, den] = enumerate_dense(c, plus);
  EXPECT_NEAR(num / den, 0.5, 1e-12);
  const auto h = chi_haar_two_sided(c, plus, 4000, 10);
  EXPECT_NEAR(h.value, 0.5, 4 * h.std_error + 1e-12);
}

TEST(Xeb, IdenticalStatesGiveOne) {
  for (double p : {0.1, 0.3}) {
    const auto c = instance(8, p, 5, 2);
    const auto pair = make_pair(StatePreset::Identical, 8);
    EXPECT_EQ(chi_exact_subgroup(c, pair).value, 1.0);
    EXPECT_EQ(chi_exact_register(c, pair).value, 1.0);
    EXPECT_EQ(chi_sampled(c, pair, 100).value, 1.0);
    const auto h = chi_haar_two_sided(instance(8, p, 5, 2, 0.0, GateSet::Haar), pair, 200, 200);
    EXPECT_NEAR(h.value, 1.0, 5 * h.std_error + 1e-9);
  }
}

TEST(Xeb, EstimatorTriangle) {
  std::size_t nontrivial = 0;
  for (std::uint64_t idx = 0; idx < 12; ++idx) {
    const double p = 0.05 + 0.03 * static_cast<double>(idx % 8);
    const auto c = instance(8, p, 77, idx);
    for (auto preset : {StatePreset::MixedVsZero, StatePreset::SingleSite}) {
      const auto pair = make_pair(preset, 8, 3);
      const double a = chi_exact_subgroup(c, pair).value;
      const double b = chi_exact_register(c, pair).value;
      EXPECT_EQ(a, b) << "idx=" << idx;
      const auto s = chi_sampled(c, pair, 800);
      EXPECT_NEAR(s.value, a, binomial_band(a, 800)) << "idx=" << idx;
      nontrivial += a > 0 && a < 1;
    }
  }
  EXPECT_GT(nontrivial, 4u);
}

TEST(Xeb, RegisterMatchesDenseEnumeration) {
  for (std::uint64_t idx = 0; idx < 6; ++idx) {
    const auto c = instance(4, 0.3, 3, idx);
    for (auto preset : {StatePreset::PlusVsZero, StatePreset::HalfPlusVsZero}) {
      const auto pair = make_pair(preset, 4);
      const auto [num, den] = enumerate_dense(c, pair);
      EXPECT_NEAR(chi_exact_register(c, pair).value, num / den, 1e-9);
      const auto s = chi_sampled(c, pair, 1000);
      EXPECT_NEAR(s.value, num / den, binomial_band(num / den, 1000));
    }
  }
}

TEST(Xeb, MagicSampledMatchesDenseEnumeration) {
  for (std::uint64_t idx = 0; idx < 6; ++idx) {
    const auto c = instance(4, 0.3, 9, idx);
    const auto pair = make_pair(StatePreset::MagicVsZero, 4);
    const auto [num, den] = enumerate_dense(c, pair);
    const double chi = num / den;
    const auto obs = sampled_observables(c, pair, 2, 2000);
    for (double v : obs) EXPECT_TRUE(v == 0.0 || v == 1.0);
    const auto s = chi_sampled(c, pair, 2000);
    EXPECT_NEAR(s.value, chi, binomial_band(chi, 2000)) << "idx=" << idx;
    const auto h = chi_haar_two_sided(c, pair, 2000, 2000);
    EXPECT_NEAR(h.value, chi, 4 * h.std_error + 1e-9) << "idx=" << idx;
  }
}

TEST(Xeb, NoisyRegisterAveragesToSampled) {
  const auto c = instance(8, 0.12, 21, 4, 0.02);
  const auto pair = make_pair(StatePreset::MixedVsZero, 8);
  const std::size_t M = 600;
  double mean = 0;
  for (std::size_t j = 0; j < M; ++j) {
    Rng nrng(c.spec.master_seed, c.circuit_index, j, Purpose::Noise);
    mean += chi_exact_register(c, pair, noise_realization(c, nrng)).value / M;
  }
  const auto s = chi_sampled(c, pair, M);
  // Both share the noise realizations; only the outcomes differ.
  EXPECT_NEAR(s.value, mean, 4 * std::sqrt(mean * (1 - mean) / M) + 1e-12);
}

TEST(Xeb, PrimeQ) {
  const auto c = instance(8, 0.15, 4, 1);
  const auto pair = make_pair(StatePreset::MagicVsZero, 8);
  const auto a = chi_sampled(c, pair, 300);
  const auto b = chi_prime_q_sampled(c, pair, 2, 300);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(sampled_observables(c, pair, 2, 300), sampled_observables(c, pair, 3, 300));
  EXPECT_EQ(chi_prime_q_sampled(c, pair, 3, 300).method, Method::PrimeQ);
  EXPECT_THROW(chi_prime_q_sampled(c, pair, 1, 300), std::invalid_argument);
}

TEST(Xeb, Preconditions) {
  const auto pair = make_pair(StatePreset::MixedVsZero, 8);
  EXPECT_THROW(chi_exact_subgroup(instance(8, 0.1, 1, 0, 0.0, GateSet::Haar), pair), std::invalid_argument);
  EXPECT_THROW(chi_exact_subgroup(instance(8, 0.1, 1, 0, 0.01), pair), std::invalid_argument);
  EXPECT_THROW(chi_exact_subgroup(instance(8, 0.1, 1, 0), make_pair(StatePreset::PlusVsZero, 8)),
               std::invalid_argument);
  EXPECT_THROW(chi_sampled(instance(8, 0.1, 1, 0, 0.0, GateSet::Haar), pair, 10), std::invalid_argument);
  EXPECT_THROW(chi_haar_two_sided(instance(8, 0.1, 1, 0, 0.0, GateSet::Haar), pair, 10, 10),
               std::invalid_argument);  // dense engine cannot hold a mixed rho
  EXPECT_THROW(chi_exact_register(instance(8, 0.3, 1, 0), pair, {}, 16), std::length_error);
  EXPECT_THROW(chi_exact_subgroup(instance(6, 0.1, 1, 0), pair), std::invalid_argument);
}

TEST(Xeb, Deterministic) {
  const auto c = instance(8, 0.16, 99, 7, 0.01);
  const auto pair = make_pair(StatePreset::MagicVsZero, 8);
  EXPECT_EQ(sampled_observables(c, pair, 2, 200), sampled_observables(c, pair, 2, 200));
  const auto h1 = chi_haar_two_sided(instance(8, 0.16, 99, 7, 0.0, GateSet::Haar), make_pair(StatePreset::PlusVsZero, 8), 50, 50);
  const auto h2 = chi_haar_two_sided(instance(8, 0.16, 99, 7, 0.0, GateSet::Haar), make_pair(StatePreset::PlusVsZero, 8), 50, 50);
  EXPECT_EQ(h1.value, h2.value);
}

TEST(Xeb, Jsonl) {
  const auto c = instance(8, 0.1, 3, 5);
  const auto e = chi_exact_subgroup(c, make_pair(StatePreset::MixedVsZero, 8));
  const auto j = to_jsonl(e, c.spec);
  EXPECT_EQ(j["method"], "subgroup");
  EXPECT_EQ(j["L"], 8);
  EXPECT_EQ(j["circuit_index"], 5);
  EXPECT_EQ(j["seed"], 3);
  for (const char* k : {"p", "q", "value", "std_error", "M", "M_prime"}) EXPECT_TRUE(j.contains(k)) << k;
}
