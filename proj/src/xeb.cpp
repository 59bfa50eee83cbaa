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

#include "xent/xeb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "xent/group.hpp"

namespace xent {

const char* method_name(Method m) noexcept {
  switch (m) {
    case Method::Subgroup: return "subgroup";
    case Method::Register: return "register";
    case Method::Sampled: return "sampled";
    case Method::HaarTwoSided: return "haar";
    case Method::PrimeQ: return "prime_q";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::Subgroup, Method::Register, Method::Sampled, Method::HaarTwoSided, Method::PrimeQ})
    if (name == method_name(m)) return m;
  throw std::invalid_argument("unknown estimator '" + name + "'");
}

nlohmann::json to_jsonl(const ChiEstimate& e, const CircuitSpec& spec) {
  nlohmann::json j;
  j["method"] = method_name(e.method);
  j["L"] = spec.L;
  j["p"] = spec.p;
  j["q"] = spec.noise_q;
  j["circuit_index"] = e.circuit_index;
  j["value"] = e.value;
  j["std_error"] = e.std_error;
  j["M"] = e.M;
  j["M_prime"] = e.M_prime;
  j["seed"] = spec.master_seed;
  if (e.method == Method::PrimeQ) j["Q"] = e.Q;
  if (e.degenerate) j["degenerate"] = true;
  return j;
}

bool InitialStatePair::rho_is_stabilizer() const {
  return std::none_of(rho.begin(), rho.end(), [](SiteKind k) { return k == SiteKind::T; });
}

bool InitialStatePair::sigma_is_pure_stabilizer() const {
  return std::all_of(sigma.begin(), sigma.end(),
                     [](SiteKind k) { return k == SiteKind::Zero || k == SiteKind::Plus; });
}

bool InitialStatePair::subgroup_condition() const {
  if (rho.size() != sigma.size()) return false;
  if (!rho_is_stabilizer()) return false;
  if (std::any_of(sigma.begin(), sigma.end(), [](SiteKind k) { return k == SiteKind::T; })) return false;
  const auto s_rho = StabilizerTableau::product_state(rho).stabilizers();
  const auto s_sigma = StabilizerTableau::product_state(sigma).stabilizers();
  return std::all_of(s_rho.begin(), s_rho.end(), [&](const PauliString& g) { return group_contains(s_sigma, g); });
}

const char* preset_name(StatePreset s) noexcept {
  switch (s) {
    case StatePreset::MixedVsZero: return "mixed_vs_zero";
    case StatePreset::PlusVsZero: return "plus_vs_zero";
    case StatePreset::MagicVsZero: return "magic_vs_zero";
    case StatePreset::HalfPlusVsZero: return "half_plus_vs_zero";
    case StatePreset::SingleSite: return "single_site";
    case StatePreset::Identical: return "identical";
  }
  return "?";
}

StatePreset parse_preset(const std::string& name) {
  for (StatePreset s : {StatePreset::MixedVsZero, StatePreset::PlusVsZero, StatePreset::MagicVsZero,
                        StatePreset::HalfPlusVsZero, StatePreset::SingleSite, StatePreset::Identical})
    if (name == preset_name(s)) return s;
  throw std::invalid_argument("unknown initial-state preset '" + name + "'");
}

InitialStatePair make_pair(StatePreset s, std::size_t L, std::size_t site) {
  InitialStatePair out{std::vector<SiteKind>(L, SiteKind::Zero), std::vector<SiteKind>(L, SiteKind::Zero)};
  switch (s) {
    case StatePreset::MixedVsZero:
      std::fill(out.rho.begin(), out.rho.end(), SiteKind::MaximallyMixed);
      break;
    case StatePreset::PlusVsZero:
      std::fill(out.rho.begin(), out.rho.end(), SiteKind::Plus);
      break;
    case StatePreset::MagicVsZero:
      for (std::size_t i = 1; i < L; i += 2) out.rho[i] = SiteKind::T;
      break;
    case StatePreset::HalfPlusVsZero:
      for (std::size_t i = L / 2; i < L; ++i) out.rho[i] = SiteKind::Plus;
      break;
    case StatePreset::SingleSite:
      if (site >= L) throw std::invalid_argument("single-site preset: site out of range");
      out.rho[site] = SiteKind::MaximallyMixed;
      break;
    case StatePreset::Identical:
      break;
  }
  return out;
}

namespace {

void check_sizes(const CircuitInstance& c, const InitialStatePair& pair) {
  if (pair.rho.size() != c.spec.L || pair.sigma.size() != c.spec.L)
    throw std::invalid_argument("initial states do not match the circuit size");
}

std::size_t n_rand_of(const CircuitInstance& c, std::span<const SiteKind> sites, std::uint64_t trajectory) {
  TableauEngine e{StabilizerTableau::product_state(sites)};
  Rng rng(c.spec.master_seed, c.circuit_index, trajectory, Purpose::Outcomes);
  return run_trajectory(c, e, rng).record.n_rand;
}

// Mean of 2^{l_i} and its standard error, both scaled by 2^{-shift}.
struct LogMean {
  double shift = kImpossible;
  double mean = 0.0;
  double std_error = 0.0;
};

LogMean log_domain_mean(std::span<const double> log2_values) {
  LogMean out;
  for (double l : log2_values) out.shift = std::max(out.shift, l);
  if (std::isinf(out.shift)) return out;
  const double n = static_cast<double>(log2_values.size());
  double s = 0.0, s2 = 0.0;
  for (double l : log2_values) {
    const double v = std::exp2(l - out.shift);
    s += v;
    s2 += v * v;
  }
  out.mean = s / n;
  if (log2_values.size() > 1) {
    const double var = std::max(0.0, (s2 - n * out.mean * out.mean) / (n - 1));
    out.std_error = std::sqrt(var / n);
  }
  return out;
}

template <class RhoEngine>
std::vector<double> sampled_runs(const CircuitInstance& c, const RhoEngine& rho0, const TableauEngine& sigma0,
                                 std::size_t n_sigma, int Q, std::size_t M) {
  const std::size_t t0 = c.spec.first_monitored_layer();
  const std::size_t T = c.layers.size();
  std::vector<double> obs;
  obs.reserve(M);
  for (std::size_t j = 0; j < M; ++j) {
    RhoEngine rho = rho0;
    TableauEngine sigma = sigma0;
    std::vector<NoiseEvent> noise;
    if (c.spec.noise_q > 0.0) {
      Rng nrng(c.spec.master_seed, c.circuit_index, j, Purpose::Noise);
      noise = noise_realization(c, nrng);
      const PauliString frame = propagate_noise(c, noise, t0);
      for (std::size_t q = 0; q < c.spec.L; ++q)
        if (frame.at(q) != Pauli::I) rho.pauli(frame.at(q), q);
    }
    Rng outcomes(c.spec.master_seed, c.circuit_index, j, Purpose::Outcomes);
    TrajectoryResult r, s;
    std::size_t cursor = 0;
    bool alive = true;
    for (std::size_t t = t0; t < T && alive; ++t) {
      sample_layers(c, rho, outcomes, r, t, t + 1, noise);
      alive = replay_layers(c, sigma, r.record, cursor, s, t, t + 1);
    }
    double v = 0.0;
    if (alive) {
      if (s.record.n_rand != n_sigma) throw std::logic_error("N_rand of the sigma-circuit is not trajectory independent");
      const double e = s.log2_probability + static_cast<double>(n_sigma);
      if (e != 0.0) throw std::logic_error("sampled observable outside {0, 1}");
      v = std::exp2(static_cast<double>(Q - 1) * e);
    }
    obs.push_back(v);
  }
  return obs;
}

template <class Engine>
void run_prefix(const CircuitInstance& c, Engine& e) {
  for (std::size_t t = 0; t < c.spec.first_monitored_layer(); ++t) apply_gates(c, t, e);
}

}  // namespace

ChiEstimate chi_exact_subgroup(const CircuitInstance& c, const InitialStatePair& pair, bool verify) {
  check_sizes(c, pair);
  if (c.spec.gate_set != GateSet::Clifford)
    throw std::invalid_argument("subgroup estimator requires gate_set = clifford");
  if (c.spec.noise_q > 0.0) throw std::invalid_argument("subgroup estimator requires noise q = 0");
  if (!pair.subgroup_condition())
    throw std::invalid_argument("subgroup estimator requires S_rho to be a subgroup of S_sigma");
  const std::size_t nr = n_rand_of(c, pair.rho, 0);
  const std::size_t ns = n_rand_of(c, pair.sigma, kSigmaStream);
  if (verify) {
    if (n_rand_of(c, pair.rho, 1) != nr || n_rand_of(c, pair.sigma, kSigmaStream + 1) != ns)
      throw std::logic_error("N_rand differs between two trajectories of the same circuit");
  }
  ChiEstimate e;
  e.method = Method::Subgroup;
  e.circuit_index = c.circuit_index;
  e.value = std::exp2(static_cast<double>(ns) - static_cast<double>(nr));
  return e;
}

ChiEstimate chi_exact_register(const CircuitInstance& c, const InitialStatePair& pair,
                               std::span<const NoiseEvent> noise, std::size_t qubit_cap) {
  check_sizes(c, pair);
  if (c.spec.gate_set != GateSet::Clifford)
    throw std::invalid_argument("register estimator requires gate_set = clifford");
  if (!pair.rho_is_stabilizer()) throw std::invalid_argument("register estimator requires a stabilizer rho");
  if (std::any_of(pair.sigma.begin(), pair.sigma.end(), [](SiteKind k) { return k == SiteKind::T; }))
    throw std::invalid_argument("register estimator requires a stabilizer sigma");
  const std::size_t L = c.spec.L;
  const std::size_t N = c.measurement_count();
  if (L + N > qubit_cap) throw std::length_error("register estimator: L + N exceeds the qubit cap");

  auto dilate = [&](std::span<const SiteKind> sites, std::span<const NoiseEvent> events) {
    std::vector<SiteKind> all(sites.begin(), sites.end());
    all.resize(L + N, SiteKind::Zero);
    StabilizerTableau tab = StabilizerTableau::product_state(all);
    std::size_t reg = L, k = 0;
    for (std::size_t t = 0; t < c.layers.size(); ++t) {
      for (const auto& g : c.layers[t].gates) tab.apply(two_qubit_clifford(static_cast<std::uint32_t>(g.id)), g.a, g.b);
      for (const std::uint32_t q : c.layers[t].measured) {
        tab.apply(NamedGate::CNOT, q, reg);
        tab.dephase_z(reg);
        ++reg;
      }
      for (; k < events.size() && events[k].layer <= t; ++k)
        if (events[k].layer == t) tab.apply_pauli(events[k].pauli, events[k].site);
    }
    std::vector<std::size_t> regs(N);
    std::iota(regs.begin(), regs.end(), L);
    return restrict_group(tab.stabilizers(), regs);
  };

  const auto rho_r = dilate(pair.rho, noise);
  const auto sigma_r = dilate(pair.sigma, {});
  const GroupOverlap ov = group_overlap(rho_r, sigma_r, N);
  ChiEstimate e;
  e.method = Method::Register;
  e.circuit_index = c.circuit_index;
  e.value = ov.zero ? 0.0 : std::exp2(static_cast<double>(ov.log2 + static_cast<int>(N)) -
                                      static_cast<double>(sigma_r.size()));
  return e;
}

std::vector<double> sampled_observables(const CircuitInstance& c, const InitialStatePair& pair, int Q,
                                        std::size_t M) {
  check_sizes(c, pair);
  if (Q < 2) throw std::invalid_argument("Q must be at least 2");
  if (c.spec.gate_set != GateSet::Clifford)
    throw std::invalid_argument("sampled estimator requires gate_set = clifford");
  if (!pair.sigma_is_pure_stabilizer())
    throw std::invalid_argument("sampled estimator requires a pure stabilizer sigma");

  // N_rand(sigma) is trajectory independent; one noiseless run fixes it.
  const std::size_t n_sigma = n_rand_of(c, pair.sigma, kSigmaStream);
  TableauEngine sigma0{StabilizerTableau::product_state(pair.sigma)};
  run_prefix(c, sigma0);
  if (pair.rho_is_stabilizer()) {
    TableauEngine rho0{StabilizerTableau::product_state(pair.rho)};
    run_prefix(c, rho0);
    return sampled_runs(c, rho0, sigma0, n_sigma, Q, M);
  }
  FramedEngine rho0{FramedState(pair.rho)};
  run_prefix(c, rho0);
  return sampled_runs(c, rho0, sigma0, n_sigma, Q, M);
}

ChiEstimate chi_prime_q_sampled(const CircuitInstance& c, const InitialStatePair& pair, int Q, std::size_t M) {
  if (M == 0) throw std::invalid_argument("M must be positive");
  const auto obs = sampled_observables(c, pair, Q, M);
  const double n = static_cast<double>(M);
  const double mean = std::accumulate(obs.begin(), obs.end(), 0.0) / n;
  ChiEstimate e;
  e.method = Q == 2 ? Method::Sampled : Method::PrimeQ;
  e.Q = Q;
  e.M = M;
  e.circuit_index = c.circuit_index;
  e.value = mean;
  e.std_error = std::sqrt(mean * (1.0 - mean) / n);
  return e;
}

ChiEstimate chi_sampled(const CircuitInstance& c, const InitialStatePair& pair, std::size_t M) {
  return chi_prime_q_sampled(c, pair, 2, M);
}

ChiEstimate chi_haar_two_sided(const CircuitInstance& c, const InitialStatePair& pair, std::size_t M,
                               std::size_t M_prime, std::size_t dense_cap) {
  check_sizes(c, pair);
  if (M == 0 || M_prime == 0) throw std::invalid_argument("M and M' must be positive");
  if (c.spec.noise_q > 0.0) throw std::invalid_argument("two-sided estimator does not support noise");
  using Engine = DenseEngine<double>;
  Engine rho0{DenseState<double>(pair.rho, dense_cap)};
  Engine sigma0{DenseState<double>(pair.sigma, dense_cap)};
  run_prefix(c, rho0);
  run_prefix(c, sigma0);
  const std::size_t t0 = c.spec.first_monitored_layer();
  const std::size_t T = c.layers.size();

  std::vector<double> num(M), den(M_prime);
  for (std::size_t j = 0; j < M; ++j) {
    Engine rho = rho0, sigma = sigma0;
    Rng outcomes(c.spec.master_seed, c.circuit_index, j, Purpose::Outcomes);
    TrajectoryResult r, s;
    std::size_t cursor = 0;
    bool alive = true;
    for (std::size_t t = t0; t < T && alive; ++t) {
      sample_layers(c, rho, outcomes, r, t, t + 1);
      alive = replay_layers(c, sigma, r.record, cursor, s, t, t + 1);
    }
    num[j] = alive ? s.log2_probability : kImpossible;
  }
  for (std::size_t j = 0; j < M_prime; ++j) {
    Engine sigma = sigma0;
    Rng outcomes(c.spec.master_seed, c.circuit_index, kSigmaStream + j, Purpose::Outcomes);
    TrajectoryResult s;
    sample_layers(c, sigma, outcomes, s, t0, T);
    den[j] = s.log2_probability;
  }
  const LogMean a = log_domain_mean(num);
  const LogMean b = log_domain_mean(den);

  ChiEstimate e;
  e.method = Method::HaarTwoSided;
  e.M = M;
  e.M_prime = M_prime;
  e.circuit_index = c.circuit_index;
  if (b.mean == 0.0 || std::isinf(b.shift)) {
    e.degenerate = true;
    e.value = std::numeric_limits<double>::quiet_NaN();
    e.std_error = std::numeric_limits<double>::quiet_NaN();
    return e;
  }
  if (a.mean == 0.0) return e;
  e.value = std::exp2(a.shift - b.shift) * a.mean / b.mean;
  const double ra = a.std_error / a.mean, rb = b.std_error / b.mean;
  e.std_error = e.value * std::sqrt(ra * ra + rb * rb);
  return e;
}

}  // namespace xent
