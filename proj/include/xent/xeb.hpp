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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "xent/circuit.hpp"
#include "xent/tableau.hpp"
#include "xent/trajectory.hpp"

namespace xent {

enum class Method : std::uint8_t { Subgroup, Register, Sampled, HaarTwoSided, PrimeQ };

const char* method_name(Method m) noexcept;
Method parse_method(const std::string& name);

struct ChiEstimate {
  double value = 0.0;
  double std_error = 0.0;
  Method method = Method::Subgroup;
  int Q = 2;
  std::size_t M = 0;
  std::size_t M_prime = 0;
  std::uint64_t circuit_index = 0;
  bool degenerate = false;  // two-sided estimator with a vanishing denominator
};

/// One JSONL record {method, L, p, q, circuit_index, value, std_error, M, M_prime, seed}.
nlohmann::json to_jsonl(const ChiEstimate& e, const CircuitSpec& spec);

/// Initial states of the rho- and sigma-circuits as per-site product kinds.
struct InitialStatePair {
  std::vector<SiteKind> rho;
  std::vector<SiteKind> sigma;

  bool rho_is_stabilizer() const;
  bool sigma_is_pure_stabilizer() const;
  /// S_rho is a subgroup of S_sigma (requires stabilizer states on both sides).
  bool subgroup_condition() const;
};

enum class StatePreset : std::uint8_t {
  MixedVsZero,     // rho = 1/2^L, sigma = |0>^L
  PlusVsZero,      // rho = |+>^L
  MagicVsZero,     // rho = |0>|T>|0>|T>...
  HalfPlusVsZero,  // rho = |0>^{L/2} |+>^{L/2}
  SingleSite,      // rho maximally mixed on one site, |0> elsewhere
  Identical,       // rho = sigma = |0>^L
};

const char* preset_name(StatePreset s) noexcept;
StatePreset parse_preset(const std::string& name);
/// `site` is used by SingleSite only.
InitialStatePair make_pair(StatePreset s, std::size_t L, std::size_t site = 0);

/// Trajectory-index offset separating sigma-side sample streams from rho-side ones.
inline constexpr std::uint64_t kSigmaStream = std::uint64_t{1} << 63;

/// 2^{-N_rand(rho) + N_rand(sigma)}; exact. Requires Clifford gates, no noise
/// and the subgroup condition. With `verify`, N_rand is recomputed from a
/// second independently seeded trajectory and must agree.
ChiEstimate chi_exact_subgroup(const CircuitInstance& c, const InitialStatePair& pair, bool verify = true);

/// Overlap of the dephased measurement registers, tr(rho_R sigma_R) / tr(sigma_R^2).
/// Requires Clifford gates and stabilizer states; `noise` (for the rho-side)
/// may hold one realization. Throws std::length_error when L + N exceeds
/// `qubit_cap`.
ChiEstimate chi_exact_register(const CircuitInstance& c, const InitialStatePair& pair,
                               std::span<const NoiseEvent> noise = {}, std::size_t qubit_cap = 4096);

/// Sampled estimator: mean over M rho-trajectories of p^sigma_m 2^{N_rand(sigma)}.
/// The rho-side runs on the stabilizer engine (optionally noisy) or, with |T>
/// sites, on the framed engine; sigma must be a pure stabilizer state.
ChiEstimate chi_sampled(const CircuitInstance& c, const InitialStatePair& pair, std::size_t M);

/// Same as chi_sampled with observable (p^sigma_m 2^{N_rand(sigma)})^{Q-1}.
ChiEstimate chi_prime_q_sampled(const CircuitInstance& c, const InitialStatePair& pair, int Q, std::size_t M);

/// Ratio of the rho-side and sigma-side means of the replayed sigma
/// probability, both on the dense engine. Works for Haar and Clifford gates.
ChiEstimate chi_haar_two_sided(const CircuitInstance& c, const InitialStatePair& pair, std::size_t M,
                               std::size_t M_prime, std::size_t dense_cap = kDefaultDenseCap);

/// Per-run observables of the sampled estimator, exposed for tests.
std::vector<double> sampled_observables(const CircuitInstance& c, const InitialStatePair& pair, int Q,
                                        std::size_t M);

}  // namespace xent
