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

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "xent/circuit.hpp"
#include "xent/dense_state.hpp"
#include "xent/framed_state.hpp"
#include "xent/local_clifford.hpp"
#include "xent/pauli.hpp"
#include "xent/random.hpp"
#include "xent/tableau.hpp"

namespace xent {

struct MeasurementEvent {
  std::uint32_t layer = 0;
  std::uint32_t site = 0;
  std::int8_t outcome = +1;  // +1 or -1
  bool was_random = false;

  friend bool operator==(const MeasurementEvent&, const MeasurementEvent&) = default;
};

struct MeasurementRecord {
  std::vector<MeasurementEvent> events;
  std::size_t n_rand = 0;

  std::size_t size() const noexcept { return events.size(); }
  void push(const MeasurementEvent& e) {
    events.push_back(e);
    n_rand += e.was_random;
  }

  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

struct TrajectoryResult {
  MeasurementRecord record;
  double log2_probability = 0.0;  // -inf when a forced outcome was impossible

  bool impossible() const noexcept { return std::isinf(log2_probability); }
};

struct NoiseEvent {
  std::uint32_t layer = 0;
  std::uint32_t site = 0;
  Pauli pauli = Pauli::X;

  friend bool operator==(const NoiseEvent&, const NoiseEvent&) = default;
};

/// Independent depolarizing events with probability noise_q per (site, layer),
/// Pauli uniform over {X, Y, Z}, ordered by (layer, site).
std::vector<NoiseEvent> noise_realization(const CircuitInstance& c, Rng& rng);

/// Product of the noise Paulis in layers [0, t_end), pushed through the
/// remaining Clifford gates of those layers to the end of layer t_end - 1.
/// Signs and phases are dropped.
PauliString propagate_noise(const CircuitInstance& c, std::span<const NoiseEvent> noise, std::size_t t_end);

/// Result of one measurement as seen by the trajectory driver.
struct Born {
  int outcome = +1;
  bool was_random = false;
  double log2_p = 0.0;  // -inf for an impossible forced outcome
};

inline constexpr double kImpossible = -std::numeric_limits<double>::infinity();

// Engines adapt a state class to the driver: gate / measure / force / pauli.

struct TableauEngine {
  StabilizerTableau state;

  void gate(const GatePlacement& g, GateSet set) {
    if (set != GateSet::Clifford) throw std::invalid_argument("the stabilizer engine runs Clifford gates only");
    state.apply(two_qubit_clifford(static_cast<std::uint32_t>(g.id)), g.a, g.b);
  }
  Born measure(std::size_t q, Rng& rng) {
    const auto m = state.measure_z(q, rng);
    return {m.outcome, m.was_random, m.was_random ? -1.0 : 0.0};
  }
  Born force(std::size_t q, int outcome) {
    const auto m = state.measure_z_forced(q, outcome);
    if (m.contradiction) return {outcome, false, kImpossible};
    return {outcome, m.was_random, m.was_random ? -1.0 : 0.0};
  }
  void pauli(Pauli p, std::size_t q) { state.apply_pauli(p, q); }
};

struct FramedEngine {
  FramedState state;

  void gate(const GatePlacement& g, GateSet set) {
    if (set != GateSet::Clifford) throw std::invalid_argument("the framed engine runs Clifford gates only");
    state.apply_with_inverse(two_qubit_clifford_inverse(static_cast<std::uint32_t>(g.id)), g.a, g.b);
  }
  Born measure(std::size_t q, Rng& rng) {
    const auto m = state.measure_z(q, rng);
    return {m.outcome, m.was_random, std::log2(m.probability)};
  }
  Born force(std::size_t q, int outcome) {
    const auto m = state.measure_z_forced(q, outcome);
    return {outcome, m.was_random, m.probability > 0 ? std::log2(m.probability) : kImpossible};
  }
  void pauli(Pauli p, std::size_t q) { state.apply_pauli(p, q); }
};

template <class Scalar>
struct DenseEngine {
  DenseState<Scalar> state;

  void gate(const GatePlacement& g, GateSet set) {
    if (set == GateSet::Clifford) {
      state.apply(two_qubit_clifford_matrix(static_cast<std::uint32_t>(g.id)), g.a, g.b);
    } else {
      Rng rng(g.id);
      state.apply(sample_haar_2q(rng), g.a, g.b);
    }
  }
  Born measure(std::size_t q, Rng& rng) {
    const auto m = state.measure_z(q, rng);
    return {m.outcome, m.probability < 1.0, std::log2(m.probability)};
  }
  Born force(std::size_t q, int outcome) {
    const auto m = state.measure_z_forced(q, outcome);
    if (m.probability == 0.0) return {outcome, false, kImpossible};
    return {outcome, m.probability < 1.0, std::log2(m.probability)};
  }
  void pauli(Pauli p, std::size_t q) { state.apply_pauli(p, q); }
};

template <class Engine>
void apply_gates(const CircuitInstance& c, std::size_t t, Engine& e) {
  for (const auto& g : c.layers[t].gates) e.gate(g, c.spec.gate_set);
}

/// Runs layers [t_begin, t_end) in sample mode, appending to `out`. Noise
/// events must be sorted; those outside the layer range are ignored.
template <class Engine>
void sample_layers(const CircuitInstance& c, Engine& e, Rng& outcomes, TrajectoryResult& out,
                   std::size_t t_begin, std::size_t t_end, std::span<const NoiseEvent> noise = {}) {
  std::size_t k = 0;
  while (k < noise.size() && noise[k].layer < t_begin) ++k;
  for (std::size_t t = t_begin; t < t_end; ++t) {
    apply_gates(c, t, e);
    for (const std::uint32_t q : c.layers[t].measured) {
      const Born b = e.measure(q, outcomes);
      out.record.push({static_cast<std::uint32_t>(t), q, static_cast<std::int8_t>(b.outcome), b.was_random});
      out.log2_probability += b.log2_p;
    }
    for (; k < noise.size() && noise[k].layer == t; ++k) e.pauli(noise[k].pauli, noise[k].site);
  }
}

/// Replays layers [t_begin, t_end) forcing the outcomes of `record` starting at
/// event `cursor` (advanced). Returns false, with log2_probability = -inf, at
/// the first impossible outcome.
template <class Engine>
bool replay_layers(const CircuitInstance& c, Engine& e, const MeasurementRecord& record, std::size_t& cursor,
                   TrajectoryResult& out, std::size_t t_begin, std::size_t t_end) {
  for (std::size_t t = t_begin; t < t_end; ++t) {
    apply_gates(c, t, e);
    for (const std::uint32_t q : c.layers[t].measured) {
      if (cursor >= record.size()) throw std::invalid_argument("measurement record is shorter than the circuit");
      const MeasurementEvent& src = record.events[cursor++];
      if (src.layer != t || src.site != q)
        throw std::invalid_argument("measurement record does not match the circuit layout");
      const Born b = e.force(q, src.outcome);
      if (std::isinf(b.log2_p)) {
        out.log2_probability = kImpossible;
        return false;
      }
      out.record.push({static_cast<std::uint32_t>(t), q, src.outcome, b.was_random});
      out.log2_probability += b.log2_p;
    }
  }
  return true;
}

/// Samples a full trajectory from the engine's current state.
template <class Engine>
TrajectoryResult run_trajectory(const CircuitInstance& c, Engine& e, Rng& outcomes,
                                std::span<const NoiseEvent> noise = {}) {
  TrajectoryResult out;
  sample_layers(c, e, outcomes, out, 0, c.layers.size(), noise);
  return out;
}

/// Forces every outcome of `record`; early exit on the first impossible one.
template <class Engine>
TrajectoryResult replay_trajectory(const CircuitInstance& c, Engine& e, const MeasurementRecord& record) {
  if (record.size() != c.measurement_count())
    throw std::invalid_argument("measurement record length does not match the circuit");
  TrajectoryResult out;
  std::size_t cursor = 0;
  replay_layers(c, e, record, cursor, out, 0, c.layers.size());
  return out;
}

}  // namespace xent
