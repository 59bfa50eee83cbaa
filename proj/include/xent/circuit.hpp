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
#include <string>
#include <vector>

#include "json.hpp"

namespace xent {

enum class GateSet : std::uint8_t { Clifford, Haar };

const char* gate_set_name(GateSet g) noexcept;
GateSet parse_gate_set(const std::string& name);

/// Parameters of one circuit ensemble.
struct CircuitSpec {
  std::size_t L = 8;
  double p = 0.0;
  std::size_t t_encoding = 16;
  std::size_t t_bulk = 16;
  GateSet gate_set = GateSet::Clifford;
  double noise_q = 0.0;
  bool encoding_enabled = true;
  std::uint64_t master_seed = 0;

  /// Spec with the default depths t_encoding = t_bulk = 2L.
  static CircuitSpec with_defaults(std::size_t L, double p);

  std::size_t total_time() const noexcept { return t_encoding + t_bulk; }
  /// First layer that may contain measurements.
  std::size_t first_monitored_layer() const noexcept { return encoding_enabled ? t_encoding : 0; }

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;

  friend bool operator==(const CircuitSpec&, const CircuitSpec&) = default;
};

void to_json(nlohmann::json& j, const CircuitSpec& s);
void from_json(const nlohmann::json& j, CircuitSpec& s);

/// Two-qubit gate on sites (a, b). For Clifford circuits `id` indexes the
/// two-qubit Clifford table; for Haar circuits it seeds the gate draw.
struct GatePlacement {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint64_t id = 0;

  friend bool operator==(const GatePlacement&, const GatePlacement&) = default;
};

struct Layer {
  std::vector<GatePlacement> gates;
  std::vector<std::uint32_t> measured;  // ascending

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// Brickwork circuit with open boundaries. Layer t couples (2i, 2i+1) for
/// even t and (2i+1, 2i+2) for odd t; measurements follow the gates.
struct CircuitInstance {
  CircuitSpec spec;
  std::uint64_t circuit_index = 0;
  std::uint64_t derived_seed = 0;
  std::vector<Layer> layers;

  std::size_t measurement_count() const noexcept;

  friend bool operator==(const CircuitInstance&, const CircuitInstance&) = default;
};

/// Pure function of (spec, circuit_index).
CircuitInstance generate_instance(const CircuitSpec& spec, std::uint64_t circuit_index);

void to_json(nlohmann::json& j, const CircuitInstance& c);
void from_json(const nlohmann::json& j, CircuitInstance& c);

}  // namespace xent
