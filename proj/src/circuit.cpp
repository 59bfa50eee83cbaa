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

#include "xent/circuit.hpp"

#include <stdexcept>

#include "xent/local_clifford.hpp"
#include "xent/random.hpp"

namespace xent {

const char* gate_set_name(GateSet g) noexcept { return g == GateSet::Clifford ? "clifford" : "haar"; }

GateSet parse_gate_set(const std::string& name) {
  if (name == "clifford") return GateSet::Clifford;
  if (name == "haar") return GateSet::Haar;
  throw std::invalid_argument("unknown gate set '" + name + "' (expected clifford or haar)");
}

CircuitSpec CircuitSpec::with_defaults(std::size_t L, double p) {
  CircuitSpec s;
  s.L = L;
  s.p = p;
  s.t_encoding = 2 * L;
  s.t_bulk = 2 * L;
  return s;
}

void CircuitSpec::validate() const {
  if (L < 2 || L % 2 != 0) throw std::invalid_argument("L must be even and at least 2");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (!(noise_q >= 0.0 && noise_q <= 1.0)) throw std::invalid_argument("noise_q must lie in [0, 1]");
  if (L > (std::size_t{1} << 31)) throw std::invalid_argument("L too large");
}

void to_json(nlohmann::json& j, const CircuitSpec& s) {
  j = nlohmann::json{{"L", s.L},
                     {"p", s.p},
                     {"t_encoding", s.t_encoding},
                     {"t_bulk", s.t_bulk},
                     {"gate_set", gate_set_name(s.gate_set)},
                     {"noise_q", s.noise_q},
                     {"encoding_enabled", s.encoding_enabled},
                     {"boundary", "open"},
                     {"master_seed", s.master_seed}};
}

void from_json(const nlohmann::json& j, CircuitSpec& s) {
  s.L = j.at("L").get<std::size_t>();
  s.p = j.at("p").get<double>();
  s.t_encoding = j.at("t_encoding").get<std::size_t>();
  s.t_bulk = j.at("t_bulk").get<std::size_t>();
  s.gate_set = parse_gate_set(j.at("gate_set").get<std::string>());
  s.noise_q = j.at("noise_q").get<double>();
  s.encoding_enabled = j.at("encoding_enabled").get<bool>();
  if (j.value("boundary", std::string("open")) != "open")
    throw std::invalid_argument("only open boundaries are implemented");
  s.master_seed = j.at("master_seed").get<std::uint64_t>();
}

std::size_t CircuitInstance::measurement_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.measured.size();
  return n;
}

CircuitInstance generate_instance(const CircuitSpec& spec, std::uint64_t circuit_index) {
  spec.validate();
  CircuitInstance c;
  c.spec = spec;
  c.circuit_index = circuit_index;
  c.derived_seed = hash_combine(spec.master_seed, circuit_index);
  Rng layout(spec.master_seed, circuit_index, 0, Purpose::Layout);
  Rng gates(spec.master_seed, circuit_index, 0, Purpose::Gates);
  const std::size_t T = spec.total_time();
  const auto L = static_cast<std::uint32_t>(spec.L);
  c.layers.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    Layer& layer = c.layers[t];
    for (std::uint32_t a = (t % 2 == 0) ? 0 : 1; a + 1 < L; a += 2) {
      const std::uint64_t id = spec.gate_set == GateSet::Clifford ? sample_two_qubit_clifford(gates) : gates();
      layer.gates.push_back({a, a + 1, id});
    }
    if (t >= spec.first_monitored_layer() && spec.p > 0.0)
      for (std::uint32_t q = 0; q < L; ++q)
        if (layout.bernoulli(spec.p)) layer.measured.push_back(q);
  }
  return c;
}

void to_json(nlohmann::json& j, const CircuitInstance& c) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : c.layers) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto& g : l.gates) gates.push_back({g.a, g.b, g.id});
    layers.push_back({{"gates", gates}, {"measured", l.measured}});
  }
  j = nlohmann::json{{"spec", c.spec},
                     {"circuit_index", c.circuit_index},
                     {"derived_seed", c.derived_seed},
                     {"layers", layers}};
}

void from_json(const nlohmann::json& j, CircuitInstance& c) {
  c.spec = j.at("spec").get<CircuitSpec>();
  c.circuit_index = j.at("circuit_index").get<std::uint64_t>();
  c.derived_seed = j.at("derived_seed").get<std::uint64_t>();
  c.layers.clear();
  for (const auto& lj : j.at("layers")) {
    Layer l;
    for (const auto& g : lj.at("gates"))
      l.gates.push_back({g.at(0).get<std::uint32_t>(), g.at(1).get<std::uint32_t>(), g.at(2).get<std::uint64_t>()});
    l.measured = lj.at("measured").get<std::vector<std::uint32_t>>();
    c.layers.push_back(std::move(l));
  }
}

}  // namespace xent
