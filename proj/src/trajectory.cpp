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

#include "xent/trajectory.hpp"

namespace xent {

std::vector<NoiseEvent> noise_realization(const CircuitInstance& c, Rng& rng) {
  std::vector<NoiseEvent> out;
  const double q = c.spec.noise_q;
  if (q <= 0.0) return out;
  const std::uint64_t L = c.spec.L;
  const std::uint64_t slots = L * c.layers.size();
  std::uint64_t s = 0;
  while (true) {
    const std::uint64_t skip = rng.geometric(q);
    if (skip >= slots - s) break;
    s += skip;
    out.push_back({static_cast<std::uint32_t>(s / L), static_cast<std::uint32_t>(s % L),
                   static_cast<Pauli>(1 + rng.below(3))});
    if (++s >= slots) break;
  }
  return out;
}

PauliString propagate_noise(const CircuitInstance& c, std::span<const NoiseEvent> noise, std::size_t t_end) {
  PauliString frame(c.spec.L);
  std::size_t k = 0;
  if (noise.empty() || noise.front().layer >= t_end) return frame;
  for (std::size_t t = noise.front().layer; t < t_end; ++t) {
    if (t > noise.front().layer) {
      for (const auto& g : c.layers[t].gates) {
        if (frame.at(g.a) == Pauli::I && frame.at(g.b) == Pauli::I) continue;
        PauliString local(2);
        local.set(0, frame.at(g.a));
        local.set(1, frame.at(g.b));
        const PauliString img = two_qubit_clifford(static_cast<std::uint32_t>(g.id)).conjugate(local);
        frame.set(g.a, img.at(0));
        frame.set(g.b, img.at(1));
      }
    }
    for (; k < noise.size() && noise[k].layer == t; ++k) {
      const auto v = static_cast<int>(frame.at(noise[k].site)) ^ static_cast<int>(noise[k].pauli);
      frame.set(noise[k].site, static_cast<Pauli>(v));
    }
  }
  frame.set_negative(false);
  return frame;
}

}  // namespace xent
