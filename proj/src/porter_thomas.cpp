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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "xent/experiments.hpp"
#include "xent/parallel.hpp"
#include "xent/trajectory.hpp"

namespace xent {

double ks_exponential(std::span<const double> sorted) {
  const double n = static_cast<double>(sorted.size());
  double d = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = -std::expm1(-sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

TailFit fit_tail(const ZHistogram& h, double lambda) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::array<double, 3>> pts;
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    if (h.counts[k] == 0 || h.edges[k] < lambda * (1 - 1e-12)) continue;
    const double x = 0.5 * (std::log(h.edges[k]) + std::log(h.edges[k + 1]));
    const double y = std::log(h.density[k]);
    const double w = static_cast<double>(h.counts[k]);
    pts.push_back({x, y, w});
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
  }
  const double det = sw * sxx - sx * sx;
  if (pts.size() < 2 || det <= 0) throw std::runtime_error("tail fit: empty tail window above z = " + std::to_string(lambda));
  const double slope = (sw * sxy - sx * sy) / det;
  const double icpt = (sy - slope * sx) / sw;
  double chi2 = 0;
  for (const auto& [x, y, w] : pts) chi2 += w * (y - icpt - slope * x) * (y - icpt - slope * x);
  const double red = pts.size() > 2 ? chi2 / static_cast<double>(pts.size() - 2) : 1.0;
  TailFit f;
  f.lambda = lambda;
  f.gamma = -slope;
  f.gamma_err = std::sqrt(sw / det * std::max(1.0, red));
  f.bins = pts.size();
  return f;
}

ZHistogram porter_thomas(const PorterThomasSpec& spec) {
  if (spec.circuits == 0) throw std::invalid_argument("porter_thomas: circuit count must be positive");
  if (spec.L > spec.dense_cap) throw std::length_error("porter_thomas: L exceeds the dense cap");
  if (!(spec.z_min > 0) || spec.bins_per_decade == 0) throw std::invalid_argument("porter_thomas: bad binning");
  CircuitSpec cs = CircuitSpec::with_defaults(spec.L, spec.p);
  cs.gate_set = spec.gate_set;
  cs.encoding_enabled = spec.encoding_enabled;
  cs.master_seed = cell_seed(spec.master_seed, spec.L, spec.p, 0.0);
  cs.validate();
  const auto rho = make_pair(spec.state, spec.L).rho;

  std::vector<std::vector<double>> zs(spec.circuits);
  parallel_for(spec.circuits, spec.workers, [&](std::size_t i) {
    const CircuitInstance c = generate_instance(cs, i);
    DenseEngine<double> e{DenseState<double>(rho, spec.dense_cap)};
    Rng rng(cs.master_seed, i, 0, Purpose::Outcomes);
    run_trajectory(c, e, rng);
    const auto z = e.state.bitstring_distribution();
    zs[i].assign(z.data(), z.data() + z.size());
  });

  ZHistogram h;
  h.p = spec.p;
  h.L = spec.L;
  h.circuits = spec.circuits;
  h.seed_base = cs.master_seed;
  const double z_max = std::ldexp(1.0, static_cast<int>(spec.L));
  const auto bins = static_cast<std::size_t>(
      std::ceil(std::log10(z_max / spec.z_min) * static_cast<double>(spec.bins_per_decade) - 1e-9));
  for (std::size_t k = 0; k <= bins; ++k)
    h.edges.push_back(spec.z_min * std::pow(10.0, static_cast<double>(k) / static_cast<double>(spec.bins_per_decade)));
  h.counts.assign(bins, 0);

  std::vector<double> all;
  all.reserve(spec.circuits << spec.L);
  double zsum = 0;
  for (const auto& v : zs)
    for (double z : v) {
      all.push_back(z);
      zsum += z;
      if (z < h.edges[0]) {
        ++h.zero_count;
        continue;
      }
      auto k = static_cast<std::size_t>(std::upper_bound(h.edges.begin(), h.edges.end(), z) - h.edges.begin()) - 1;
      ++h.counts[std::min(k, bins - 1)];
    }
  h.total = all.size();
  const double n = static_cast<double>(h.total);
  h.zero_mass = static_cast<double>(h.zero_count) / n;
  h.mean_z = zsum / n;
  for (std::size_t k = 0; k < bins; ++k)
    h.density.push_back(static_cast<double>(h.counts[k]) / (n * (h.edges[k + 1] - h.edges[k])));
  std::sort(all.begin(), all.end());
  h.ks = ks_exponential(all);

  auto try_fit = [&](double lambda) {
    try {
      return fit_tail(h, lambda);
    } catch (const std::runtime_error&) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return TailFit{lambda, nan, nan, 0};
    }
  };
  const TailFit main = try_fit(spec.lambda);
  h.gamma = main.gamma;
  h.gamma_err = main.gamma_err;
  for (double lambda : {1.0, 2.0, 4.0}) h.sensitivity.push_back(try_fit(lambda));
  return h;
}

}  // namespace xent
