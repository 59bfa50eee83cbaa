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

#include "xent/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "xent/parallel.hpp"

namespace xent {

ChiEstimate estimate(const CircuitInstance& c, const InitialStatePair& pair, const EstimatorChoice& est) {
  switch (est.method) {
    case Method::Subgroup:
      return chi_exact_subgroup(c, pair, est.verify);
    case Method::Register: {
      if (c.spec.noise_q <= 0.0) return chi_exact_register(c, pair);
      double s = 0, s2 = 0;
      for (std::size_t j = 0; j < est.M; ++j) {
        Rng rng(c.spec.master_seed, c.circuit_index, j, Purpose::Noise);
        const double v = chi_exact_register(c, pair, noise_realization(c, rng)).value;
        s += v;
        s2 += v * v;
      }
      const double n = static_cast<double>(est.M);
      ChiEstimate e;
      e.method = Method::Register;
      e.M = est.M;
      e.circuit_index = c.circuit_index;
      e.value = s / n;
      if (est.M > 1) e.std_error = std::sqrt(std::max(0.0, (s2 - n * e.value * e.value) / (n - 1)) / n);
      return e;
    }
    case Method::Sampled:
      return chi_sampled(c, pair, est.M);
    case Method::PrimeQ:
      return chi_prime_q_sampled(c, pair, est.Q, est.M);
    case Method::HaarTwoSided:
      return chi_haar_two_sided(c, pair, est.M, est.M_prime, est.dense_cap);
  }
  throw std::logic_error("unknown estimator");
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t L, double p, double q) {
  std::uint64_t k = hash_combine(master_seed, L);
  k = hash_combine(k, std::bit_cast<std::uint64_t>(p));
  return hash_combine(k, std::bit_cast<std::uint64_t>(q));
}

CircuitSpec SweepSpec::cell_spec(std::size_t L_, double p_, double q_) const {
  CircuitSpec s = CircuitSpec::with_defaults(L_, p_);
  if (t_encoding) s.t_encoding = *t_encoding;
  if (t_bulk) s.t_bulk = *t_bulk;
  s.gate_set = gate_set;
  s.noise_q = q_;
  s.encoding_enabled = encoding_enabled;
  s.master_seed = cell_seed(master_seed, L_, p_, q_);
  s.validate();
  return s;
}

InitialStatePair SweepSpec::pair(std::size_t L_) const { return make_pair(state, L_, site.value_or(L_ / 2)); }

const SweepCell& SweepResult::at(std::size_t L, double p, double q) const {
  for (const auto& c : cells)
    if (c.L == L && c.p == p && c.q == q) return c;
  throw std::out_of_range("no sweep cell at the requested (L, p, q)");
}

SweepResult sweep_chi(const SweepSpec& spec) {
  if (spec.M_C == 0) throw std::invalid_argument("M_C must be positive");
  SweepResult out;
  out.estimator = spec.estimator;
  std::vector<CircuitSpec> specs;
  std::vector<InitialStatePair> pairs;
  for (std::size_t L : spec.L)
    for (double p : spec.p)
      for (double q : spec.q) {
        specs.push_back(spec.cell_spec(L, p, q));
        pairs.push_back(spec.pair(L));
        SweepCell cell;
        cell.L = L;
        cell.p = p;
        cell.q = q;
        cell.M_C = spec.M_C;
        cell.seed_base = specs.back().master_seed;
        out.cells.push_back(std::move(cell));
      }

  const std::size_t n_tasks = specs.size() * spec.M_C;
  std::vector<double> values(n_tasks), errors(n_tasks);
  // Larger cells first keeps the tail of the schedule short.
  std::vector<std::size_t> order(n_tasks);
  for (std::size_t i = 0; i < n_tasks; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return specs[a / spec.M_C].L > specs[b / spec.M_C].L;
  });
  parallel_for(n_tasks, spec.workers, [&](std::size_t k) {
    const std::size_t task = order[k];
    const std::size_t cell = task / spec.M_C, idx = task % spec.M_C;
    const CircuitInstance c = generate_instance(specs[cell], idx);
    const ChiEstimate e = estimate(c, pairs[cell], spec.estimator);
    values[task] = e.value;
    errors[task] = e.std_error;
  });

  const double n = static_cast<double>(spec.M_C);
  for (std::size_t cell = 0; cell < out.cells.size(); ++cell) {
    auto& oc = out.cells[cell];
    const double* v = values.data() + cell * spec.M_C;
    const double* e = errors.data() + cell * spec.M_C;
    double s = 0, within = 0;
    for (std::size_t i = 0; i < spec.M_C; ++i) {
      s += v[i];
      within += e[i] * e[i];
    }
    oc.mean = s / n;
    double ss = 0;
    for (std::size_t i = 0; i < spec.M_C; ++i) ss += (v[i] - oc.mean) * (v[i] - oc.mean);
    const double between = spec.M_C > 1 ? ss / (n - 1) / n : 0.0;
    oc.std_error = std::sqrt(between + within / (n * n));
    if (spec.keep_values) oc.values.assign(v, v + spec.M_C);
  }
  return out;
}

SweepResult noise_sweep(SweepSpec spec) {
  if (spec.estimator.method != Method::Sampled && spec.estimator.method != Method::PrimeQ)
    spec.estimator.method = Method::Sampled;
  return sweep_chi(spec);
}

SweepResult no_encoding_experiment(SweepSpec spec) {
  spec.encoding_enabled = false;
  if (spec.state != StatePreset::SingleSite) spec.state = StatePreset::SingleSite;
  return sweep_chi(spec);
}

std::vector<Curve> curves(const SweepResult& r, double q) {
  std::vector<Curve> out;
  for (const auto& c : r.cells) {
    if (c.q != q) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const Curve& k) { return k.L == c.L; });
    if (it == out.end()) {
      out.push_back({c.L, {}, {}, {}});
      it = out.end() - 1;
    }
    it->p.push_back(c.p);
    it->chi.push_back(c.mean);
    it->err.push_back(c.std_error);
  }
  for (auto& k : out) {
    std::vector<std::size_t> idx(k.p.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return k.p[a] < k.p[b]; });
    Curve s{k.L, {}, {}, {}};
    for (std::size_t i : idx) {
      s.p.push_back(k.p[i]);
      s.chi.push_back(k.chi[i]);
      s.err.push_back(k.err[i]);
    }
    k = std::move(s);
  }
  std::sort(out.begin(), out.end(), [](const Curve& a, const Curve& b) { return a.L < b.L; });
  return out;
}

namespace {

// chi_big - chi_small on the p values shared by both curves.
std::vector<std::pair<double, double>> difference(const Curve& small, const Curve& big) {
  std::vector<std::pair<double, double>> d;
  for (std::size_t i = 0; i < big.p.size(); ++i) {
    const auto it = std::find(small.p.begin(), small.p.end(), big.p[i]);
    if (it == small.p.end()) continue;
    d.emplace_back(big.p[i], big.chi[i] - small.chi[static_cast<std::size_t>(it - small.p.begin())]);
  }
  return d;
}

}  // namespace

std::vector<double> pairwise_crossings(const Curve& small, const Curve& big) {
  const auto d = difference(small, big);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    const auto [p0, d0] = d[i];
    const auto [p1, d1] = d[i + 1];
    if (d0 > 0 && d1 <= 0) out.push_back(p0 + (p1 - p0) * d0 / (d0 - d1));
  }
  return out;
}

bool order_swap(const Curve& small, const Curve& big, double p_low, double p_high) {
  double lo = std::nan(""), hi = std::nan("");
  for (const auto& [p, d] : difference(small, big)) {
    if (p == p_low) lo = d;
    if (p == p_high) hi = d;
  }
  if (std::isnan(lo) || std::isnan(hi)) throw std::invalid_argument("order_swap: p not on the shared grid");
  return lo > 0 && hi < 0;
}

CrossingAnalysis analyze_crossing(const SweepResult& r, double q) {
  const auto cs = curves(r, q);
  CrossingAnalysis out;
  if (cs.size() < 2) return out;
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      CrossingAnalysis::Pair pr;
      pr.L_small = cs[i].L;
      pr.L_big = cs[j].L;
      const auto x = pairwise_crossings(cs[i], cs[j]);
      if (!x.empty()) {
        pr.p_c = x.front();
        sum += x.front();
        ++n;
      }
      const auto d = difference(cs[i], cs[j]);
      if (!d.empty()) pr.order_swap = d.front().second > 0 && d.back().second < 0;
      out.order_swap_anywhere |= pr.order_swap;
      out.pairs.push_back(pr);
    }
  if (n > 0) out.p_c = sum / static_cast<double>(n);
  for (const auto& pr : out.pairs)
    if (pr.L_small == cs.front().L && pr.L_big == cs.back().L) out.order_swap_extreme = pr.order_swap;
  return out;
}

LocalDifferenceAnalysis analyze_local_difference(const SweepResult& r, double q) {
  const auto cs = curves(r, q);
  LocalDifferenceAnalysis out;
  out.collapsed = true;
  if (cs.empty()) return out;
  for (std::size_t k = 0; k < cs.front().p.size(); ++k) {
    const double p = cs.front().p[k];
    double dev = 0, z = 0;
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t j = i + 1; j < cs.size(); ++j) {
        const auto a = std::find(cs[i].p.begin(), cs[i].p.end(), p) - cs[i].p.begin();
        const auto b = std::find(cs[j].p.begin(), cs[j].p.end(), p) - cs[j].p.begin();
        if (static_cast<std::size_t>(a) == cs[i].p.size() || static_cast<std::size_t>(b) == cs[j].p.size()) continue;
        const double delta = std::abs(cs[i].chi[a] - cs[j].chi[b]);
        const double sigma = std::hypot(cs[i].err[a], cs[j].err[b]);
        dev = std::max(dev, delta);
        z = std::max(z, delta == 0 ? 0.0 : sigma == 0 ? INFINITY : delta / sigma);
      }
    out.p.push_back(p);
    out.max_deviation.push_back(dev);
    out.max_z.push_back(z);
    out.collapsed &= z <= 3.0;
  }
  return out;
}

std::vector<VarianceRow> batch_variance(std::span<const double> pool, std::span<const std::size_t> M_C_grid,
                                        std::size_t L, double p) {
  const std::size_t N = pool.size();
  double ref = 0;
  for (double v : pool) ref += v;
  ref /= static_cast<double>(N);
  std::vector<VarianceRow> rows;
  for (std::size_t m : M_C_grid) {
    if (m == 0 || 2 * m > N) throw std::invalid_argument("variance study: pool too small for M_C = " + std::to_string(m));
    const std::size_t R = N / m;
    double acc = 0;
    for (std::size_t b = 0; b < R; ++b) {
      double mu = 0;
      for (std::size_t i = 0; i < m; ++i) mu += pool[b * m + i];
      mu /= static_cast<double>(m);
      acc += (mu - ref) * (mu - ref);
    }
    // Batches and the reference come from the same finite pool.
    const double fpc = static_cast<double>(N) / static_cast<double>(N - m);
    VarianceRow row;
    row.L = L;
    row.p = p;
    row.M_C = m;
    row.sigma2 = acc / static_cast<double>(R) * fpc;
    row.sigma2_err = row.sigma2 * std::sqrt(2.0 / static_cast<double>(R));
    row.repetitions = R;
    rows.push_back(row);
  }
  return rows;
}

VarianceResult variance_study(const VarianceSpec& spec) {
  if (spec.M_C_grid.empty()) throw std::invalid_argument("variance study: empty M_C grid");
  const std::size_t largest = *std::max_element(spec.M_C_grid.begin(), spec.M_C_grid.end());
  if (spec.pool < 2 * largest)
    throw std::invalid_argument("variance study: insufficient circuits (pool < 2 * max M_C)");
  SweepSpec s = spec.sweep;
  s.M_C = spec.pool;
  s.keep_values = true;
  VarianceResult out;
  out.pool = sweep_chi(s);
  for (const auto& cell : out.pool.cells) {
    const auto rows = batch_variance(cell.values, spec.M_C_grid, cell.L, cell.p);
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
  }
  return out;
}

VarianceFit fit_variance(std::span<const VarianceRow> rows) {
  VarianceFit f;
  if (!rows.empty() && std::all_of(rows.begin(), rows.end(), [](const VarianceRow& r) { return r.sigma2 == 0; })) {
    // Every circuit gave the same chi: no fluctuations to fit.
    f.slope = f.slope_err = std::numeric_limits<double>::quiet_NaN();
    return f;
  }
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  double aw = 0, a = 0;
  for (const auto& r : rows) {
    if (r.sigma2 <= 0) continue;
    const double x = std::log(static_cast<double>(r.M_C)), y = std::log(r.sigma2);
    const double rel = r.sigma2_err / r.sigma2;
    const double w = 1.0 / (rel * rel);
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
    const double amp = r.sigma2 * static_cast<double>(r.M_C);
    const double amp_err = r.sigma2_err * static_cast<double>(r.M_C);
    aw += 1.0 / (amp_err * amp_err);
    a += amp / (amp_err * amp_err);
  }
  const double det = sw * sxx - sx * sx;
  if (sw == 0 || det <= 0) throw std::runtime_error("variance fit needs two distinct M_C with nonzero variance");
  f.slope = (sw * sxy - sx * sy) / det;
  f.slope_err = std::sqrt(sw / det);
  f.amplitude = a / aw;
  f.amplitude_err = 1.0 / std::sqrt(aw);
  return f;
}

}  // namespace xent
