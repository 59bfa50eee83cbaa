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

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "xent/config.hpp"
#include "xent/parallel.hpp"

#ifndef XENT_VERSION
#define XENT_VERSION "unknown"
#endif

namespace xent {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string sweep_csv(const SweepResult& r, const RunConfig& c) {
  std::ostringstream s;
  s << "L,p,q,estimator,M,M_C,chi_mean,chi_stderr,seed_base\n";
  const bool exact = c.estimator == Method::Subgroup;
  for (const auto& cell : r.cells) {
    const bool averaged = !exact && !(c.estimator == Method::Register && cell.q == 0.0);
    s << cell.L << ',' << format_double(cell.p) << ',' << format_double(cell.q) << ',' << method_name(c.estimator)
      << ',' << (averaged ? c.M : 0) << ',' << cell.M_C << ',' << format_double(cell.mean) << ','
      << format_double(cell.std_error) << ',' << cell.seed_base << '\n';
  }
  return s.str();
}

std::string variance_csv(std::span<const VarianceRow> rows) {
  std::ostringstream s;
  s << "L,p,M_C,sigma2,sigma2_err,repetitions\n";
  for (const auto& r : rows)
    s << r.L << ',' << format_double(r.p) << ',' << r.M_C << ',' << format_double(r.sigma2) << ','
      << format_double(r.sigma2_err) << ',' << r.repetitions << '\n';
  return s.str();
}

std::string ptdist_csv(std::span<const ZHistogram> hs) {
  std::ostringstream s;
  s << "p,L,bin_lo,bin_hi,density,zero_mass,gamma,gamma_err\n";
  for (const auto& h : hs)
    for (std::size_t k = 0; k < h.density.size(); ++k)
      s << format_double(h.p) << ',' << h.L << ',' << format_double(h.edges[k]) << ','
        << format_double(h.edges[k + 1]) << ',' << format_double(h.density[k]) << ','
        << format_double(h.zero_mass) << ',' << format_double(h.gamma) << ',' << format_double(h.gamma_err)
        << '\n';
  return s.str();
}

namespace {

using nlohmann::json;

// NaN and inf are not JSON; emit null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json crossing_json(const SweepResult& r, const std::vector<double>& qs) {
  json out = json::array();
  for (double q : qs) {
    const auto a = analyze_crossing(r, q);
    json pairs = json::array();
    for (const auto& pr : a.pairs)
      pairs.push_back({{"L_small", pr.L_small},
                       {"L_big", pr.L_big},
                       {"p_c", pr.p_c ? json(*pr.p_c) : json(nullptr)},
                       {"order_swap", pr.order_swap}});
    out.push_back({{"q", q},
                   {"p_c", a.p_c ? json(*a.p_c) : json(nullptr)},
                   {"order_swap_extreme", a.order_swap_extreme},
                   {"order_swap_anywhere", a.order_swap_anywhere},
                   {"pairs", pairs}});
  }
  return out;
}

json collapse_json(const CollapseFit& f) {
  return {{"p_c", f.p_c},          {"nu", f.nu},         {"residual", number(f.residual)},
          {"p_c_range", f.p_c_range}, {"nu_range", f.nu_range}, {"grid", f.grid},
          {"window", f.window},    {"points", f.points}};
}

json seeds_json(const SweepResult& r) {
  json cells = json::array();
  for (const auto& c : r.cells)
    cells.push_back({{"L", c.L}, {"p", c.p}, {"q", c.q}, {"seed_base", c.seed_base}, {"circuits", {0, c.M_C}}});
  return cells;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<std::filesystem::path> run(const RunConfig& c, std::ostream& out) {
  c.validate();
  const auto started = std::chrono::steady_clock::now();

  if (c.experiment == Experiment::Single) {
    const CircuitSpec spec = c.spec_for(c.L.front(), c.p.front(), c.q.front());
    const CircuitInstance inst = generate_instance(spec, c.circuit_index);
    const auto pair = make_pair(c.state, spec.L, c.site.value_or(spec.L / 2));
    out << to_jsonl(estimate(inst, pair, c.estimator_choice()), spec).dump() << '\n';
    out.flush();
    return {};
  }

  const std::filesystem::path dir(c.output);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  json manifest;
  manifest["config"] = to_json(c);
  json depths = json::array();
  for (std::size_t L : c.L) {
    const auto s = c.spec_for(L, c.p.front(), 0.0);
    depths.push_back({{"L", L}, {"t_encoding", s.t_encoding}, {"t_bulk", s.t_bulk}});
  }
  manifest["resolved"] = {{"depths", depths}, {"workers", resolve_workers(c.workers)}};
  manifest["code_version"] = XENT_VERSION;
  manifest["conventions"] = {
      {"boundary", "open"},
      {"brickwork", "even layers couple (2i, 2i+1), odd layers (2i+1, 2i+2)"},
      {"measurement", "after the gates of each layer, at layers t >= t_encoding"},
      {"noise", "after measurements; X, Y, Z each with probability q/3 per site and layer"},
      {"clifford_gates", "uniform over the 11520 two-qubit Cliffords"},
      {"seed_streams", "(cell seed, circuit index, trajectory index, purpose)"}};
  json analysis;

  auto emit = [&](const std::string& name, const std::string& content) {
    const auto path = dir / name;
    write_atomic(path, content);
    written.push_back(path);
  };

  switch (c.experiment) {
    case Experiment::Sweep:
    case Experiment::Noise:
    case Experiment::Collapse: {
      const SweepResult r = c.experiment == Experiment::Noise ? noise_sweep(c.sweep_spec()) : sweep_chi(c.sweep_spec());
      emit("sweep.csv", sweep_csv(r, c));
      manifest["seeds"] = seeds_json(r);
      analysis["crossing"] = crossing_json(r, c.q);
      if (c.experiment == Experiment::Collapse) {
        const auto fit = collapse_fit(collapse_points(r, c.q.front()), c.p_c_range, c.nu_range, c.collapse_grid);
        emit("collapse.json", collapse_json(fit).dump(2) + "\n");
        analysis["collapse"] = collapse_json(fit);
      }
      break;
    }
    case Experiment::Variance: {
      const VarianceResult v = variance_study(c.variance_spec());
      emit("variance.csv", variance_csv(v.rows));
      manifest["seeds"] = seeds_json(v.pool);
      json fits = json::array();
      for (const auto& cell : v.pool.cells) {
        std::vector<VarianceRow> rows;
        for (const auto& row : v.rows)
          if (row.L == cell.L && row.p == cell.p) rows.push_back(row);
        json f = {{"L", cell.L}, {"p", cell.p}, {"chi_reference", cell.mean}, {"chi_reference_stderr", cell.std_error}};
        try {
          const auto vf = fit_variance(rows);
          f["slope"] = number(vf.slope);
          f["slope_err"] = number(vf.slope_err);
          f["amplitude"] = vf.amplitude;
          f["amplitude_err"] = vf.amplitude_err;
        } catch (const std::runtime_error& e) {
          f["fit_error"] = e.what();
        }
        fits.push_back(f);
      }
      analysis["variance"] = fits;
      break;
    }
    case Experiment::PtDist: {
      std::vector<ZHistogram> hs;
      json hj = json::array();
      for (std::size_t L : c.L)
        for (double p : c.p) {
          hs.push_back(porter_thomas(c.porter_thomas_spec(L, p)));
          const auto& h = hs.back();
          json sens = json::array();
          for (const auto& t : h.sensitivity)
            sens.push_back({{"lambda", t.lambda}, {"gamma", number(t.gamma)}, {"gamma_err", number(t.gamma_err)}});
          hj.push_back({{"L", L},
                        {"p", p},
                        {"seed_base", h.seed_base},
                        {"circuits", h.circuits},
                        {"mean_z", h.mean_z},
                        {"zero_mass", h.zero_mass},
                        {"ks_exponential", h.ks},
                        {"gamma", number(h.gamma)},
                        {"gamma_err", number(h.gamma_err)},
                        {"sensitivity", sens}});
        }
      emit("ptdist.csv", ptdist_csv(hs));
      analysis["ptdist"] = hj;
      break;
    }
    case Experiment::Single:
      break;
  }

  manifest["analysis"] = analysis;
  json outputs = json::array();
  for (const auto& p : written) outputs.push_back(p.filename().string());
  manifest["outputs"] = outputs;
  manifest["timing"] = {
      {"finished_utc", utc_now()},
      {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()}};
  emit("manifest.json", manifest.dump(2) + "\n");
  return written;
}

}  // namespace xent
