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
#include <fstream>
#include <set>
#include <sstream>

#include "xent/config.hpp"

namespace xent {

const char* experiment_name(Experiment e) noexcept {
  switch (e) {
    case Experiment::Sweep: return "sweep";
    case Experiment::Variance: return "variance";
    case Experiment::Noise: return "noise";
    case Experiment::Collapse: return "collapse";
    case Experiment::PtDist: return "ptdist";
    case Experiment::Single: return "single";
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::Sweep, Experiment::Variance, Experiment::Noise, Experiment::Collapse,
                       Experiment::PtDist, Experiment::Single})
    if (name == experiment_name(e)) return e;
  throw ConfigError("field 'experiment': unknown experiment '" + name + "'");
}

namespace {

using nlohmann::json;

// Reads fields of one JSON object and rejects keys nobody asked for.
class Reader {
 public:
  Reader(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    if (!j.is_object()) throw ConfigError(where("") + "expected a JSON object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void size(const std::string& key, std::size_t& out) {
    if (const json* v = find(key)) out = to_size(*v, key);
  }
  void u64(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) out = to_size(*v, key);
  }
  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(key, "expected an integer");
      out = v->get<int>();
    }
  }
  void real(const std::string& key, double& out) {
    if (const json* v = find(key)) out = to_real(*v, key);
  }
  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(key, "expected true or false");
      out = v->get<bool>();
    }
  }
  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(key, "expected a string");
      out = v->get<std::string>();
    }
  }
  void optional_size(const std::string& key, std::optional<std::size_t>& out) {
    if (const json* v = find(key)) {
      if (v->is_null())
        out.reset();
      else
        out = to_size(*v, key);
    }
  }
  void sizes(const std::string& key, std::vector<std::size_t>& out) {
    if (const json* v = find(key)) {
      out.clear();
      if (!v->is_array()) {
        out.push_back(to_size(*v, key));
        return;
      }
      for (const auto& e : *v) out.push_back(to_size(e, key));
    }
  }
  void reals(const std::string& key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      out.clear();
      if (!v->is_array()) {
        out.push_back(to_real(*v, key));
        return;
      }
      for (const auto& e : *v) out.push_back(to_real(e, key));
    }
  }
  void range(const std::string& key, std::array<double, 2>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != 2) fail(key, "expected [low, high]");
      out = {to_real((*v)[0], key), to_real((*v)[1], key)};
    }
  }

  void finish() const {
    for (const auto& [k, _] : j_.items())
      if (!seen_.count(k)) throw ConfigError("unknown key '" + prefix_ + k + "'");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(where(key) + what);
  }

 private:
  std::string where(const std::string& key) const { return "field '" + prefix_ + key + "': "; }

  std::size_t to_size(const json& v, const std::string& key) const {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
      fail(key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  double to_real(const json& v, const std::string& key) const {
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  const json& j_;
  std::string prefix_;
  std::set<std::string> seen_;
};

template <class E, class Parse>
void enumerated(Reader& r, const std::string& key, E& out, Parse parse) {
  if (const json* v = r.find(key)) {
    if (!v->is_string()) r.fail(key, "expected a string");
    try {
      out = parse(v->get<std::string>());
    } catch (const std::invalid_argument& e) {
      r.fail(key, e.what());
    }
  }
}

std::string list(const std::vector<std::size_t>& v) {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  return s.str();
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig c;
  Reader r(j, "");
  enumerated(r, "experiment", c.experiment, parse_experiment);
  r.sizes("L", c.L);
  r.reals("p", c.p);
  r.reals("q", c.q);
  r.size("M", c.M);
  r.size("M_prime", c.M_prime);
  r.size("M_C", c.M_C);
  r.integer("Q", c.Q);
  enumerated(r, "estimator", c.estimator, parse_method);
  enumerated(r, "state", c.state, parse_preset);
  r.optional_size("site", c.site);
  enumerated(r, "gate_set", c.gate_set, parse_gate_set);
  r.optional_size("t_encoding", c.t_encoding);
  r.optional_size("t_bulk", c.t_bulk);
  r.boolean("encoding_enabled", c.encoding_enabled);
  r.u64("master_seed", c.master_seed);
  r.size("workers", c.workers);
  r.string("output", c.output);
  r.size("dense_cap", c.dense_cap);
  r.boolean("verify", c.verify);
  if (const json* v = r.find("variance")) {
    Reader s(*v, "variance.");
    s.sizes("M_C_grid", c.M_C_grid);
    s.size("pool", c.pool);
    s.finish();
  }
  if (const json* v = r.find("collapse")) {
    Reader s(*v, "collapse.");
    s.range("p_c_range", c.p_c_range);
    s.range("nu_range", c.nu_range);
    s.size("grid", c.collapse_grid);
    s.finish();
  }
  if (const json* v = r.find("ptdist")) {
    Reader s(*v, "ptdist.");
    s.size("circuits", c.circuits);
    s.size("bins_per_decade", c.bins_per_decade);
    s.real("z_min", c.z_min);
    s.real("lambda", c.lambda);
    s.finish();
  }
  if (const json* v = r.find("single")) {
    Reader s(*v, "single.");
    s.u64("circuit_index", c.circuit_index);
    s.finish();
  }
  r.finish();
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["experiment"] = experiment_name(c.experiment);
  j["L"] = c.L;
  j["p"] = c.p;
  j["q"] = c.q;
  j["M"] = c.M;
  j["M_prime"] = c.M_prime;
  j["M_C"] = c.M_C;
  j["Q"] = c.Q;
  j["estimator"] = method_name(c.estimator);
  j["state"] = preset_name(c.state);
  j["site"] = c.site ? json(*c.site) : json(nullptr);
  j["gate_set"] = gate_set_name(c.gate_set);
  j["t_encoding"] = c.t_encoding ? json(*c.t_encoding) : json(nullptr);
  j["t_bulk"] = c.t_bulk ? json(*c.t_bulk) : json(nullptr);
  j["encoding_enabled"] = c.encoding_enabled;
  j["master_seed"] = c.master_seed;
  j["workers"] = c.workers;
  j["output"] = c.output;
  j["dense_cap"] = c.dense_cap;
  j["verify"] = c.verify;
  j["variance"] = {{"M_C_grid", c.M_C_grid}, {"pool", c.pool}};
  j["collapse"] = {{"p_c_range", c.p_c_range}, {"nu_range", c.nu_range}, {"grid", c.collapse_grid}};
  j["ptdist"] = {{"circuits", c.circuits}, {"bins_per_decade", c.bins_per_decade}, {"z_min", c.z_min},
                 {"lambda", c.lambda}};
  j["single"] = {{"circuit_index", c.circuit_index}};
  return j;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  const std::string est = std::string("estimator '") + method_name(estimator) + "'";
  const std::string st = std::string("state '") + preset_name(state) + "'";

  if (L.empty()) fail("field 'L': at least one system size is required");
  for (std::size_t l : L)
    if (l < 2 || l % 2) fail("field 'L': sizes must be even and at least 2 (got " + std::to_string(l) + ")");
  if (p.empty()) fail("field 'p': at least one measurement rate is required");
  for (double v : p)
    if (!(v >= 0 && v <= 1)) fail("field 'p': rates must lie in [0, 1]");
  if (q.empty()) fail("field 'q': at least one noise rate is required (use [0])");
  for (double v : q)
    if (!(v >= 0 && v <= 1)) fail("field 'q': rates must lie in [0, 1]");
  if (M == 0) fail("field 'M': must be positive");
  if (M_prime == 0) fail("field 'M_prime': must be positive");
  if (M_C == 0) fail("field 'M_C': must be positive");
  if (Q < 2) fail("field 'Q': must be at least 2");
  if (output.empty()) fail("field 'output': must not be empty");
  if (site) {
    for (std::size_t l : L)
      if (*site >= l) fail("field 'site': " + std::to_string(*site) + " is outside L = " + std::to_string(l));
  }

  const bool noisy = std::any_of(q.begin(), q.end(), [](double v) { return v > 0; });
  const bool stabilizer_only = estimator == Method::Subgroup || estimator == Method::Register;
  const bool sampled = estimator == Method::Sampled || estimator == Method::PrimeQ;
  const std::size_t L_max = *std::max_element(L.begin(), L.end());
  const auto pair = make_pair(state, L_max, site.value_or(L_max / 2));

  if (experiment != Experiment::PtDist) {
    if (gate_set == GateSet::Haar && estimator != Method::HaarTwoSided)
      fail("fields 'gate_set' and 'estimator': gate_set 'haar' is incompatible with " + est +
           " (use estimator 'haar')");
    if (noisy && (estimator == Method::Subgroup || estimator == Method::HaarTwoSided))
      fail("fields 'q' and 'estimator': noise q > 0 is incompatible with " + est);
    if (estimator == Method::Subgroup && !pair.subgroup_condition())
      fail("fields 'estimator' and 'state': " + est + " requires S_rho to be a subgroup of S_sigma, which " + st +
           " violates");
    if (stabilizer_only && !pair.rho_is_stabilizer())
      fail("fields 'estimator' and 'state': " + est + " needs a stabilizer rho, " + st + " has magic sites");
    if (sampled && !pair.sigma_is_pure_stabilizer())
      fail("fields 'estimator' and 'state': " + est + " needs a pure stabilizer sigma");
    if (sampled && !pair.rho_is_stabilizer() && L_max / 2 > FramedState::kMaxDense)
      fail("fields 'L' and 'state': " + st + " at L = " + std::to_string(L_max) + " has more magic sites than " +
           std::to_string(FramedState::kMaxDense));
    if (estimator == Method::HaarTwoSided) {
      if (std::find(pair.rho.begin(), pair.rho.end(), SiteKind::MaximallyMixed) != pair.rho.end())
        fail("fields 'estimator' and 'state': " + est + " runs pure states only, " + st + " is mixed");
      if (L_max > dense_cap)
        fail("fields 'L' and 'dense_cap': L = " + std::to_string(L_max) + " exceeds dense_cap = " +
             std::to_string(dense_cap) + " for " + est);
    }
  }

  switch (experiment) {
    case Experiment::Noise:
      if (!sampled) fail("fields 'experiment' and 'estimator': experiment 'noise' requires estimator 'sampled'");
      break;
    case Experiment::Collapse: {
      std::vector<std::size_t> distinct(L);
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      if (distinct.size() < 3) fail("field 'L': collapse needs at least three distinct sizes, got " + list(L));
      if (!(p_c_range[0] < p_c_range[1])) fail("field 'collapse.p_c_range': expected low < high");
      if (!(nu_range[0] > 0 && nu_range[0] < nu_range[1])) fail("field 'collapse.nu_range': expected 0 < low < high");
      if (collapse_grid < 2) fail("field 'collapse.grid': must be at least 2");
      if (noisy) fail("fields 'experiment' and 'q': collapse needs noiseless data");
      break;
    }
    case Experiment::Variance: {
      if (M_C_grid.empty()) fail("field 'variance.M_C_grid': must not be empty");
      const std::size_t m = *std::max_element(M_C_grid.begin(), M_C_grid.end());
      if (std::find(M_C_grid.begin(), M_C_grid.end(), 0) != M_C_grid.end())
        fail("field 'variance.M_C_grid': entries must be positive");
      if (pool < 2 * m)
        fail("fields 'variance.pool' and 'variance.M_C_grid': pool " + std::to_string(pool) +
             " is smaller than twice the largest M_C " + std::to_string(m));
      break;
    }
    case Experiment::PtDist:
      if (L_max > dense_cap)
        fail("fields 'L' and 'dense_cap': L = " + std::to_string(L_max) + " exceeds dense_cap = " +
             std::to_string(dense_cap));
      if (std::find(pair.rho.begin(), pair.rho.end(), SiteKind::MaximallyMixed) != pair.rho.end())
        fail("field 'state': ptdist needs a pure rho, " + st + " is mixed");
      if (circuits == 0) fail("field 'ptdist.circuits': must be positive");
      if (bins_per_decade == 0) fail("field 'ptdist.bins_per_decade': must be positive");
      if (!(z_min > 0)) fail("field 'ptdist.z_min': must be positive");
      if (!(lambda > 0)) fail("field 'ptdist.lambda': must be positive");
      break;
    case Experiment::Sweep:
    case Experiment::Single:
      break;
  }
}

CircuitSpec RunConfig::spec_for(std::size_t L_, double p_, double q_) const { return sweep_spec().cell_spec(L_, p_, q_); }

EstimatorChoice RunConfig::estimator_choice() const {
  EstimatorChoice e;
  e.method = estimator;
  e.M = M;
  e.M_prime = M_prime;
  e.Q = Q;
  e.dense_cap = dense_cap;
  e.verify = verify;
  return e;
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec s;
  s.L = L;
  s.p = p;
  s.q = q;
  s.M_C = M_C;
  s.estimator = estimator_choice();
  s.state = state;
  s.site = site;
  s.gate_set = gate_set;
  s.encoding_enabled = encoding_enabled;
  s.t_encoding = t_encoding;
  s.t_bulk = t_bulk;
  s.master_seed = master_seed;
  s.workers = workers;
  return s;
}

VarianceSpec RunConfig::variance_spec() const {
  VarianceSpec v;
  v.sweep = sweep_spec();
  v.M_C_grid = M_C_grid;
  v.pool = pool;
  return v;
}

PorterThomasSpec RunConfig::porter_thomas_spec(std::size_t L_, double p_) const {
  PorterThomasSpec s;
  s.L = L_;
  s.p = p_;
  s.circuits = circuits;
  s.state = state;
  s.gate_set = gate_set;
  s.encoding_enabled = encoding_enabled;
  s.bins_per_decade = bins_per_decade;
  s.z_min = z_min;
  s.lambda = lambda;
  s.master_seed = master_seed;
  s.dense_cap = dense_cap;
  s.workers = workers;
  return s;
}

}  // namespace xent
