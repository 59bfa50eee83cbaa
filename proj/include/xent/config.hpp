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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "xent/experiments.hpp"

namespace xent {

/// Schema or consistency violation in a run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Experiment : std::uint8_t { Sweep, Variance, Noise, Collapse, PtDist, Single };

const char* experiment_name(Experiment e) noexcept;
Experiment parse_experiment(const std::string& name);

struct RunConfig {
  Experiment experiment = Experiment::Sweep;
  std::vector<std::size_t> L;
  std::vector<double> p;
  std::vector<double> q{0.0};
  std::size_t M = 100;
  std::size_t M_prime = 100;
  std::size_t M_C = 100;
  int Q = 2;
  Method estimator = Method::Subgroup;
  StatePreset state = StatePreset::MixedVsZero;
  std::optional<std::size_t> site;
  GateSet gate_set = GateSet::Clifford;
  std::optional<std::size_t> t_encoding;  // null: 2L
  std::optional<std::size_t> t_bulk;      // null: 2L
  bool encoding_enabled = true;
  std::uint64_t master_seed = 0;
  std::size_t workers = 0;  // 0: one per hardware thread
  std::string output = "xent_out";
  std::size_t dense_cap = kDefaultDenseCap;
  bool verify = true;

  // variance
  std::vector<std::size_t> M_C_grid{10, 20, 50, 100, 200, 500};
  std::size_t pool = 2000;
  // collapse
  std::array<double, 2> p_c_range{0.10, 0.22};
  std::array<double, 2> nu_range{0.5, 3.0};
  std::size_t collapse_grid = 41;
  // ptdist
  std::size_t circuits = 50;
  std::size_t bins_per_decade = 10;
  double z_min = 1e-6;
  double lambda = 2.0;
  // single
  std::uint64_t circuit_index = 0;

  /// Throws ConfigError naming the offending fields.
  void validate() const;

  CircuitSpec spec_for(std::size_t L, double p, double q) const;
  EstimatorChoice estimator_choice() const;
  SweepSpec sweep_spec() const;
  VarianceSpec variance_spec() const;
  PorterThomasSpec porter_thomas_spec(std::size_t L, double p) const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates; unknown keys and type mismatches throw ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& c);

/// Runs the configured experiment, writing CSV/JSON artifacts and
/// manifest.json into c.output via temp file + rename. The `single`
/// experiment prints one JSON line to `out` instead. Returns the paths
/// written.
std::vector<std::filesystem::path> run(const RunConfig& c, std::ostream& out);

/// `%.17g`.
std::string format_double(double v);

/// Writes `content` to `path` through a sibling temp file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string sweep_csv(const SweepResult& r, const RunConfig& c);
std::string variance_csv(std::span<const VarianceRow> rows);
std::string ptdist_csv(std::span<const ZHistogram> hs);

}  // namespace xent
