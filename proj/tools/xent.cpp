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

// xent <experiment> --config <file> [--seed N] [--workers N] [--out DIR]

#include <iostream>

#include "CLI11.hpp"
#include "xent/config.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear cross-entropy benchmarks for monitored random circuits"};
  std::string experiment, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  app.add_option("experiment", experiment, "sweep | variance | noise | collapse | ptdist | single")->required();
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--seed", seed, "override master_seed");
  app.add_option("--workers", workers, "override worker count (0 = all hardware threads)");
  app.add_option("--out", out_dir, "override output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  xent::RunConfig cfg;
  try {
    std::ifstream in(config_path);
    if (!in) throw xent::ConfigError("cannot open config file '" + config_path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw xent::ConfigError("config file '" + config_path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw xent::ConfigError("config file must hold a JSON object");
    const auto wanted = xent::parse_experiment(experiment);
    if (j.contains("experiment") && j["experiment"] != experiment)
      throw xent::ConfigError("field 'experiment': config says " + j["experiment"].dump() + " but the command is '" +
                              experiment + "'");
    j["experiment"] = xent::experiment_name(wanted);
    if (seed) j["master_seed"] = *seed;
    if (workers) j["workers"] = *workers;
    if (!out_dir.empty()) j["output"] = out_dir;
    cfg = xent::parse_config(j);
  } catch (const xent::ConfigError& e) {
    std::cerr << "xent: config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const auto files = xent::run(cfg, std::cout);
    for (const auto& f : files) std::cerr << "wrote " << f.string() << '\n';
  } catch (const xent::ConfigError& e) {
    std::cerr << "xent: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "xent: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
