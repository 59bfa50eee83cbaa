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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "xent/config.hpp"

namespace xent {
namespace {

using nlohmann::json;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("xent_config_test_" + name);
  std::filesystem::remove_all(d);
  return d;
}

std::string error_of(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, MinimalDefaults) {
  const RunConfig c = parse_config(json{{"L", {8}}, {"p", {0.1}}});
  EXPECT_EQ(c.experiment, Experiment::Sweep);
  EXPECT_EQ(c.estimator, Method::Subgroup);
  EXPECT_EQ(c.M_C, 100u);
  const CircuitSpec s = c.spec_for(8, 0.1, 0.0);
  EXPECT_EQ(s.t_encoding, 16u);
  EXPECT_EQ(s.t_bulk, 16u);
  EXPECT_EQ(parse_config(json{{"L", 8}, {"p", 0.1}}), c);
}

TEST(Config, FieldPreciseErrors) {
  const std::string haar = error_of({{"L", {8}}, {"p", {0.1}}, {"gate_set", "haar"}, {"estimator", "subgroup"}});
  EXPECT_NE(haar.find("gate_set"), std::string::npos) << haar;
  EXPECT_NE(haar.find("estimator"), std::string::npos) << haar;

  EXPECT_NE(error_of({{"L", {8}}, {"p", {0.1}}, {"bogus", 1}}).find("unknown key 'bogus'"), std::string::npos);
  EXPECT_NE(error_of({{"L", {8}}, {"p", {0.1}}, {"variance", {{"pol", 1}}}}).find("variance.pol"),
            std::string::npos);
  EXPECT_NE(error_of({{"L", {7}}, {"p", {0.1}}}).find("'L'"), std::string::npos);
  EXPECT_NE(error_of({{"L", {8}}, {"p", {1.5}}}).find("'p'"), std::string::npos);
  EXPECT_NE(error_of({{"L", {8}}, {"p", "x"}}).find("'p'"), std::string::npos);
  EXPECT_NE(error_of({{"L", {8}}, {"p", {0.1}}, {"estimator", "magic"}}).find("estimator"), std::string::npos);
  EXPECT_FALSE(error_of({{"L", {8}}, {"p", {0.1}}, {"q", {0.01}}}).empty());
  EXPECT_FALSE(error_of({{"experiment", "collapse"}, {"L", {8, 12}}, {"p", {0.1}}}).empty());
  EXPECT_FALSE(error_of({{"L", {8}}, {"p", {0.1}}, {"state", "magic_vs_zero"}}).empty());
  EXPECT_FALSE(error_of({{"L", {8}}, {"p", {0.1}}, {"Q", 1}}).empty());
  EXPECT_TRUE(error_of({{"L", {8}}, {"p", {0.1}}, {"state", "magic_vs_zero"}, {"estimator", "sampled"}}).empty());
  EXPECT_THROW(load_config("/nonexistent/xent.json"), ConfigError);
}

TEST(Config, RoundTrip) {
  RunConfig c;
  c.experiment = Experiment::Variance;
  c.L = {16, 32};
  c.p = {0.08, 0.24};
  c.estimator = Method::Sampled;
  c.state = StatePreset::PlusVsZero;
  c.site = 3;
  c.t_encoding = 40;
  c.master_seed = 0xFEDCBA9876543210ull;
  c.M_C_grid = {5, 10};
  c.pool = 40;
  c.lambda = 4.0;
  c.validate();
  const RunConfig back = parse_config(to_json(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(parse_config(json::parse(to_json(c).dump())), c);
}

TEST(Config, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -0.0}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Run, CsvIsIndependentOfWorkerCount) {
  json j{{"L", {8, 12}}, {"p", {0.05, 0.2}}, {"M_C", 12}, {"master_seed", 99}};
  std::string csv[2];
  for (int k = 0; k < 2; ++k) {
    j["workers"] = k == 0 ? 1 : 3;
    j["output"] = scratch("workers" + std::to_string(k)).string();
    std::ostringstream log;
    const auto files = run(parse_config(j), log);
    ASSERT_EQ(files.size(), 2u);
    csv[k] = slurp(std::filesystem::path(j["output"].get<std::string>()) / "sweep.csv");
  }
  EXPECT_EQ(csv[0], csv[1]);
  EXPECT_EQ(csv[0].substr(0, csv[0].find('\n')), "L,p,q,estimator,M,M_C,chi_mean,chi_stderr,seed_base");
  EXPECT_EQ(std::count(csv[0].begin(), csv[0].end(), '\n'), 5);
}

TEST(Run, ManifestRecordsConfigAndSeeds) {
  const auto dir = scratch("manifest");
  const RunConfig c =
      parse_config({{"experiment", "collapse"}, {"L", {4, 6, 8}}, {"p", {0.05, 0.1, 0.15, 0.2, 0.3}}, {"M_C", 8}, {"output", dir.string()}});
  std::ostringstream log;
  run(c, log);
  const json m = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(parse_config(m.at("config")), c);
  EXPECT_EQ(m.at("seeds").size(), 15u);
  EXPECT_EQ(m.at("resolved").at("depths").at(0).at("t_encoding"), 8);
  EXPECT_TRUE(m.at("analysis").contains("collapse"));
  EXPECT_TRUE(std::filesystem::exists(dir / "collapse.json"));
}

TEST(Run, AtomicWriteLeavesNoTempFile) {
  const auto dir = scratch("atomic");
  std::filesystem::create_directories(dir);
  write_atomic(dir / "a.txt", "first");
  write_atomic(dir / "a.txt", "second");
  EXPECT_EQ(slurp(dir / "a.txt"), "second");
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++n;
  EXPECT_EQ(n, 1u);
  EXPECT_THROW(write_atomic(dir / "missing" / "b.txt", "x"), std::runtime_error);
  EXPECT_FALSE(std::filesystem::exists(dir / "missing"));
}

TEST(Run, SinglePrintsOneJsonLine) {
  std::ostringstream out;
  const auto files = run(parse_config({{"experiment", "single"},
                                       {"L", {8}},
                                       {"p", {0.2}},
                                       {"estimator", "sampled"},
                                       {"M", 50},
                                       {"single", {{"circuit_index", 3}}}}),
                         out);
  EXPECT_TRUE(files.empty());
  const std::string s = out.str();
  ASSERT_EQ(std::count(s.begin(), s.end(), '\n'), 1);
  const json line = json::parse(s);
  EXPECT_EQ(line.at("method"), "sampled");
  EXPECT_EQ(line.at("circuit_index"), 3);
  EXPECT_EQ(line.at("M"), 50);
  EXPECT_GE(line.at("value").get<double>(), 0.0);
}

TEST(Run, PtDistWritesHistogram) {
  const auto dir = scratch("ptdist");
  std::ostringstream log;
  run(parse_config({{"experiment", "ptdist"},
                    {"L", {6}},
                    {"p", {0.1}},
                    {"estimator", "sampled"},
                    {"state", "magic_vs_zero"},
                    {"ptdist", {{"circuits", 4}}},
                    {"output", dir.string()}}),
      log);
  const std::string csv = slurp(dir / "ptdist.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "p,L,bin_lo,bin_hi,density,zero_mass,gamma,gamma_err");
  EXPECT_GT(std::count(csv.begin(), csv.end(), '\n'), 10);
}

}  // namespace
}  // namespace xent
