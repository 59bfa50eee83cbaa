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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "xent/circuit.hpp"
#include "xent/xeb.hpp"

namespace xent {

struct EstimatorChoice {
  Method method = Method::Subgroup;
  std::size_t M = 100;        // rho-side trajectories (sampled, prime_q, haar)
  std::size_t M_prime = 100;  // sigma-side trajectories (haar)
  int Q = 2;
  std::size_t dense_cap = kDefaultDenseCap;
  bool verify = true;  // subgroup: recompute N_rand from a second trajectory

  friend bool operator==(const EstimatorChoice&, const EstimatorChoice&) = default;
};

/// Dispatches to the chosen estimator. Register with q > 0 averages the
/// exact register value over M noise realizations.
ChiEstimate estimate(const CircuitInstance& c, const InitialStatePair& pair, const EstimatorChoice& est);

/// Seed base of the cell (L, p, q); circuit i of the cell is circuit index i
/// under this master seed.
std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t L, double p, double q);

struct SweepSpec {
  std::vector<std::size_t> L;
  std::vector<double> p;
  std::vector<double> q{0.0};
  std::size_t M_C = 100;
  EstimatorChoice estimator;
  StatePreset state = StatePreset::MixedVsZero;
  std::optional<std::size_t> site;  // SingleSite; default L / 2
  GateSet gate_set = GateSet::Clifford;
  bool encoding_enabled = true;
  std::optional<std::size_t> t_encoding;  // default 2L
  std::optional<std::size_t> t_bulk;      // default 2L
  std::uint64_t master_seed = 0;
  bool keep_values = false;
  std::size_t workers = 1;

  CircuitSpec cell_spec(std::size_t L, double p, double q) const;
  InitialStatePair pair(std::size_t L) const;
};

struct SweepCell {
  std::size_t L = 0;
  double p = 0, q = 0;
  std::size_t M_C = 0;
  double mean = 0, std_error = 0;
  std::uint64_t seed_base = 0;  // circuits 0 .. M_C-1 under this seed
  std::vector<double> values;   // per-circuit chi_C when kept
};

struct SweepResult {
  EstimatorChoice estimator;
  std::vector<SweepCell> cells;  // ordered by (L, p, q) as listed in the spec

  const SweepCell& at(std::size_t L, double p, double q = 0.0) const;
};

/// Mean of chi_C over M_C circuits per cell. The standard error is the
/// circuit-to-circuit sample std / sqrt(M_C) with the per-circuit sampling
/// errors added in quadrature.
SweepResult sweep_chi(const SweepSpec& spec);

/// Sweep with the sampled estimator (noisy rho-side) over the q grid.
SweepResult noise_sweep(SweepSpec spec);

/// Sweep with encoding disabled and rho, sigma differing on one site.
SweepResult no_encoding_experiment(SweepSpec spec);

// ---- crossing analysis

struct Curve {
  std::size_t L = 0;
  std::vector<double> p, chi, err;
};

/// Curves of one q slice, ordered by L then p.
std::vector<Curve> curves(const SweepResult& r, double q = 0.0);

/// Zeros of chi_big - chi_small where it turns from positive to
/// non-positive, by linear interpolation between grid points.
std::vector<double> pairwise_crossings(const Curve& small, const Curve& big);

/// chi_big > chi_small at p_low and chi_big < chi_small at p_high.
bool order_swap(const Curve& small, const Curve& big, double p_low, double p_high);

struct CrossingAnalysis {
  struct Pair {
    std::size_t L_small = 0, L_big = 0;
    std::optional<double> p_c;  // first crossing of the pair
    bool order_swap = false;
  };
  std::vector<Pair> pairs;            // all L pairs
  std::optional<double> p_c;          // mean over pairs that cross
  bool order_swap_extreme = false;    // smallest vs largest L over the full p window
  bool order_swap_anywhere = false;   // some pair swaps over the full p window
};

CrossingAnalysis analyze_crossing(const SweepResult& r, double q = 0.0);

struct LocalDifferenceAnalysis {
  std::vector<double> p;
  std::vector<double> max_deviation;  // max over L pairs of |chi_1 - chi_2|
  std::vector<double> max_z;          // same, in units of sqrt(err_1^2 + err_2^2)
  bool collapsed = false;             // max_z <= 3 at every p
};

LocalDifferenceAnalysis analyze_local_difference(const SweepResult& r, double q = 0.0);

// ---- scaling collapse

struct CollapsePoint {
  double L = 0, p = 0, chi = 0, err = 0;
};

std::vector<CollapsePoint> collapse_points(const SweepResult& r, double q = 0.0);

/// Error-weighted mean squared deviation of the points from a master curve
/// built by local quadratic regression in x = (p - p_c) L^{1/nu}. Infinite
/// when fewer than half of the points can be compared.
double collapse_residual(std::span<const CollapsePoint> points, double p_c, double nu);

struct CollapseFit {
  double p_c = 0, nu = 0, residual = 0;
  std::array<double, 2> p_c_range{}, nu_range{};
  std::size_t grid = 0;            // grid x grid coarse search
  std::array<double, 2> window{};  // p range of the data
  std::size_t points = 0;
};

/// Coarse grid over the ranges, then Nelder-Mead from the best grid point.
CollapseFit collapse_fit(std::vector<CollapsePoint> points, std::array<double, 2> p_c_range,
                         std::array<double, 2> nu_range, std::size_t grid = 41);

/// Downhill simplex in two dimensions.
std::array<double, 2> nelder_mead(const std::function<double(std::array<double, 2>)>& f, std::array<double, 2> x0,
                                  std::array<double, 2> step, double tol = 1e-10, std::size_t max_iter = 2000);

// ---- circuit-to-circuit variance

struct VarianceSpec {
  SweepSpec sweep;  // L, p grid; estimator; M_C is ignored
  std::vector<std::size_t> M_C_grid{10, 20, 50, 100, 200, 500};
  std::size_t pool = 2000;
};

struct VarianceRow {
  std::size_t L = 0;
  double p = 0;
  std::size_t M_C = 0;
  double sigma2 = 0, sigma2_err = 0;
  std::size_t repetitions = 0;
};

struct VarianceResult {
  std::vector<VarianceRow> rows;
  SweepResult pool;  // reference chi per (L, p) with per-circuit values
};

/// sigma^2_{M_C} from disjoint batches of a pool of circuits, referenced to
/// the pool mean with a finite-population correction.
VarianceResult variance_study(const VarianceSpec& spec);

/// Variance rows of one (L, p) from a pool of chi_C values.
std::vector<VarianceRow> batch_variance(std::span<const double> pool, std::span<const std::size_t> M_C_grid,
                                        std::size_t L = 0, double p = 0);

struct VarianceFit {
  double slope = 0, slope_err = 0;          // of log sigma^2 vs log M_C
  double amplitude = 0, amplitude_err = 0;  // weighted mean of M_C sigma^2
};

/// All-zero variances give amplitude 0 and a NaN slope.
VarianceFit fit_variance(std::span<const VarianceRow> rows);

// ---- bitstring distributions

struct PorterThomasSpec {
  std::size_t L = 12;
  double p = 0.0;
  std::size_t circuits = 50;
  StatePreset state = StatePreset::MagicVsZero;  // rho of the preset is used
  GateSet gate_set = GateSet::Clifford;
  bool encoding_enabled = true;
  std::size_t bins_per_decade = 10;
  double z_min = 1e-6;
  double lambda = 2.0;
  std::uint64_t master_seed = 0;
  std::size_t dense_cap = kDefaultDenseCap;
  std::size_t workers = 1;
};

struct TailFit {
  double lambda = 0, gamma = 0, gamma_err = 0;
  std::size_t bins = 0;
};

struct ZHistogram {
  double p = 0;
  std::size_t L = 0, circuits = 0;
  std::vector<double> edges;            // bins.size() + 1 log-spaced edges
  std::vector<std::uint64_t> counts;
  std::vector<double> density;          // counts / (total * width)
  std::uint64_t zero_count = 0, total = 0;
  double zero_mass = 0;                 // fraction with z below edges[0]
  double mean_z = 0;                    // exact sample mean of z
  double ks = 0;                        // sup |F_emp(z) - (1 - e^{-z})|
  double gamma = 0, gamma_err = 0;      // tail fit at lambda (NaN if empty)
  std::vector<TailFit> sensitivity;     // lambda in {1, 2, 4}
  std::uint64_t seed_base = 0;
};

ZHistogram porter_thomas(const PorterThomasSpec& spec);

/// Weighted least squares of log density vs log z over bins with
/// lower edge >= lambda. Throws std::runtime_error on an empty tail window.
TailFit fit_tail(const ZHistogram& h, double lambda);

/// Kolmogorov-Smirnov distance of sorted samples to 1 - e^{-z}.
double ks_exponential(std::span<const double> sorted);

}  // namespace xent
