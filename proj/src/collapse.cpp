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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "xent/experiments.hpp"

namespace xent {

namespace {

// Floor on per-point errors so exact plateaus (chi = 1 at every circuit) do
// not receive infinite weight.
constexpr double kErrorFloor = 1e-3;

double floored(double err) { return std::max(err, kErrorFloor); }

std::vector<CollapsePoint> sorted(std::span<const CollapsePoint> pts) {
  std::vector<CollapsePoint> v(pts.begin(), pts.end());
  std::sort(v.begin(), v.end(), [](const CollapsePoint& a, const CollapsePoint& b) {
    return std::tie(a.L, a.p, a.chi, a.err) < std::tie(b.L, b.p, b.chi, b.err);
  });
  return v;
}

}  // namespace

std::vector<CollapsePoint> collapse_points(const SweepResult& r, double q) {
  std::vector<CollapsePoint> out;
  for (const auto& c : curves(r, q))
    for (std::size_t i = 0; i < c.p.size(); ++i)
      out.push_back({static_cast<double>(c.L), c.p[i], c.chi[i], c.err[i]});
  return out;
}

double collapse_residual(std::span<const CollapsePoint> points, double p_c, double nu) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (!(nu > 0)) return kInf;
  const auto pts = sorted(points);
  const std::size_t n = pts.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (pts[i].p - p_c) * std::pow(pts[i].L, 1.0 / nu);

  // [begin, end) of each L group; within a group x is increasing in p.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pts[j].L == pts[i].L) ++j;
    groups.emplace_back(i, j);
    i = j;
  }

  double total = 0;
  std::size_t used = 0;
  std::vector<std::size_t> nb;
  for (std::size_t i = 0; i < n; ++i) {
    nb.clear();
    for (const auto& [b, e] : groups) {
      if (pts[b].L == pts[i].L) continue;
      for (std::size_t j = b; j + 1 < e; ++j)
        if (x[j] <= x[i] && x[i] <= x[j + 1]) {
          nb.push_back(j);
          nb.push_back(j + 1);
          break;
        }
    }
    if (nb.size() < 2) continue;
    const int k = nb.size() >= 3 ? 3 : 2;
    Eigen::MatrixXd A(nb.size(), k);
    Eigen::VectorXd y(nb.size()), w(nb.size());
    for (std::size_t r = 0; r < nb.size(); ++r) {
      const double dx = x[nb[r]] - x[i];
      A(r, 0) = 1;
      A(r, 1) = dx;
      if (k == 3) A(r, 2) = dx * dx;
      y(r) = pts[nb[r]].chi;
      const double s = floored(pts[nb[r]].err);
      w(r) = 1.0 / (s * s);
    }
    const Eigen::MatrixXd AtW = A.transpose() * w.asDiagonal();
    const Eigen::MatrixXd N = AtW * A;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(N);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd coef = lu.solve(AtW * y);
    const double var_fit = lu.inverse()(0, 0);
    const double s = floored(pts[i].err);
    const double d = pts[i].chi - coef(0);
    total += d * d / (s * s + var_fit);
    ++used;
  }
  if (used == 0 || 2 * used < n) return kInf;
  return total / static_cast<double>(used);
}

std::array<double, 2> nelder_mead(const std::function<double(std::array<double, 2>)>& f, std::array<double, 2> x0,
                                  std::array<double, 2> step, double tol, std::size_t max_iter) {
  using P = std::array<double, 2>;
  std::array<P, 3> s{x0, P{x0[0] + step[0], x0[1]}, P{x0[0], x0[1] + step[1]}};
  std::array<double, 3> fv{f(s[0]), f(s[1]), f(s[2])};
  auto lerp = [](const P& a, const P& b, double t) { return P{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])}; };
  for (std::size_t it = 0; it < max_iter; ++it) {
    std::array<int, 3> o{0, 1, 2};
    std::sort(o.begin(), o.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const P best = s[o[0]], mid = s[o[1]], worst = s[o[2]];
    const double fb = fv[o[0]], fm = fv[o[1]], fw = fv[o[2]];
    const double size = std::max({std::abs(mid[0] - best[0]), std::abs(worst[0] - best[0]),
                                  std::abs(mid[1] - best[1]), std::abs(worst[1] - best[1])});
    if ((std::isfinite(fw) && fw - fb <= tol * (std::abs(fb) + tol)) && size < 1e-8) break;
    if (size < 1e-12) break;
    const P centroid{(best[0] + mid[0]) / 2, (best[1] + mid[1]) / 2};
    const P xr = lerp(centroid, worst, -1.0);
    const double fr = f(xr);
    P next;
    double fnext;
    if (fr < fb) {
      const P xe = lerp(centroid, worst, -2.0);
      const double fe = f(xe);
      next = fe < fr ? xe : xr;
      fnext = std::min(fe, fr);
    } else if (fr < fm) {
      next = xr;
      fnext = fr;
    } else {
      const bool outside = fr < fw;
      const P xc = outside ? lerp(centroid, xr, 0.5) : lerp(centroid, worst, 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fw)) {
        next = xc;
        fnext = fc;
      } else {
        for (int k : {o[1], o[2]}) {
          s[k] = lerp(best, s[k], 0.5);
          fv[k] = f(s[k]);
        }
        continue;
      }
    }
    s[o[2]] = next;
    fv[o[2]] = fnext;
  }
  const auto m = std::min_element(fv.begin(), fv.end()) - fv.begin();
  return s[m];
}

CollapseFit collapse_fit(std::vector<CollapsePoint> points, std::array<double, 2> p_c_range,
                         std::array<double, 2> nu_range, std::size_t grid) {
  points = sorted(points);
  std::vector<double> Ls;
  for (const auto& pt : points)
    if (std::find(Ls.begin(), Ls.end(), pt.L) == Ls.end()) Ls.push_back(pt.L);
  if (Ls.size() < 3) throw std::invalid_argument("collapse fit needs at least three distinct L");
  if (grid < 2) throw std::invalid_argument("collapse fit grid needs at least two points per axis");
  CollapseFit fit;
  fit.p_c_range = p_c_range;
  fit.nu_range = nu_range;
  fit.grid = grid;
  fit.points = points.size();
  fit.window = {points.front().p, points.front().p};
  for (const auto& pt : points) {
    fit.window[0] = std::min(fit.window[0], pt.p);
    fit.window[1] = std::max(fit.window[1], pt.p);
  }
  if (p_c_range[1] <= fit.window[0] || p_c_range[0] >= fit.window[1])
    throw std::invalid_argument("collapse fit: degenerate window, all points on one side of the p_c range");

  auto inside = [&](std::array<double, 2> v) {
    return v[0] >= p_c_range[0] && v[0] <= p_c_range[1] && v[1] >= nu_range[0] && v[1] <= nu_range[1];
  };
  auto f = [&](std::array<double, 2> v) {
    if (!inside(v)) return std::numeric_limits<double>::infinity();
    return collapse_residual(points, v[0], v[1]);
  };
  const double dp = (p_c_range[1] - p_c_range[0]) / static_cast<double>(grid - 1);
  const double dn = (nu_range[1] - nu_range[0]) / static_cast<double>(grid - 1);
  std::array<double, 2> best{p_c_range[0], nu_range[0]};
  double fbest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid; ++i)
    for (std::size_t j = 0; j < grid; ++j) {
      const std::array<double, 2> v{p_c_range[0] + dp * static_cast<double>(i),
                                    nu_range[0] + dn * static_cast<double>(j)};
      const double r = f(v);
      if (r < fbest) {
        fbest = r;
        best = v;
      }
    }
  if (!std::isfinite(fbest)) throw std::runtime_error("collapse fit: no finite residual on the search grid");
  const auto refined = nelder_mead(f, best, {dp, dn});
  const double fr = f(refined);
  if (fr <= fbest) {
    best = refined;
    fbest = fr;
  }
  fit.p_c = best[0];
  fit.nu = best[1];
  fit.residual = fbest;
  if (fit.p_c <= fit.window[0] || fit.p_c >= fit.window[1])
    throw std::invalid_argument("collapse fit: degenerate window, all points on one side of p_c");
  return fit;
}

}  // namespace xent
