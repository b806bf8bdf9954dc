// Copyright 2026 The lagscope Authors
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

#include "lagscope/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "lagscope/error.hpp"
#include "lagscope/text.hpp"

namespace lagscope {

double log_sum_exp(std::span<const double> v) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double x : v) peak = std::max(peak, x);
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - peak);
  return peak + std::log(sum);
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n == 0) throw ValidationError("grid must have at least one point");
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw ValidationError("grid endpoints must be finite");
  }
  if (n == 1) return {lo};
  std::vector<double> g(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > 0.0)) {
    throw ValidationError("log-spaced grid needs positive endpoints");
  }
  auto g = linear_grid(std::log(lo), std::log(hi), n);
  for (double& v : g) v = std::exp(v);
  g.front() = lo;
  if (n > 1) g.back() = hi;
  return g;
}

std::vector<double> default_a_grid() { return log_grid(0.1, 10.0, 25); }

std::vector<Tick> full_tau_grid(Tick period) {
  if (period < 1) throw ValidationError("period must be at least 1");
  std::vector<Tick> g(static_cast<std::size_t>(period));
  std::iota(g.begin(), g.end(), Tick{0});
  return g;
}

std::vector<Tick> tau_window_grid(Tick lo, Tick hi, Tick period) {
  if (period < 1) throw ValidationError("period must be at least 1");
  if (hi < lo) {
    throw ValidationError("lag window is empty: " + std::to_string(lo) + ":" +
                          std::to_string(hi));
  }
  if (hi - lo >= period) {
    throw ValidationError("lag window " + std::to_string(lo) + ":" +
                          std::to_string(hi) + " is wider than the period " +
                          std::to_string(period));
  }
  std::vector<Tick> g;
  g.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (Tick t = lo; t <= hi; ++t) g.push_back(((t % period) + period) % period);
  return g;
}

PosteriorSurface::PosteriorSurface(Tick period, std::vector<Tick> tau_grid,
                                   std::vector<double> a_grid,
                                   std::vector<double> log_post)
    : period_(period),
      tau_grid_(std::move(tau_grid)),
      a_grid_(std::move(a_grid)),
      log_post_(std::move(log_post)) {
  if (period_ < 1) throw ValidationError("period must be at least 1");
  if (tau_grid_.empty()) throw ValidationError("lag grid is empty");
  if (a_grid_.empty()) throw ValidationError("scale grid is empty");
  if (log_post_.size() != tau_grid_.size() * a_grid_.size()) {
    throw ValidationError("surface has " + std::to_string(log_post_.size()) +
                          " cells, expected " +
                          std::to_string(tau_grid_.size() * a_grid_.size()));
  }
  std::set<Tick> seen;
  for (Tick t : tau_grid_) {
    if (t < 0 || t >= period_) {
      throw RangeError("lag " + std::to_string(t) + " outside [0, " +
                       std::to_string(period_) + ")");
    }
    if (!seen.insert(t).second) {
      throw ValidationError("lag " + std::to_string(t) +
                            " appears twice in the grid");
    }
  }
  for (double a : a_grid_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw ValidationError("scale factors must be positive, got " +
                            format_double(a));
    }
  }
  for (double v : log_post_) {
    if (std::isnan(v)) throw ConsistencyError("log posterior contains NaN");
  }
  log_norm_ = log_sum_exp(log_post_);
  if (!std::isfinite(log_norm_)) {
    throw ConsistencyError("log posterior cannot be normalized (log sum " +
                           format_double(log_norm_) + ")");
  }
}

std::vector<double> PosteriorSurface::log_tau_marginal() const {
  const std::size_t na = a_grid_.size();
  std::vector<double> out(tau_grid_.size());
  std::vector<double> row(na);
  for (std::size_t i = 0; i < tau_grid_.size(); ++i) {
    for (std::size_t j = 0; j < na; ++j) row[j] = normalized_log(i, j);
    out[i] = log_sum_exp(row);
  }
  return out;
}

std::vector<double> PosteriorSurface::log_a_marginal() const {
  const std::size_t nt = tau_grid_.size();
  std::vector<double> out(a_grid_.size());
  std::vector<double> col(nt);
  for (std::size_t j = 0; j < a_grid_.size(); ++j) {
    for (std::size_t i = 0; i < nt; ++i) col[i] = normalized_log(i, j);
    out[j] = log_sum_exp(col);
  }
  return out;
}

LagEstimates lag_estimates(const PosteriorSurface& surface,
                           std::optional<TauWindow> window, double level) {
  if (!(level > 0.0 && level <= 1.0)) {
    throw ValidationError("credible level must lie in (0, 1], got " +
                          format_double(level));
  }
  const Tick period = surface.period();
  const TauWindow w = window.value_or(TauWindow{0, period - 1});
  if (w.hi < w.lo) throw ValidationError("lag window is empty");
  if (w.hi - w.lo >= period) {
    throw ValidationError("lag window is wider than the period");
  }

  struct Cell {
    Tick lag;
    double log_p;
  };
  const auto marginal = surface.log_tau_marginal();
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < marginal.size(); ++i) {
    const Tick tau = surface.tau_grid()[i];
    const Tick rep = w.lo + (((tau - w.lo) % period) + period) % period;
    if (rep <= w.hi) cells.push_back({rep, marginal[i]});
  }
  if (cells.empty()) {
    throw ValidationError("no grid lag falls inside the window " +
                          std::to_string(w.lo) + ":" + std::to_string(w.hi));
  }
  std::sort(cells.begin(), cells.end(),
            [](const Cell& a, const Cell& b) { return a.lag < b.lag; });

  std::vector<double> logs(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) logs[k] = cells[k].log_p;
  const double total = log_sum_exp(logs);
  if (!std::isfinite(total)) {
    throw ConsistencyError("window holds no posterior mass");
  }
  std::vector<double> prob(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    prob[k] = std::exp(cells[k].log_p - total);
  }

  LagEstimates est;
  est.level = level;
  std::size_t best = 0;
  for (std::size_t k = 1; k < cells.size(); ++k) {
    if (cells[k].log_p > cells[best].log_p) best = k;
  }
  est.map_tau = cells[best].lag;

  double mean = 0.0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    mean += static_cast<double>(cells[k].lag) * prob[k];
  }
  est.mean_tau = mean;

  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cells[a].log_p > cells[b].log_p;
  });
  double mass = 0.0;
  Tick lo = cells[order.front()].lag;
  Tick hi = lo;
  for (std::size_t k : order) {
    mass += prob[k];
    lo = std::min(lo, cells[k].lag);
    hi = std::max(hi, cells[k].lag);
    if (mass >= level - 1e-12) break;
  }
  est.hpd_lo = lo;
  est.hpd_hi = hi;
  est.hpd_mass = std::min(mass, 1.0);

  const auto a_marg = surface.log_a_marginal();
  double mean_a = 0.0;
  for (std::size_t j = 0; j < a_marg.size(); ++j) {
    mean_a += surface.a_grid()[j] * std::exp(a_marg[j]);
  }
  est.mean_a = mean_a;
  return est;
}

}  // namespace lagscope
