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

#ifndef LAGSCOPE_POSTERIOR_HPP_
#define LAGSCOPE_POSTERIOR_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lagscope/series.hpp"

namespace lagscope {

// Numerically stable log(sum(exp(v))), summed in index order. Returns -inf
// for an empty span.
double log_sum_exp(std::span<const double> v);

// n points from lo to hi inclusive. n == 1 yields {lo}.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);
std::vector<double> log_grid(double lo, double hi, std::size_t n);

// 25 log-spaced scale factors on [0.1, 10].
std::vector<double> default_a_grid();

// Every lag in [0, period).
std::vector<Tick> full_tau_grid(Tick period);

// Lags lo..hi (may be negative) reduced mod period, in window order.
std::vector<Tick> tau_window_grid(Tick lo, Tick hi, Tick period);

// Log posterior over a (lag, scale) grid. Lags are residues mod `period`.
// Cells are stored lag-major: log_post(i, j) belongs to tau_grid[i] and
// a_grid[j]. Values carry an arbitrary shared additive constant; log_norm()
// is the log of the grid sum, so exp(log_post - log_norm) sums to one under
// uniform priors on the grid points.
class PosteriorSurface {
 public:
  PosteriorSurface(Tick period, std::vector<Tick> tau_grid,
                   std::vector<double> a_grid, std::vector<double> log_post);

  Tick period() const noexcept { return period_; }
  std::span<const Tick> tau_grid() const noexcept { return tau_grid_; }
  std::span<const double> a_grid() const noexcept { return a_grid_; }
  std::span<const double> log_post() const noexcept { return log_post_; }
  double log_post(std::size_t i, std::size_t j) const {
    return log_post_[i * a_grid_.size() + j];
  }
  double log_norm() const noexcept { return log_norm_; }

  double normalized_log(std::size_t i, std::size_t j) const {
    return log_post(i, j) - log_norm_;
  }

  // Log of the a-marginalized posterior, one entry per tau_grid index.
  std::vector<double> log_tau_marginal() const;
  // Log of the tau-marginalized posterior, one entry per a_grid index.
  std::vector<double> log_a_marginal() const;

 private:
  Tick period_;
  std::vector<Tick> tau_grid_;
  std::vector<double> a_grid_;
  std::vector<double> log_post_;
  double log_norm_;
};

// Inclusive lag window; lo may be negative to look at leads as well as lags.
// The width hi - lo must be below the period.
struct TauWindow {
  Tick lo = 0;
  Tick hi = 0;
};

struct LagEstimates {
  Tick map_tau = 0;
  double mean_tau = 0.0;
  Tick hpd_lo = 0;
  Tick hpd_hi = 0;
  double level = 0.95;
  double hpd_mass = 0.0;  // posterior mass actually enclosed
  double mean_a = 0.0;    // posterior mean of the scale factor (whole grid)
};

// Point estimates and a highest-posterior-density set on the window (default:
// the whole circle [0, period)). The posterior is renormalized over the lags
// that fall in the window; lags are reported as the window's representative
// of their residue class.
//  - map_tau: largest a-marginal, ties to the smallest lag.
//  - mean_tau: linear posterior mean over the window.
//  - hpd: fewest lags (highest first, ties to smaller lag) whose mass reaches
//    `level`, reported as their min and max.
LagEstimates lag_estimates(const PosteriorSurface& surface,
                           std::optional<TauWindow> window = std::nullopt,
                           double level = 0.95);

}  // namespace lagscope

#endif  // LAGSCOPE_POSTERIOR_HPP_
