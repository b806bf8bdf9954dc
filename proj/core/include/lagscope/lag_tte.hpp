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

#ifndef LAGSCOPE_LAG_TTE_HPP_
#define LAGSCOPE_LAG_TTE_HPP_

#include <span>
#include <string>
#include <vector>

#include "lagscope/posterior.hpp"
#include "lagscope/series.hpp"

namespace lagscope {

// Lag and scale posterior for time-tagged events.
//
// Each tick m carries at most one event per series, with
//   P(no x event) = exp(-(S_m + b_x)),   P(no y event at m+tau) = exp(-(a S_m + b_y)),
// and every latent rate S_m is integrated out independently under a uniform
// prior on [s0, s1]. The four possible joint outcomes of a tick then have
// fixed probabilities g00..g11 (first index x, second y), and the posterior
// depends on the data only through the coincidence count gamma(tau):
//   log L(tau, a) = c0(a) + c1(a) * gamma(tau).

// Uniform prior bounds on the per-tick signal rate and known per-tick
// background rates.
struct TtePriorConfig {
  double s0 = 0.0;
  double s1 = 1.0;
  double b_x = 0.0;
  double b_y = 0.0;

  // Throws PriorConfigError unless 0 <= s0 < s1 and both backgrounds are
  // non-negative and finite.
  void validate() const;

  // Human-readable notes for configurations where a tick is more likely than
  // not to hold an event, which strains the one-event-per-tick model.
  std::vector<std::string> warnings() const;
};

struct GCoefficients {
  double g00 = 0.0;
  double g01 = 0.0;
  double g10 = 0.0;
  double g11 = 0.0;

  double sum() const noexcept { return g00 + g01 + g10 + g11; }
};

// Mean of exp(-s) for s uniform between x and y:
//   (exp(-x) - exp(-y)) / (y - x),  exp(-x) when x == y.
// Near-equal arguments (|x - y| <= 1e-6) use the symmetric series
// exp(-(x+y)/2) * sinh(d)/d with d = (y - x)/2.
double phi(double x, double y);

// Throws PriorConfigError if a <= 0, the prior is invalid, or any
// coefficient is not strictly positive (e.g. underflow).
GCoefficients g_coefficients(double a, const TtePriorConfig& cfg);

struct LogPosteriorCoeffs {
  double c0 = 0.0;
  double c1 = 0.0;
};

// c0 = (m - n_x - n_y) log g00 + n_y log g01 + n_x log g10
// c1 = log g00 - log g01 - log g10 + log g11
LogPosteriorCoeffs log_posterior_coeffs(const GCoefficients& g, std::int64_t m,
                                        std::int64_t n_x, std::int64_t n_y);
LogPosteriorCoeffs log_posterior_coeffs(double a, const TtePriorConfig& cfg,
                                        std::int64_t m, std::int64_t n_x,
                                        std::int64_t n_y);

// log_post(i, j) = c0(a_j) + c1(a_j) * gamma(tau_i), the exact log of the
// product of per-tick marginal likelihoods (circular alignment).
PosteriorSurface tte_posterior_surface(const EventSeries& x,
                                       const EventSeries& y,
                                       std::span<const Tick> tau_grid,
                                       std::span<const double> a_grid,
                                       const TtePriorConfig& cfg);

// Averages the likelihood surface over every (b_x, b_y) pair of the two
// background grids with equal weight.
PosteriorSurface marginalize_background(const EventSeries& x,
                                        const EventSeries& y,
                                        std::span<const Tick> tau_grid,
                                        std::span<const double> a_grid,
                                        const TtePriorConfig& cfg_base,
                                        std::span<const double> b_grid_x,
                                        std::span<const double> b_grid_y);

}  // namespace lagscope

#endif  // LAGSCOPE_LAG_TTE_HPP_
