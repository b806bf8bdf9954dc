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

#ifndef LAGSCOPE_LAG_GAUSS_HPP_
#define LAGSCOPE_LAG_GAUSS_HPP_

#include <span>
#include <variant>
#include <vector>

#include "lagscope/posterior.hpp"
#include "lagscope/series.hpp"

namespace lagscope {

// Lag and scale posterior for evenly sampled series with Gaussian noise:
//   x_m = S_m + noise(sigma_x[m]),   y_{m+tau} = a S_m + noise(sigma_y[m+tau]),
// with a flat improper prior on every S_m, each integrated out exactly.
// Indices wrap modulo M.

// Per-sample exponent -c_m + 2 b_m S - a_m S^2.
struct GaussTerm {
  double a_m = 0.0;
  double b_m = 0.0;
  double c_m = 0.0;
};

GaussTerm gauss_term(double x, double sigma_x, double y, double sigma_y,
                     double a);

// Constant-noise quantities at scale factor a.
struct GaussConstants {
  double a_of_a = 0.0;    // A(a) = (1/sx^2 + a^2/sy^2) / 2
  double k0 = 0.0;        // tau-independent part of sum b_m^2 / A
  double k1 = 0.0;        // a / ((a sx)^2 + sy^2), coefficient of gamma(tau)
  double c0_const = 0.0;  // sum_m c_m
  double log_p0 = 0.0;    // -M log(2 pi) - M log(sx sy)
};

GaussConstants gauss_constants(std::span<const double> x,
                               std::span<const double> y, double sigma_x,
                               double sigma_y, double a);

// Exact marginal log likelihood of (tau, a) using per-sample sigmas:
//   log P0 + sum_m (b_m^2/a_m - c_m + log(pi/a_m)/2).
double gauss_log_posterior_general(const SampledSeries& x,
                                   const SampledSeries& y, Tick tau, double a);

// Same quantity for constant noise scales, one value per lag:
//   log P0 + (M/2) log(pi/A) - C0 + K0 + K1 gamma(tau),
// with gamma from the FFT cross-correlation.
std::vector<double> gauss_log_posterior_constant(std::span<const double> x,
                                                 std::span<const double> y,
                                                 double sigma_x, double sigma_y,
                                                 std::span<const Tick> tau_grid,
                                                 double a);

// Use the sigmas stored in the series.
struct PerSampleNoise {};

// Override with one noise scale per series.
struct ConstantNoise {
  double sigma_x = 1.0;
  double sigma_y = 1.0;
};

using NoiseSpec = std::variant<PerSampleNoise, ConstantNoise>;

enum class GaussPath {
  kAuto,      // constant path whenever each series has a single sigma
  kGeneral,   // always the per-sample path (constant noise is expanded)
  kConstant,  // require constant noise
};

PosteriorSurface gauss_posterior_surface(const SampledSeries& x,
                                         const SampledSeries& y,
                                         std::span<const Tick> tau_grid,
                                         std::span<const double> a_grid,
                                         const NoiseSpec& noise = PerSampleNoise{},
                                         GaussPath path = GaussPath::kAuto);

}  // namespace lagscope

#endif  // LAGSCOPE_LAG_GAUSS_HPP_
