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

#include "lagscope/lag_tte.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lagscope/error.hpp"
#include "lagscope/parallel.hpp"
#include "lagscope/text.hpp"
#include "lagscope/xcorr.hpp"

namespace lagscope {
namespace {

constexpr double kPhiSeriesThreshold = 1e-6;

void check_grids(const EventSeries& x, const EventSeries& y,
                 std::span<const Tick> tau_grid,
                 std::span<const double> a_grid) {
  if (x.span() != y.span()) {
    throw ValidationError("event series spans differ (" +
                          std::to_string(x.span()) + " vs " +
                          std::to_string(y.span()) + ")");
  }
  if (tau_grid.empty()) throw ValidationError("lag grid is empty");
  if (a_grid.empty()) throw ValidationError("scale grid is empty");
  for (Tick t : tau_grid) {
    if (t < 0 || t >= x.span()) {
      throw RangeError("lag " + std::to_string(t) + " outside [0, " +
                       std::to_string(x.span()) + ")");
    }
  }
}

}  // namespace

void TtePriorConfig::validate() const {
  if (!std::isfinite(s0) || !std::isfinite(s1) || !(s0 >= 0.0) ||
      !(s0 < s1)) {
    throw PriorConfigError("signal prior needs 0 <= s0 < s1, got s0=" +
                           format_double(s0) + ", s1=" + format_double(s1));
  }
  if (!std::isfinite(b_x) || !std::isfinite(b_y) || b_x < 0.0 || b_y < 0.0) {
    throw PriorConfigError("backgrounds must be non-negative, got bx=" +
                           format_double(b_x) + ", by=" + format_double(b_y));
  }
}

std::vector<std::string> TtePriorConfig::warnings() const {
  std::vector<std::string> out;
  const double worst = -std::expm1(-(s1 + std::max(b_x, b_y)));
  if (worst > 0.5) {
    out.push_back("per-tick event probability reaches " +
                  format_double(worst) +
                  " at the top of the prior; the model assumes rare events "
                  "per tick");
  }
  return out;
}

double phi(double x, double y) {
  const double d = 0.5 * (y - x);
  if (std::abs(y - x) <= kPhiSeriesThreshold) {
    const double d2 = d * d;
    return std::exp(-0.5 * (x + y)) * (1.0 + d2 / 6.0 + d2 * d2 / 120.0);
  }
  // exp(-lo) * (1 - exp(-w)) / w with w = |y - x|; no cancellation.
  const double lo = std::min(x, y);
  const double w = std::abs(y - x);
  return std::exp(-lo) * (-std::expm1(-w)) / w;
}

GCoefficients g_coefficients(double a, const TtePriorConfig& cfg) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw PriorConfigError("scale factor a must be positive, got " +
                           format_double(a));
  }
  cfg.validate();
  const double ex = std::exp(-cfg.b_x);
  const double ey = std::exp(-cfg.b_y);
  const double rho = 1.0 + a;
  const double phi_x = phi(cfg.s0, cfg.s1);
  const double phi_y = phi(a * cfg.s0, a * cfg.s1);
  const double phi_xy = phi(rho * cfg.s0, rho * cfg.s1);

  GCoefficients g;
  g.g00 = ex * ey * phi_xy;
  g.g01 = ex * phi_x - ex * ey * phi_xy;
  g.g10 = ey * phi_y - ex * ey * phi_xy;
  g.g11 = 1.0 - ex * phi_x - ey * phi_y + ex * ey * phi_xy;
  if (!(g.g00 > 0.0) || !(g.g01 > 0.0) || !(g.g10 > 0.0) || !(g.g11 > 0.0)) {
    throw PriorConfigError(
        "degenerate prior: outcome probabilities g00=" + format_double(g.g00) +
        ", g01=" + format_double(g.g01) + ", g10=" + format_double(g.g10) +
        ", g11=" + format_double(g.g11) + " must all be positive (a=" +
        format_double(a) + ")");
  }
  return g;
}

LogPosteriorCoeffs log_posterior_coeffs(double a, const TtePriorConfig& cfg,
                                        std::int64_t m, std::int64_t n_x,
                                        std::int64_t n_y) {
  return log_posterior_coeffs(g_coefficients(a, cfg), m, n_x, n_y);
}

LogPosteriorCoeffs log_posterior_coeffs(const GCoefficients& g, std::int64_t m,
                                        std::int64_t n_x, std::int64_t n_y) {
  if (m < 1 || n_x < 0 || n_y < 0 || n_x > m || n_y > m) {
    throw ValidationError("inconsistent event counts: M=" + std::to_string(m) +
                          ", N_x=" + std::to_string(n_x) +
                          ", N_y=" + std::to_string(n_y));
  }
  const double l00 = std::log(g.g00);
  const double l01 = std::log(g.g01);
  const double l10 = std::log(g.g10);
  const double l11 = std::log(g.g11);
  LogPosteriorCoeffs c;
  c.c0 = static_cast<double>(m - n_x - n_y) * l00 +
         static_cast<double>(n_y) * l01 + static_cast<double>(n_x) * l10;
  c.c1 = l00 - l01 - l10 + l11;
  return c;
}

PosteriorSurface tte_posterior_surface(const EventSeries& x,
                                       const EventSeries& y,
                                       std::span<const Tick> tau_grid,
                                       std::span<const double> a_grid,
                                       const TtePriorConfig& cfg) {
  check_grids(x, y, tau_grid, a_grid);
  cfg.validate();
  const auto m = static_cast<std::int64_t>(x.span());
  const auto n_x = static_cast<std::int64_t>(x.count());
  const auto n_y = static_cast<std::int64_t>(y.count());

  const CcfVector gamma = ccf_counts(to_indicator(x), to_indicator(y));

  const std::size_t na = a_grid.size();
  std::vector<LogPosteriorCoeffs> coeffs(na);
  for (std::size_t j = 0; j < na; ++j) {
    coeffs[j] = log_posterior_coeffs(a_grid[j], cfg, m, n_x, n_y);
  }

  std::vector<double> log_post(tau_grid.size() * na);
  parallel_for(tau_grid.size(), [&](std::size_t i) {
    const double g = gamma.gamma[static_cast<std::size_t>(tau_grid[i])];
    // Validates gamma against (N_x, N_y, M); throws on impossible counts.
    coincidence_counts(static_cast<std::int64_t>(g), n_x, n_y, m, tau_grid[i]);
    for (std::size_t j = 0; j < na; ++j) {
      log_post[i * na + j] = coeffs[j].c0 + coeffs[j].c1 * g;
    }
  });
  return PosteriorSurface(x.span(), {tau_grid.begin(), tau_grid.end()},
                          {a_grid.begin(), a_grid.end()}, std::move(log_post));
}

PosteriorSurface marginalize_background(const EventSeries& x,
                                        const EventSeries& y,
                                        std::span<const Tick> tau_grid,
                                        std::span<const double> a_grid,
                                        const TtePriorConfig& cfg_base,
                                        std::span<const double> b_grid_x,
                                        std::span<const double> b_grid_y) {
  if (b_grid_x.empty() || b_grid_y.empty()) {
    throw ValidationError("background grids must be non-empty");
  }
  for (double b : b_grid_x) {
    if (!std::isfinite(b) || b < 0.0) {
      throw PriorConfigError("background grid values must be non-negative");
    }
  }
  for (double b : b_grid_y) {
    if (!std::isfinite(b) || b < 0.0) {
      throw PriorConfigError("background grid values must be non-negative");
    }
  }

  std::vector<PosteriorSurface> surfaces;
  surfaces.reserve(b_grid_x.size() * b_grid_y.size());
  for (double bx : b_grid_x) {
    for (double by : b_grid_y) {
      TtePriorConfig cfg = cfg_base;
      cfg.b_x = bx;
      cfg.b_y = by;
      surfaces.push_back(tte_posterior_surface(x, y, tau_grid, a_grid, cfg));
    }
  }

  const std::size_t cells = surfaces.front().log_post().size();
  const double log_count = std::log(static_cast<double>(surfaces.size()));
  std::vector<double> merged(cells);
  parallel_for(cells, [&](std::size_t c) {
    std::vector<double> terms(surfaces.size());
    for (std::size_t k = 0; k < surfaces.size(); ++k) {
      terms[k] = surfaces[k].log_post()[c];
    }
    merged[c] = log_sum_exp(terms) - log_count;
  });
  return PosteriorSurface(x.span(), {tau_grid.begin(), tau_grid.end()},
                          {a_grid.begin(), a_grid.end()}, std::move(merged));
}

}  // namespace lagscope
