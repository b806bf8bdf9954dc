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

#include "lagscope/lag_gauss.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "lagscope/error.hpp"
#include "lagscope/parallel.hpp"
#include "lagscope/text.hpp"
#include "lagscope/xcorr.hpp"

namespace lagscope {
namespace {

void check_sigma(double s, const char* name) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw ValidationError(std::string(name) + " must be positive, got " +
                          format_double(s));
  }
}

void check_scale(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw ValidationError("scale factor a must be positive, got " +
                          format_double(a));
  }
}

void check_tau(Tick tau, std::size_t m) {
  if (tau < 0 || static_cast<std::size_t>(tau) >= m) {
    throw RangeError("lag " + std::to_string(tau) + " outside [0, " +
                     std::to_string(m) + ")");
  }
}

}  // namespace

GaussTerm gauss_term(double x, double sigma_x, double y, double sigma_y,
                     double a) {
  const double vx = sigma_x * sigma_x;
  const double vy = sigma_y * sigma_y;
  GaussTerm t;
  t.c_m = 0.5 * (x * x / vx + y * y / vy);
  t.b_m = 0.5 * (x / vx + a * y / vy);
  t.a_m = 0.5 * (1.0 / vx + a * a / vy);
  return t;
}

GaussConstants gauss_constants(std::span<const double> x,
                               std::span<const double> y, double sigma_x,
                               double sigma_y, double a) {
  check_sigma(sigma_x, "sigma_x");
  check_sigma(sigma_y, "sigma_y");
  check_scale(a);
  if (x.size() != y.size() || x.empty()) {
    throw ValidationError("series must be non-empty and of equal length");
  }
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) {
    sxx += x[m] * x[m];
    syy += y[m] * y[m];
  }
  const double vx = sigma_x * sigma_x;
  const double vy = sigma_y * sigma_y;
  const auto count = static_cast<double>(x.size());

  GaussConstants k;
  k.a_of_a = 0.5 * (1.0 / vx + a * a / vy);
  k.c0_const = 0.5 * (sxx / vx + syy / vy);
  k.k0 = sxx / (4.0 * k.a_of_a * vx * vx) + a * a * syy / (4.0 * k.a_of_a * vy * vy);
  k.k1 = a / (a * a * vx + vy);
  k.log_p0 = -count * std::log(2.0 * std::numbers::pi) -
             count * (std::log(sigma_x) + std::log(sigma_y));
  return k;
}

double gauss_log_posterior_general(const SampledSeries& x,
                                   const SampledSeries& y, Tick tau, double a) {
  check_scale(a);
  const std::size_t m = x.size();
  if (y.size() != m) {
    throw ValidationError("series differ in length (" + std::to_string(m) +
                          " vs " + std::to_string(y.size()) + ")");
  }
  check_tau(tau, m);
  const auto xs = x.values();
  const auto sx = x.sigmas();
  const auto ys = y.values();
  const auto sy = y.sigmas();

  double log_p0 = -static_cast<double>(m) * std::log(2.0 * std::numbers::pi);
  double quad = 0.0;
  double vol = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t k = (i + static_cast<std::size_t>(tau)) % m;
    log_p0 -= std::log(sx[i]) + std::log(sy[i]);
    const GaussTerm t = gauss_term(xs[i], sx[i], ys[k], sy[k], a);
    quad += t.b_m * t.b_m / t.a_m - t.c_m;
    vol += 0.5 * std::log(std::numbers::pi / t.a_m);
  }
  return log_p0 + quad + vol;
}

std::vector<double> gauss_log_posterior_constant(std::span<const double> x,
                                                 std::span<const double> y,
                                                 double sigma_x, double sigma_y,
                                                 std::span<const Tick> tau_grid,
                                                 double a) {
  const GaussConstants k = gauss_constants(x, y, sigma_x, sigma_y, a);
  for (Tick t : tau_grid) check_tau(t, x.size());
  const CcfVector gamma = ccf_fft(x, y);
  const double base = k.log_p0 +
                      0.5 * static_cast<double>(x.size()) *
                          std::log(std::numbers::pi / k.a_of_a) -
                      k.c0_const + k.k0;
  std::vector<double> out(tau_grid.size());
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    out[i] = base + k.k1 * gamma.gamma[static_cast<std::size_t>(tau_grid[i])];
  }
  return out;
}

PosteriorSurface gauss_posterior_surface(const SampledSeries& x,
                                         const SampledSeries& y,
                                         std::span<const Tick> tau_grid,
                                         std::span<const double> a_grid,
                                         const NoiseSpec& noise,
                                         GaussPath path) {
  const std::size_t m = x.size();
  if (y.size() != m) {
    throw ValidationError("series differ in length (" + std::to_string(m) +
                          " vs " + std::to_string(y.size()) + ")");
  }
  if (tau_grid.empty()) throw ValidationError("lag grid is empty");
  if (a_grid.empty()) throw ValidationError("scale grid is empty");
  for (Tick t : tau_grid) check_tau(t, m);
  for (double a : a_grid) check_scale(a);

  // Resolve the noise model into either constant scales or explicit series.
  const ConstantNoise* constant = std::get_if<ConstantNoise>(&noise);
  std::optional<ConstantNoise> resolved;
  if (constant != nullptr) {
    check_sigma(constant->sigma_x, "sigma_x");
    check_sigma(constant->sigma_y, "sigma_y");
    resolved = *constant;
  } else if (x.constant_sigma() && y.constant_sigma()) {
    resolved = ConstantNoise{x.sigmas().front(), y.sigmas().front()};
  }
  if (path == GaussPath::kConstant && !resolved) {
    throw ValidationError(
        "constant-noise path requested but sigmas vary across samples");
  }
  const bool use_constant = resolved && path != GaussPath::kGeneral;

  const std::size_t na = a_grid.size();
  std::vector<double> log_post(tau_grid.size() * na);
  if (use_constant) {
    parallel_for(na, [&](std::size_t j) {
      const auto col = gauss_log_posterior_constant(
          x.values(), y.values(), resolved->sigma_x, resolved->sigma_y,
          tau_grid, a_grid[j]);
      for (std::size_t i = 0; i < col.size(); ++i) log_post[i * na + j] = col[i];
    });
  } else {
    const SampledSeries xs =
        resolved ? SampledSeries({x.values().begin(), x.values().end()},
                                 std::vector<double>(m, resolved->sigma_x),
                                 x.dt())
                 : x;
    const SampledSeries ys =
        resolved ? SampledSeries({y.values().begin(), y.values().end()},
                                 std::vector<double>(m, resolved->sigma_y),
                                 y.dt())
                 : y;
    parallel_for(tau_grid.size() * na, [&](std::size_t c) {
      log_post[c] =
          gauss_log_posterior_general(xs, ys, tau_grid[c / na], a_grid[c % na]);
    });
  }
  return PosteriorSurface(static_cast<Tick>(m),
                          {tau_grid.begin(), tau_grid.end()},
                          {a_grid.begin(), a_grid.end()}, std::move(log_post));
}

}  // namespace lagscope
