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

#include <cmath>
#include <string>

#include "lagscope/error.hpp"
#include "lagscope/series.hpp"
#include "lagscope/text.hpp"

namespace lagscope {
namespace {

double trapezoid_mass(const std::vector<double>& xs,
                      const std::vector<double>& ds) {
  double mass = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    mass += 0.5 * (ds[i] + ds[i - 1]) * (xs[i] - xs[i - 1]);
  }
  return mass;
}

}  // namespace

WeightFunction WeightFunction::delta(double center) {
  if (!std::isfinite(center)) {
    throw ValidationError("delta weight center must be finite");
  }
  return WeightFunction(DeltaWeight{center});
}

WeightFunction WeightFunction::boxcar(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ValidationError("boxcar weight needs finite lo < hi, got [" +
                          format_double(lo) + ", " + format_double(hi) + "]");
  }
  return WeightFunction(BoxcarWeight{lo, hi});
}

WeightFunction WeightFunction::gaussian(double center, double width) {
  if (!std::isfinite(center) || !std::isfinite(width) || !(width > 0.0)) {
    throw ValidationError("gaussian weight needs a positive width, got " +
                          format_double(width));
  }
  return WeightFunction(GaussianWeight{center, width});
}

WeightFunction WeightFunction::tabulated(std::vector<double> abscissae,
                                         std::vector<double> densities) {
  if (abscissae.size() != densities.size() || abscissae.size() < 2) {
    throw ValidationError(
        "tabulated weight needs at least two (x, density) pairs of equal "
        "length");
  }
  for (std::size_t i = 0; i < abscissae.size(); ++i) {
    if (!std::isfinite(abscissae[i]) || !std::isfinite(densities[i])) {
      throw ValidationError("tabulated weight has non-finite entries");
    }
    if (densities[i] < 0.0) {
      throw ValidationError("tabulated weight has a negative density at x=" +
                            format_double(abscissae[i]));
    }
    if (i > 0 && !(abscissae[i] > abscissae[i - 1])) {
      throw ValidationError(
          "tabulated weight abscissae must be strictly increasing");
    }
  }
  const double mass = trapezoid_mass(abscissae, densities);
  if (std::abs(mass - 1.0) > 0.01) {
    throw ValidationError("tabulated weight mass " + format_double(mass) +
                          " is not within 1% of 1");
  }
  if (std::abs(mass - 1.0) > 1e-9) {
    for (double& d : densities) d /= mass;
  }
  return WeightFunction(
      TabulatedWeight{std::move(abscissae), std::move(densities)});
}

double WeightFunction::nominal_position() const {
  return std::visit(
      [](const auto& w) -> double {
        using W = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<W, DeltaWeight>) {
          return w.center;
        } else if constexpr (std::is_same_v<W, BoxcarWeight>) {
          return 0.5 * (w.lo + w.hi);
        } else if constexpr (std::is_same_v<W, GaussianWeight>) {
          return w.center;
        } else {
          // Mean of the piecewise-linear density, segment by segment.
          double first = 0.0;
          double mass = 0.0;
          const auto& xs = w.abscissae;
          const auto& ds = w.densities;
          for (std::size_t i = 1; i < xs.size(); ++i) {
            const double h = xs[i] - xs[i - 1];
            mass += 0.5 * h * (ds[i - 1] + ds[i]);
            first += h / 6.0 *
                     (ds[i - 1] * (2.0 * xs[i - 1] + xs[i]) +
                      ds[i] * (xs[i - 1] + 2.0 * xs[i]));
          }
          return mass > 0.0 ? first / mass : 0.5 * (xs.front() + xs.back());
        }
      },
      kind_);
}

}  // namespace lagscope
