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

#ifndef LAGSCOPE_SERIES_HPP_
#define LAGSCOPE_SERIES_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace lagscope {

// Time is measured in integer clock ticks throughout; lags are tick counts.
using Tick = std::int64_t;

// Event times on [0, span). Ticks are strictly increasing, so at most one
// event per tick.
class EventSeries {
 public:
  // Throws RangeError for ticks outside [0, span) and ValidationError for
  // unsorted or duplicate ticks.
  EventSeries(std::vector<Tick> ticks, Tick span);

  std::span<const Tick> ticks() const noexcept { return ticks_; }
  Tick span() const noexcept { return span_; }
  std::size_t count() const noexcept { return ticks_.size(); }

  friend bool operator==(const EventSeries&, const EventSeries&) = default;

 private:
  std::vector<Tick> ticks_;
  Tick span_;
};

// Dense 0/1 representation of an EventSeries, one entry per tick.
struct IndicatorVector {
  std::vector<std::uint8_t> bits;

  std::size_t size() const noexcept { return bits.size(); }
  std::size_t count() const noexcept;
  std::vector<double> as_real() const;
};

IndicatorVector to_indicator(const EventSeries& events);
EventSeries from_indicator(const IndicatorVector& indicator);

enum class EventFormat { kLines, kCsv };

// Reads one integer tick per line (kLines) or the first column of each row
// (kCsv; a non-numeric first row is treated as a header). The span comes from
// a `# M=<int>` header line unless `span_override` is given; one of the two is
// required.
EventSeries load_events(std::istream& in, EventFormat format,
                        std::optional<Tick> span_override = std::nullopt);
EventSeries load_events_file(const std::filesystem::path& path,
                             EventFormat format,
                             std::optional<Tick> span_override = std::nullopt);

// Writes the `lines` format including the `# M=` header.
void write_events(std::ostream& out, const EventSeries& events);

// Evenly spaced samples with per-sample noise scale.
class SampledSeries {
 public:
  SampledSeries(std::vector<double> values, std::vector<double> sigmas,
                double dt = 1.0);

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> sigmas() const noexcept { return sigmas_; }
  double dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return values_.size(); }

  // True when every sigma equals the first one exactly.
  bool constant_sigma() const noexcept;

  friend bool operator==(const SampledSeries&, const SampledSeries&) = default;

 private:
  std::vector<double> values_;
  std::vector<double> sigmas_;
  double dt_;
};

// CSV with header `t,y,sigma`. The t column must be evenly spaced to 1e-9
// relative; dt is inferred from it.
SampledSeries load_sampled(std::istream& in);
SampledSeries load_sampled_file(const std::filesystem::path& path);
void write_sampled(std::ostream& out, const SampledSeries& series,
                   double t0 = 0.0);

// Weight functions over the independent variable. All have unit mass.
struct DeltaWeight {
  double center;
};

struct BoxcarWeight {
  double lo;
  double hi;
};

struct GaussianWeight {
  double center;
  double width;
};

// Piecewise-linear density through (abscissae[i], densities[i]), zero
// outside [abscissae.front(), abscissae.back()].
struct TabulatedWeight {
  std::vector<double> abscissae;
  std::vector<double> densities;
};

class WeightFunction {
 public:
  using Kind =
      std::variant<DeltaWeight, BoxcarWeight, GaussianWeight, TabulatedWeight>;

  static WeightFunction delta(double center);
  static WeightFunction boxcar(double lo, double hi);
  static WeightFunction gaussian(double center, double width);
  // Densities whose trapezoid mass is within 1% of one are rescaled to unit
  // mass; anything further off is rejected.
  static WeightFunction tabulated(std::vector<double> abscissae,
                                  std::vector<double> densities);

  const Kind& kind() const noexcept { return kind_; }

  // Representative location: the center, midpoint or mean of the weight.
  double nominal_position() const;

 private:
  explicit WeightFunction(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
};

// One measurement y of the signal averaged under `weight`, with Gaussian
// noise of standard deviation sigma.
struct WeightedDatum {
  double x;
  double y;
  double sigma;
  WeightFunction weight;
};

// CSV with header `x,y,sigma,wkind,w1,w2`. wkind is one of delta (w1=center,
// empty means x), boxcar (w1=lo, w2=hi), gaussian (w1=center, w2=width) or
// tabulated (w1=path of a JSON sidecar {"x": [...], "density": [...]},
// resolved relative to `base_dir`).
std::vector<WeightedDatum> load_weighted(std::istream& in,
                                         const std::filesystem::path& base_dir);
std::vector<WeightedDatum> load_weighted_file(const std::filesystem::path& path);

// Tabulated weights cannot be written inline and raise ValidationError.
void write_weighted(std::ostream& out, std::span<const WeightedDatum> data);

}  // namespace lagscope

#endif  // LAGSCOPE_SERIES_HPP_
