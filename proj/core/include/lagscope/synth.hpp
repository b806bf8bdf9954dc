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

#ifndef LAGSCOPE_SYNTH_HPP_
#define LAGSCOPE_SYNTH_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lagscope/blocks.hpp"
#include "lagscope/series.hpp"

namespace lagscope {

// Independent generator for (seed, label). Different labels give unrelated
// streams, so drawing more from one never shifts another.
std::mt19937_64 substream(std::uint64_t seed, std::string_view label);

struct ConstantSignal {
  double level = 0.0;
};

// amplitude * exp(-((m - center) / width)^2 / 2), not wrapped.
struct GaussianPulse {
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;
};

// Explicit per-tick values; must match the span.
struct TableSignal {
  std::vector<double> values;
};

using SignalSpec = std::variant<ConstantSignal, GaussianPulse, TableSignal>;

// Latent signal S_m for m = 0..span-1.
std::vector<double> realize(const SignalSpec& signal, Tick span);

struct GenConfig {
  Tick m = 1024;
  Tick tau_true = 0;
  double a_true = 1.0;
  double b_x = 0.0;
  double b_y = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// x_m ~ Bernoulli(1 - exp(-(S_m + b_x))),
// y_m ~ Bernoulli(1 - exp(-(a S_{m - tau} + b_y))), shift circular.
// Requires non-negative finite rates.
std::pair<EventSeries, EventSeries> gen_tte(const SignalSpec& signal,
                                            const GenConfig& cfg);

// x_m = S_m + N(0, sigma_x^2), y_m = a S_{m - tau} + N(0, sigma_y^2),
// shift circular; backgrounds are ignored.
std::pair<SampledSeries, SampledSeries> gen_gauss(const SignalSpec& signal,
                                                  const GenConfig& cfg,
                                                  double sigma_x,
                                                  double sigma_y);

// y_n = predict(model)_n + N(0, sigma_n^2), x_n = the weight's nominal
// position.
std::vector<WeightedDatum> gen_blocks_data(const BlockModel& model,
                                           std::span<const WeightFunction> weights,
                                           std::span<const double> sigmas,
                                           std::uint64_t seed);

}  // namespace lagscope

#endif  // LAGSCOPE_SYNTH_HPP_
