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

#include "lagscope/synth.hpp"

#include <cmath>
#include <string>

#include "lagscope/error.hpp"
#include "lagscope/text.hpp"

namespace lagscope {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Uniform on [0, 1) with 53 random bits.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t shifted(std::size_t m, Tick tau, Tick span) {
  const Tick k = (static_cast<Tick>(m) - tau) % span;
  return static_cast<std::size_t>(k < 0 ? k + span : k);
}

}  // namespace

std::mt19937_64 substream(std::uint64_t seed, std::string_view label) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ fnv1a(label)));
}

std::vector<double> realize(const SignalSpec& signal, Tick span) {
  if (span < 1) throw ValidationError("span must be at least 1");
  const auto n = static_cast<std::size_t>(span);
  return std::visit(
      [&](const auto& s) -> std::vector<double> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ConstantSignal>) {
          return std::vector<double>(n, s.level);
        } else if constexpr (std::is_same_v<S, GaussianPulse>) {
          if (!(s.width > 0.0)) {
            throw ValidationError("pulse width must be positive");
          }
          std::vector<double> out(n);
          for (std::size_t m = 0; m < n; ++m) {
            const double z = (static_cast<double>(m) - s.center) / s.width;
            out[m] = s.amplitude * std::exp(-0.5 * z * z);
          }
          return out;
        } else {
          if (s.values.size() != n) {
            throw ValidationError("signal table has " +
                                  std::to_string(s.values.size()) +
                                  " entries, span is " + std::to_string(n));
          }
          return s.values;
        }
      },
      signal);
}

void GenConfig::validate() const {
  if (m < 1) throw ValidationError("span m must be at least 1");
  if (tau_true < 0 || tau_true >= m) {
    throw ValidationError("true lag must lie in [0, m)");
  }
  if (!(a_true > 0.0) || !std::isfinite(a_true)) {
    throw ValidationError("true scale factor must be positive");
  }
  if (!std::isfinite(b_x) || !std::isfinite(b_y)) {
    throw ValidationError("backgrounds must be finite");
  }
}

std::pair<EventSeries, EventSeries> gen_tte(const SignalSpec& signal,
                                            const GenConfig& cfg) {
  cfg.validate();
  const auto s = realize(signal, cfg.m);
  auto rng_x = substream(cfg.seed, "tte.x");
  auto rng_y = substream(cfg.seed, "tte.y");
  std::vector<Tick> xs;
  std::vector<Tick> ys;
  for (std::size_t m = 0; m < s.size(); ++m) {
    const double rate_x = s[m] + cfg.b_x;
    const double rate_y = cfg.a_true * s[shifted(m, cfg.tau_true, cfg.m)] + cfg.b_y;
    if (!(rate_x >= 0.0) || !(rate_y >= 0.0) || !std::isfinite(rate_x) ||
        !std::isfinite(rate_y)) {
      throw ValidationError("event rate at tick " + std::to_string(m) +
                            " is negative or not finite");
    }
    // Always draw both so each stream advances once per tick.
    const double ux = uniform01(rng_x);
    const double uy = uniform01(rng_y);
    if (ux < -std::expm1(-rate_x)) xs.push_back(static_cast<Tick>(m));
    if (uy < -std::expm1(-rate_y)) ys.push_back(static_cast<Tick>(m));
  }
  return {EventSeries(std::move(xs), cfg.m), EventSeries(std::move(ys), cfg.m)};
}

std::pair<SampledSeries, SampledSeries> gen_gauss(const SignalSpec& signal,
                                                  const GenConfig& cfg,
                                                  double sigma_x,
                                                  double sigma_y) {
  cfg.validate();
  if (!(sigma_x > 0.0) || !(sigma_y > 0.0)) {
    throw ValidationError("noise scales must be positive");
  }
  const auto s = realize(signal, cfg.m);
  auto rng_x = substream(cfg.seed, "gauss.x");
  auto rng_y = substream(cfg.seed, "gauss.y");
  std::normal_distribution<double> noise_x(0.0, sigma_x);
  std::normal_distribution<double> noise_y(0.0, sigma_y);
  std::vector<double> xv(s.size());
  std::vector<double> yv(s.size());
  for (std::size_t m = 0; m < s.size(); ++m) {
    xv[m] = s[m] + noise_x(rng_x);
    yv[m] = cfg.a_true * s[shifted(m, cfg.tau_true, cfg.m)] + noise_y(rng_y);
  }
  return {SampledSeries(std::move(xv), std::vector<double>(s.size(), sigma_x)),
          SampledSeries(std::move(yv), std::vector<double>(s.size(), sigma_y))};
}

std::vector<WeightedDatum> gen_blocks_data(const BlockModel& model,
                                           std::span<const WeightFunction> weights,
                                           std::span<const double> sigmas,
                                           std::uint64_t seed) {
  if (weights.size() != sigmas.size()) {
    throw ValidationError("weights and sigmas differ in length");
  }
  std::vector<WeightedDatum> data;
  data.reserve(weights.size());
  for (std::size_t n = 0; n < weights.size(); ++n) {
    if (!(sigmas[n] > 0.0)) {
      throw ValidationError("sigma " + std::to_string(n) + " must be positive");
    }
    data.push_back({weights[n].nominal_position(), 0.0, sigmas[n], weights[n]});
  }
  const auto truth = predict(model, data);
  auto rng = substream(seed, "blocks.y");
  std::normal_distribution<double> unit(0.0, 1.0);
  for (std::size_t n = 0; n < data.size(); ++n) {
    data[n].y = truth[n] + sigmas[n] * unit(rng);
  }
  return data;
}

}  // namespace lagscope
