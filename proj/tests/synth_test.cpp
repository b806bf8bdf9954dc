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
#include <numeric>

#include <gtest/gtest.h>

#include "lagscope/blocks.hpp"
#include "lagscope/error.hpp"
#include "lagscope/synth.hpp"
#include "lagscope/xcorr.hpp"

namespace lagscope {
namespace {

TEST(Synth, ZeroSignalAndBackgroundGivesNoEvents) {
  GenConfig cfg;
  cfg.m = 500;
  cfg.seed = 3;
  const auto [x, y] = gen_tte(ConstantSignal{0.0}, cfg);
  EXPECT_EQ(x.count(), 0u);
  EXPECT_EQ(y.count(), 0u);
}

TEST(Synth, ConstantRateCountsAreBinomial) {
  GenConfig cfg;
  cfg.m = 1000;
  const double p = -std::expm1(-0.05);
  const double mean = 1000 * p;
  const double sd = std::sqrt(1000 * p * (1 - p));
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    cfg.seed = seed;
    const auto [x, y] = gen_tte(ConstantSignal{0.05}, cfg);
    EXPECT_LT(std::abs(x.count() - mean), 5 * sd);
    EXPECT_LT(std::abs(y.count() - mean), 5 * sd);
    total += static_cast<double>(x.count());
  }
  EXPECT_LT(std::abs(total / 100 - mean), 5 * sd / 10);
}

TEST(Synth, ZeroLagCoincidencesMatchTheirExpectation) {
  GenConfig cfg;
  cfg.m = 400;
  const GaussianPulse pulse{200.0, 40.0, 0.6};
  const auto s = realize(pulse, cfg.m);
  double expected = 0.0;
  for (double v : s) {
    const double p = -std::expm1(-v);
    expected += p * p;
  }
  double sum = 0.0;
  double sum2 = 0.0;
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    cfg.seed = static_cast<std::uint64_t>(t);
    const auto [x, y] = gen_tte(pulse, cfg);
    const double g0 = ccf_counts(to_indicator(x), to_indicator(y)).gamma[0];
    sum += g0;
    sum2 += g0 * g0;
  }
  const double mean = sum / trials;
  const double var = sum2 / trials - mean * mean;
  EXPECT_LT(std::abs(mean - expected), 5 * std::sqrt(var / trials));
}

TEST(Synth, ShiftPlacesThePulseAtTheLag) {
  GenConfig cfg;
  cfg.m = 256;
  cfg.tau_true = 10;
  cfg.a_true = 2.0;
  const auto [x, y] = gen_gauss(GaussianPulse{100.0, 5.0, 1.0}, cfg, 1e-12, 1e-12);
  const auto s = realize(GaussianPulse{100.0, 5.0, 1.0}, cfg.m);
  for (std::size_t m = 0; m < 256; ++m) {
    EXPECT_NEAR(x.values()[m], s[m], 1e-10);
    EXPECT_NEAR(y.values()[m], 2.0 * s[(m + 256 - 10) % 256], 1e-10);
  }
}

TEST(Synth, ShiftWrapsAround) {
  GenConfig cfg;
  cfg.m = 16;
  cfg.tau_true = 5;
  std::vector<double> table(16, 0.0);
  table[14] = 3.0;
  const auto [x, y] = gen_gauss(TableSignal{table}, cfg, 1e-12, 1e-12);
  EXPECT_NEAR(y.values()[3], 3.0, 1e-10);
}

TEST(Synth, GaussianNoiseVariance) {
  GenConfig cfg;
  cfg.m = 10000;
  cfg.seed = 5;
  const auto [x, y] = gen_gauss(ConstantSignal{1.0}, cfg, 0.5, 2.0);
  auto variance = [](std::span<const double> v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0.0;
    for (double e : v) s += (e - mean) * (e - mean);
    return s / static_cast<double>(v.size() - 1);
  };
  EXPECT_NEAR(variance(x.values()), 0.25, 0.025);
  EXPECT_NEAR(variance(y.values()), 4.0, 0.4);
}

TEST(Synth, SameSeedSameOutput) {
  GenConfig cfg;
  cfg.m = 2000;
  cfg.seed = 99;
  cfg.b_x = 0.02;
  cfg.b_y = 0.03;
  EXPECT_EQ(gen_tte(GaussianPulse{1000, 100, 0.2}, cfg),
            gen_tte(GaussianPulse{1000, 100, 0.2}, cfg));
  EXPECT_EQ(gen_gauss(ConstantSignal{0.0}, cfg, 1.0, 1.0),
            gen_gauss(ConstantSignal{0.0}, cfg, 1.0, 1.0));
  cfg.seed = 100;
  const auto other = gen_tte(GaussianPulse{1000, 100, 0.2}, cfg);
  cfg.seed = 99;
  EXPECT_NE(other, gen_tte(GaussianPulse{1000, 100, 0.2}, cfg));
}

TEST(Synth, StreamsAreIndependentPerSeries) {
  GenConfig cfg;
  cfg.m = 3000;
  cfg.seed = 11;
  cfg.b_x = 0.05;
  cfg.b_y = 0.01;
  const auto first = gen_tte(ConstantSignal{0.0}, cfg);
  cfg.b_y = 0.2;
  const auto second = gen_tte(ConstantSignal{0.0}, cfg);
  EXPECT_EQ(first.first, second.first);
  EXPECT_NE(first.second, second.second);
}

TEST(Synth, SubstreamLabelsDiffer) {
  auto a = substream(1, "tte.x");
  auto b = substream(1, "tte.y");
  auto c = substream(1, "tte.x");
  const auto va = a();
  EXPECT_NE(va, b());
  EXPECT_EQ(va, c());
}

TEST(Synth, Validation) {
  GenConfig cfg;
  cfg.m = 0;
  EXPECT_THROW(gen_tte(ConstantSignal{0.0}, cfg), ValidationError);
  cfg.m = 10;
  EXPECT_THROW(gen_tte(ConstantSignal{-1.0}, cfg), ValidationError);
  EXPECT_THROW(gen_gauss(ConstantSignal{0.0}, cfg, 0.0, 1.0), ValidationError);
  EXPECT_THROW(realize(TableSignal{{1.0, 2.0}}, 10), ValidationError);
}

TEST(Synth, BlocksDataFollowsTheModel) {
  const BlockModel model({0.5}, {1.0, 3.0});
  std::vector<WeightFunction> weights{WeightFunction::delta(0.25),
                                      WeightFunction::boxcar(0.25, 0.75),
                                      WeightFunction::delta(0.9)};
  const std::vector<double> sigmas(3, 1e-12);
  const auto data = gen_blocks_data(model, weights, sigmas, 4);
  ASSERT_EQ(data.size(), 3u);
  EXPECT_NEAR(data[0].y, 1.0, 1e-9);
  EXPECT_NEAR(data[1].y, 2.0, 1e-9);
  EXPECT_NEAR(data[2].y, 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(data[1].x, 0.5);
  EXPECT_EQ(data[0].sigma, 1e-12);
}

}  // namespace
}  // namespace lagscope
