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
#include <limits>

#include <gtest/gtest.h>

#include "lagscope/error.hpp"
#include "lagscope/posterior.hpp"

namespace lagscope {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

PosteriorSurface spike_at(Tick period, Tick tau) {
  std::vector<double> log_post(static_cast<std::size_t>(period), kNegInf);
  log_post[static_cast<std::size_t>(tau)] = 0.0;
  return PosteriorSurface(period, full_tau_grid(period), {1.0}, log_post);
}

TEST(LogSumExp, StableForLargeMagnitudes) {
  const std::vector<double> v{1000.0, 1000.0};
  EXPECT_NEAR(log_sum_exp(v), 1000.0 + std::log(2.0), 1e-12);
  const std::vector<double> w{-1e4, -1e4 + std::log(3.0)};
  EXPECT_NEAR(log_sum_exp(w), -1e4 + std::log(4.0), 1e-9);
  EXPECT_EQ(log_sum_exp(std::vector<double>{5.0}), 5.0);
}

TEST(Grids, EndpointsAndSpacing) {
  const auto lin = linear_grid(0.0, 1.0, 5);
  EXPECT_EQ(lin.size(), 5u);
  EXPECT_DOUBLE_EQ(lin[2], 0.5);
  const auto lg = default_a_grid();
  ASSERT_EQ(lg.size(), 25u);
  EXPECT_EQ(lg.front(), 0.1);
  EXPECT_EQ(lg.back(), 10.0);
  EXPECT_NEAR(lg[12], 1.0, 1e-12);
  EXPECT_THROW(log_grid(0.0, 1.0, 3), ValidationError);
  EXPECT_THROW(linear_grid(0.0, 1.0, 0), ValidationError);
}

TEST(Grids, WindowGridWrapsNegativeLags) {
  EXPECT_EQ(tau_window_grid(-2, 1, 10), (std::vector<Tick>{8, 9, 0, 1}));
  EXPECT_THROW(tau_window_grid(0, 10, 10), ValidationError);
}

TEST(PosteriorSurface, NormalizesToOne) {
  std::vector<double> log_post;
  for (int i = 0; i < 12; ++i) log_post.push_back(-500.0 + 3.0 * i);
  const PosteriorSurface s(4, {0, 1, 2, 3}, {0.5, 1.0, 2.0}, log_post);
  double total = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 3; ++j) total += std::exp(s.normalized_log(i, j));
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(PosteriorSurface, RejectsBadShapes) {
  EXPECT_THROW(PosteriorSurface(4, {}, {1.0}, {}), ValidationError);
  EXPECT_THROW(PosteriorSurface(4, {0}, {}, {}), ValidationError);
  EXPECT_THROW(PosteriorSurface(4, {0, 1}, {1.0}, {0.0}), ValidationError);
  EXPECT_THROW(PosteriorSurface(4, {0, 0}, {1.0}, {0.0, 0.0}), ValidationError);
  EXPECT_THROW(PosteriorSurface(4, {4}, {1.0}, {0.0}), RangeError);
  EXPECT_THROW(PosteriorSurface(4, {0}, {-1.0}, {0.0}), ValidationError);
}

TEST(LagEstimates, SpikeGivesDegenerateInterval) {
  const auto est = lag_estimates(spike_at(64, 17));
  EXPECT_EQ(est.map_tau, 17);
  EXPECT_DOUBLE_EQ(est.mean_tau, 17.0);
  EXPECT_EQ(est.hpd_lo, 17);
  EXPECT_EQ(est.hpd_hi, 17);
}

TEST(LagEstimates, FlatWindowMeanIsTheMidpoint) {
  const PosteriorSurface flat(32, full_tau_grid(32), {1.0},
                              std::vector<double>(32, -3.0));
  const auto est = lag_estimates(flat, TauWindow{0, 9});
  EXPECT_NEAR(est.mean_tau, 4.5, 1e-12);
  EXPECT_EQ(est.map_tau, 0);  // ties to the smallest lag
}

TEST(LagEstimates, NegativeWindowUsesSignedRepresentatives) {
  const auto est = lag_estimates(spike_at(64, 62), TauWindow{-5, 5});
  EXPECT_EQ(est.map_tau, -2);
  EXPECT_DOUBLE_EQ(est.mean_tau, -2.0);
}

TEST(LagEstimates, HpdGrowsWithLevel) {
  // Triangular posterior over 0..10 peaked at 5.
  std::vector<double> log_post;
  for (int t = 0; t < 11; ++t) log_post.push_back(std::log(6.0 - std::abs(t - 5)));
  const PosteriorSurface s(11, full_tau_grid(11), {1.0}, log_post);
  const auto narrow = lag_estimates(s, std::nullopt, 0.15);
  const auto tied = lag_estimates(s, std::nullopt, 0.2);
  const auto wide = lag_estimates(s, std::nullopt, 0.95);
  EXPECT_EQ(narrow.hpd_lo, 5);
  EXPECT_EQ(narrow.hpd_hi, 5);
  // 6/36 < 0.2, so one neighbour joins; the tie goes to the smaller lag.
  EXPECT_EQ(tied.hpd_lo, 4);
  EXPECT_EQ(tied.hpd_hi, 5);
  // 34/36 < 0.95 without an endpoint; again the smaller one wins.
  EXPECT_EQ(wide.hpd_lo, 0);
  EXPECT_EQ(wide.hpd_hi, 9);
  EXPECT_GE(wide.hpd_mass, 0.95 - 1e-12);
}

TEST(LagEstimates, EmptyWindowIsRejected) {
  const PosteriorSurface s(10, {0, 1, 2}, {1.0}, {0.0, 0.0, 0.0});
  EXPECT_THROW(lag_estimates(s, TauWindow{5, 8}), ValidationError);
  EXPECT_THROW(lag_estimates(s, TauWindow{3, 1}), ValidationError);
  EXPECT_THROW(lag_estimates(s, std::nullopt, 0.0), ValidationError);
}

TEST(LagEstimates, MarginalizesOverScale) {
  // Lag 1 wins only after summing over both scale values.
  const PosteriorSurface s(3, {0, 1, 2}, {1.0, 2.0},
                           {std::log(0.3), std::log(0.0001), std::log(0.2),
                            std::log(0.2), std::log(0.1), std::log(0.0999)});
  EXPECT_EQ(lag_estimates(s).map_tau, 1);
}

}  // namespace
}  // namespace lagscope
