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

#ifndef LAGSCOPE_BLOCKS_HPP_
#define LAGSCOPE_BLOCKS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lagscope/series.hpp"

namespace lagscope {

// Piecewise-constant signal. Interior changepoints split the real line into
// n_blocks() = changepoints.size() + 1 contiguous blocks; the outer blocks
// extend to -inf and +inf. Block j covers (lo_j, hi_j], so a point exactly on
// a changepoint belongs to the lower block.
class BlockModel {
 public:
  // Throws ValidationError unless changepoints are finite and non-decreasing
  // and there is exactly one height per block.
  BlockModel(std::vector<double> changepoints, std::vector<double> heights);

  std::span<const double> changepoints() const noexcept { return changepoints_; }
  std::span<const double> heights() const noexcept { return heights_; }
  std::size_t n_blocks() const noexcept { return heights_.size(); }
  std::pair<double, double> block_edges(std::size_t j) const;

  // Height at x under the (lo, hi] convention.
  double value_at(double x) const;

 private:
  std::vector<double> changepoints_;
  std::vector<double> heights_;
};

// Mass of w on (lo, hi]: the integral of w over the block.
double weight_block_product(const WeightFunction& w, double lo, double hi);

// Linear-model products after dividing every row by its sigma.
struct DesignProducts {
  Eigen::MatrixXd g;     // N x N_b, G_j(n) / sigma_n
  Eigen::MatrixXd gram;  // g^T g
  Eigen::VectorXd proj;  // g^T (y / sigma)
  double sum_y2 = 0.0;   // sum (y_n / sigma_n)^2
  double log_q = 0.0;    // Gaussian normalizer: -sum log(sigma_n sqrt(2 pi))

  static DesignProducts build(std::span<const WeightedDatum> data,
                              std::span<const double> changepoints);
};

std::vector<double> predict(const BlockModel& model,
                            std::span<const WeightedDatum> data);

struct HeightFit {
  std::vector<double> heights;
  // log of the likelihood integrated over all heights under a flat prior:
  //   -H_min/2 - log det(gram)/2 + (N_b/2) log(2 pi) + log_q
  double log_marginal = 0.0;
  // Minimum of the quadratic form H = |y - g B|^2 (sigma-normalized).
  double residual_h = 0.0;
};

// Least-squares heights for fixed changepoints. Throws
// UnconstrainedBlockError naming the first block the data cannot pin down.
HeightFit fit_heights(std::span<const double> changepoints,
                      std::span<const WeightedDatum> data);

// Midpoints between consecutive distinct datum positions x_n.
std::vector<double> default_candidates(std::span<const WeightedDatum> data);

struct ConfigurationResult {
  std::vector<double> changepoints;
  double log_marginal = 0.0;  // -inf when some block is unconstrained
  double residual_h = 0.0;
  bool constrained = true;
};

struct ChangepointSearch {
  BlockModel best;
  double best_log_marginal = 0.0;
  // Every configuration, in lexicographic candidate order.
  std::vector<ConfigurationResult> table;
};

// Upper bound on configurations one exhaustive search may evaluate.
inline constexpr std::size_t kMaxConfigurations = 1'000'000;

// Exhaustive search over all (n_blocks - 1)-subsets of the candidates. The
// maximum log_marginal wins; ties go to the lexicographically smallest
// changepoint vector.
ChangepointSearch search_changepoints(
    std::span<const WeightedDatum> data, std::size_t n_blocks,
    std::optional<std::vector<double>> candidates = std::nullopt);

struct BlockCountSelection {
  BlockModel best;
  std::size_t n_blocks = 1;
  std::vector<double> scores;  // log_marginal + N_b log(gamma_prior)
  std::vector<ChangepointSearch> searches;
};

// Picks the block count in 1..n_max under a geometric prior gamma^N_b. Ties
// go to fewer blocks.
BlockCountSelection select_n_blocks(
    std::span<const WeightedDatum> data, std::size_t n_max,
    double gamma_prior = 0.5,
    std::optional<std::vector<double>> candidates = std::nullopt);

}  // namespace lagscope

#endif  // LAGSCOPE_BLOCKS_HPP_
