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

#include "lagscope/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lagscope/error.hpp"
#include "lagscope/parallel.hpp"
#include "lagscope/text.hpp"

namespace lagscope {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative pivot below which a block counts as undetermined.
constexpr double kPivotTolerance = 1e-12;

std::pair<double, double> edges_of(std::span<const double> changepoints,
                                   std::size_t j) {
  const double lo = j == 0 ? -kInf : changepoints[j - 1];
  const double hi = j == changepoints.size() ? kInf : changepoints[j];
  return {lo, hi};
}

void check_changepoints(std::span<const double> changepoints) {
  for (std::size_t i = 0; i < changepoints.size(); ++i) {
    if (!std::isfinite(changepoints[i])) {
      throw ValidationError("changepoints must be finite");
    }
    if (i > 0 && changepoints[i] < changepoints[i - 1]) {
      throw ValidationError("changepoints must be non-decreasing");
    }
  }
}

double gaussian_mass(double center, double width, double lo, double hi) {
  const double zlo = (lo - center) / (width * std::numbers::sqrt2);
  const double zhi = (hi - center) / (width * std::numbers::sqrt2);
  // Pick the erfc form that keeps both tails small to avoid cancellation.
  if (zlo >= 0.0) return 0.5 * (std::erfc(zlo) - std::erfc(zhi));
  if (zhi <= 0.0) return 0.5 * (std::erfc(-zhi) - std::erfc(-zlo));
  return 1.0 - 0.5 * std::erfc(-zlo) - 0.5 * std::erfc(zhi);
}

double tabulated_mass(const TabulatedWeight& w, double lo, double hi) {
  const auto& xs = w.abscissae;
  const auto& ds = w.densities;
  double mass = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double u = std::max(lo, xs[i - 1]);
    const double v = std::min(hi, xs[i]);
    if (!(v > u)) continue;
    const double slope = (ds[i] - ds[i - 1]) / (xs[i] - xs[i - 1]);
    const double du = ds[i - 1] + slope * (u - xs[i - 1]);
    const double dv = ds[i - 1] + slope * (v - xs[i - 1]);
    mass += 0.5 * (du + dv) * (v - u);
  }
  return mass;
}

// C(n, k), saturating at limit + 1.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t limit) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double acc = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(limit)) return limit + 1;
  }
  return static_cast<std::size_t>(std::llround(acc));
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

BlockModel::BlockModel(std::vector<double> changepoints,
                       std::vector<double> heights)
    : changepoints_(std::move(changepoints)), heights_(std::move(heights)) {
  check_changepoints(changepoints_);
  if (heights_.size() != changepoints_.size() + 1) {
    throw ValidationError("a model with " +
                          std::to_string(changepoints_.size()) +
                          " changepoints needs " +
                          std::to_string(changepoints_.size() + 1) +
                          " heights, got " + std::to_string(heights_.size()));
  }
  for (double h : heights_) {
    if (!std::isfinite(h)) throw ValidationError("block heights must be finite");
  }
}

std::pair<double, double> BlockModel::block_edges(std::size_t j) const {
  if (j >= n_blocks()) throw RangeError("block index out of range");
  return edges_of(changepoints_, j);
}

double BlockModel::value_at(double x) const {
  const auto it =
      std::lower_bound(changepoints_.begin(), changepoints_.end(), x);
  return heights_[static_cast<std::size_t>(it - changepoints_.begin())];
}

double weight_block_product(const WeightFunction& w, double lo, double hi) {
  if (hi < lo) {
    throw ValidationError("block edges reversed: [" + format_double(lo) + ", " +
                          format_double(hi) + "]");
  }
  return std::visit(
      [&](const auto& k) -> double {
        using W = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<W, DeltaWeight>) {
          return (lo < k.center && k.center <= hi) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<W, BoxcarWeight>) {
          const double overlap = std::min(hi, k.hi) - std::max(lo, k.lo);
          return overlap > 0.0 ? overlap / (k.hi - k.lo) : 0.0;
        } else if constexpr (std::is_same_v<W, GaussianWeight>) {
          return gaussian_mass(k.center, k.width, lo, hi);
        } else {
          return tabulated_mass(k, lo, hi);
        }
      },
      w.kind());
}

DesignProducts DesignProducts::build(std::span<const WeightedDatum> data,
                                     std::span<const double> changepoints) {
  check_changepoints(changepoints);
  if (data.empty()) throw ValidationError("no data");
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto nb = static_cast<Eigen::Index>(changepoints.size() + 1);

  DesignProducts p;
  p.g.resize(n, nb);
  Eigen::VectorXd y(n);
  double log_q = 0.0;
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& d = data[static_cast<std::size_t>(r)];
    if (!(d.sigma > 0.0) || !std::isfinite(d.sigma)) {
      throw ValidationError("datum " + std::to_string(r) +
                            " has non-positive sigma");
    }
    y(r) = d.y / d.sigma;
    log_q -= std::log(d.sigma) + half_log_2pi;
    for (Eigen::Index j = 0; j < nb; ++j) {
      const auto [lo, hi] = edges_of(changepoints, static_cast<std::size_t>(j));
      p.g(r, j) = weight_block_product(d.weight, lo, hi) / d.sigma;
    }
  }
  p.gram = p.g.transpose() * p.g;
  p.proj = p.g.transpose() * y;
  p.sum_y2 = y.squaredNorm();
  p.log_q = log_q;
  return p;
}

std::vector<double> predict(const BlockModel& model,
                            std::span<const WeightedDatum> data) {
  std::vector<double> out(data.size(), 0.0);
  for (std::size_t n = 0; n < data.size(); ++n) {
    double sum = 0.0;
    for (std::size_t j = 0; j < model.n_blocks(); ++j) {
      const auto [lo, hi] = model.block_edges(j);
      sum += model.heights()[j] * weight_block_product(data[n].weight, lo, hi);
    }
    out[n] = sum;
  }
  return out;
}

HeightFit fit_heights(std::span<const double> changepoints,
                      std::span<const WeightedDatum> data) {
  const DesignProducts p = DesignProducts::build(data, changepoints);
  const Eigen::Index nb = p.gram.rows();

  // Cholesky gram = L L^T, reporting the first block whose pivot vanishes.
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(nb, nb);
  for (Eigen::Index k = 0; k < nb; ++k) {
    const double diag = p.gram(k, k);
    double pivot = diag;
    for (Eigen::Index i = 0; i < k; ++i) pivot -= lower(k, i) * lower(k, i);
    if (!(diag > 0.0) || !(pivot > kPivotTolerance * diag)) {
      const auto [lo, hi] = edges_of(changepoints, static_cast<std::size_t>(k));
      throw UnconstrainedBlockError(
          static_cast<std::size_t>(k),
          "block " + std::to_string(k) + " (" + format_double(lo) + ", " +
              format_double(hi) + "] is not constrained by the data" +
              (diag > 0.0 ? " independently of its neighbours" : ""));
    }
    lower(k, k) = std::sqrt(pivot);
    for (Eigen::Index r = k + 1; r < nb; ++r) {
      double s = p.gram(r, k);
      for (Eigen::Index i = 0; i < k; ++i) s -= lower(r, i) * lower(k, i);
      lower(r, k) = s / lower(k, k);
    }
  }
  const Eigen::VectorXd forward =
      lower.triangularView<Eigen::Lower>().solve(p.proj);
  const Eigen::VectorXd heights =
      lower.transpose().triangularView<Eigen::Upper>().solve(forward);

  double log_det = 0.0;
  for (Eigen::Index k = 0; k < nb; ++k) log_det += 2.0 * std::log(lower(k, k));

  HeightFit fit;
  fit.heights.assign(heights.data(), heights.data() + heights.size());
  fit.residual_h = p.sum_y2 - p.proj.dot(heights);
  fit.log_marginal = -0.5 * fit.residual_h - 0.5 * log_det +
                     0.5 * static_cast<double>(nb) *
                         std::log(2.0 * std::numbers::pi) +
                     p.log_q;
  return fit;
}

std::vector<double> default_candidates(std::span<const WeightedDatum> data) {
  std::vector<double> xs;
  xs.reserve(data.size());
  for (const auto& d : data) xs.push_back(d.x);
  xs = sorted_unique(std::move(xs));
  std::vector<double> mids;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    mids.push_back(0.5 * (xs[i - 1] + xs[i]));
  }
  return mids;
}

ChangepointSearch search_changepoints(
    std::span<const WeightedDatum> data, std::size_t n_blocks,
    std::optional<std::vector<double>> candidates) {
  if (n_blocks < 1) throw ValidationError("n_blocks must be at least 1");
  if (data.empty()) throw ValidationError("no data");
  const std::vector<double> cands =
      candidates ? sorted_unique(*candidates) : default_candidates(data);
  check_changepoints(cands);
  const std::size_t k = n_blocks - 1;
  if (k > cands.size()) {
    throw ValidationError(std::to_string(n_blocks) + " blocks need " +
                          std::to_string(k) + " changepoints but only " +
                          std::to_string(cands.size()) +
                          " candidates are available");
  }
  const std::size_t total = binomial_capped(cands.size(), k, kMaxConfigurations);
  if (total > kMaxConfigurations) {
    throw ValidationError(
        "exhaustive search over " + std::to_string(cands.size()) +
        " candidates for " + std::to_string(n_blocks) +
        " blocks exceeds 1e6 configurations; supply a coarser candidate set");
  }

  // Enumerate index combinations in lexicographic order.
  std::vector<std::vector<std::size_t>> combos;
  combos.reserve(total);
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    combos.push_back(idx);
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == cands.size() - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }

  std::vector<ConfigurationResult> table(combos.size());
  parallel_for(combos.size(), [&](std::size_t c) {
    ConfigurationResult& row = table[c];
    row.changepoints.reserve(k);
    for (std::size_t i : combos[c]) row.changepoints.push_back(cands[i]);
    try {
      const HeightFit fit = fit_heights(row.changepoints, data);
      row.log_marginal = fit.log_marginal;
      row.residual_h = fit.residual_h;
    } catch (const UnconstrainedBlockError&) {
      row.constrained = false;
      row.log_marginal = -kInf;
      row.residual_h = kInf;
    }
  });

  std::optional<std::size_t> best;
  for (std::size_t c = 0; c < table.size(); ++c) {
    if (!table[c].constrained) continue;
    if (!best || table[c].log_marginal > table[*best].log_marginal) best = c;
  }
  if (!best) {
    throw ValidationError("no changepoint configuration constrains every block");
  }
  const HeightFit fit = fit_heights(table[*best].changepoints, data);
  return ChangepointSearch{BlockModel(table[*best].changepoints, fit.heights),
                           fit.log_marginal, std::move(table)};
}

BlockCountSelection select_n_blocks(std::span<const WeightedDatum> data,
                                    std::size_t n_max, double gamma_prior,
                                    std::optional<std::vector<double>> candidates) {
  if (n_max < 1) throw ValidationError("n_max must be at least 1");
  if (!(gamma_prior > 0.0 && gamma_prior < 1.0)) {
    throw ValidationError("gamma_prior must lie in (0, 1), got " +
                          format_double(gamma_prior));
  }
  std::vector<ChangepointSearch> searches;
  std::vector<double> scores;
  const double log_gamma = std::log(gamma_prior);
  for (std::size_t nb = 1; nb <= n_max; ++nb) {
    searches.push_back(search_changepoints(data, nb, candidates));
    scores.push_back(searches.back().best_log_marginal +
                     static_cast<double>(nb) * log_gamma);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return BlockCountSelection{searches[best].best, best + 1, std::move(scores),
                             std::move(searches)};
}

}  // namespace lagscope
