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

#ifndef LAGSCOPE_XCORR_HPP_
#define LAGSCOPE_XCORR_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "lagscope/series.hpp"

namespace lagscope {

// Circular cross-correlation indexed by lag:
//   gamma[tau] = sum_m x[m] * y[(m + tau) mod M],  tau = 0 .. M-1.
// A peak at tau means y lags x by tau ticks.
struct CcfVector {
  std::vector<double> gamma;
  bool circular = true;
};

// O(M^2) reference path.
CcfVector ccf_direct(std::span<const double> x, std::span<const double> y);

// O(M log M) path through a real-to-complex FFT.
CcfVector ccf_fft(std::span<const double> x, std::span<const double> y);

enum class CcfMethod { kFft, kDirect };

// Coincidence-count correlation of two indicator vectors. Every entry is an
// exact integer: the FFT result is rounded and must lie within 1e-6 of the
// nearest integer, otherwise ConsistencyError.
CcfVector ccf_counts(const IndicatorVector& x, const IndicatorVector& y,
                     CcfMethod method = CcfMethod::kFft);

// Joint outcome counts at one lag; first index is x_m, second y_{m+tau}.
struct CoincidenceCounts {
  std::int64_t n00 = 0;
  std::int64_t n01 = 0;
  std::int64_t n10 = 0;
  std::int64_t n11 = 0;
  Tick tau = 0;

  std::int64_t total() const noexcept { return n00 + n01 + n10 + n11; }
  friend bool operator==(const CoincidenceCounts&,
                         const CoincidenceCounts&) = default;
};

// Throws ConsistencyError if the inputs cannot come from two indicator
// vectors of length m with n_x and n_y ones.
CoincidenceCounts coincidence_counts(std::int64_t gamma_tau, std::int64_t n_x,
                                     std::int64_t n_y, std::int64_t m,
                                     Tick tau = 0);

}  // namespace lagscope

#endif  // LAGSCOPE_XCORR_HPP_
