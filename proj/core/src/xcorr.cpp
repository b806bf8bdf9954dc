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

#include "lagscope/xcorr.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <string>

#include "lagscope/error.hpp"
#include "lagscope/text.hpp"

namespace lagscope {
namespace {

// FFTW's planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

class Plan {
 public:
  explicit Plan(fftw_plan plan) : plan_(plan) {
    if (plan_ == nullptr) throw ConsistencyError("FFTW failed to create a plan");
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

void check_lengths(std::size_t nx, std::size_t ny) {
  if (nx != ny) {
    throw ValidationError("cross-correlation inputs differ in length (" +
                          std::to_string(nx) + " vs " + std::to_string(ny) +
                          ")");
  }
  if (nx == 0) throw ValidationError("cross-correlation inputs are empty");
}

}  // namespace

CcfVector ccf_direct(std::span<const double> x, std::span<const double> y) {
  check_lengths(x.size(), y.size());
  const std::size_t m = x.size();
  CcfVector out;
  out.gamma.assign(m, 0.0);
  for (std::size_t tau = 0; tau < m; ++tau) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sum += x[i] * y[(i + tau) % m];
    }
    out.gamma[tau] = sum;
  }
  return out;
}

CcfVector ccf_fft(std::span<const double> x, std::span<const double> y) {
  check_lengths(x.size(), y.size());
  const std::size_t m = x.size();
  const std::size_t bins = m / 2 + 1;
  const int n = static_cast<int>(m);

  auto real_x = fftw_buffer<double>(m);
  auto real_y = fftw_buffer<double>(m);
  auto spec_x = fftw_buffer<fftw_complex>(bins);
  auto spec_y = fftw_buffer<fftw_complex>(bins);

  std::unique_ptr<Plan> fwd_x;
  std::unique_ptr<Plan> fwd_y;
  std::unique_ptr<Plan> inv;
  {
    std::lock_guard lock(planner_mutex());
    fwd_x = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(
        n, real_x.get(), spec_x.get(), FFTW_ESTIMATE));
    fwd_y = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(
        n, real_y.get(), spec_y.get(), FFTW_ESTIMATE));
    inv = std::make_unique<Plan>(fftw_plan_dft_c2r_1d(
        n, spec_x.get(), real_x.get(), FFTW_ESTIMATE));
  }
  std::copy(x.begin(), x.end(), real_x.get());
  std::copy(y.begin(), y.end(), real_y.get());
  fwd_x->execute();
  fwd_y->execute();

  // gamma = IDFT(conj(X) * Y) / M
  for (std::size_t k = 0; k < bins; ++k) {
    const std::complex<double> a(spec_x[k][0], spec_x[k][1]);
    const std::complex<double> b(spec_y[k][0], spec_y[k][1]);
    const auto c = std::conj(a) * b;
    spec_x[k][0] = c.real();
    spec_x[k][1] = c.imag();
  }
  inv->execute();

  CcfVector out;
  out.gamma.resize(m);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) out.gamma[i] = real_x[i] * scale;
  return out;
}

CcfVector ccf_counts(const IndicatorVector& x, const IndicatorVector& y,
                     CcfMethod method) {
  const auto xr = x.as_real();
  const auto yr = y.as_real();
  if (method == CcfMethod::kDirect) return ccf_direct(xr, yr);

  CcfVector out = ccf_fft(xr, yr);
  for (std::size_t tau = 0; tau < out.gamma.size(); ++tau) {
    const double raw = out.gamma[tau];
    const double rounded = std::round(raw);
    if (std::abs(raw - rounded) > 1e-6) {
      throw ConsistencyError("FFT cross-correlation at lag " +
                             std::to_string(tau) + " is " + format_double(raw) +
                             ", not within 1e-6 of an integer");
    }
    out.gamma[tau] = rounded == 0.0 ? 0.0 : rounded;  // no -0
  }
  return out;
}

CoincidenceCounts coincidence_counts(std::int64_t gamma_tau, std::int64_t n_x,
                                     std::int64_t n_y, std::int64_t m,
                                     Tick tau) {
  if (gamma_tau < 0 || n_x < 0 || n_y < 0 || gamma_tau > std::min(n_x, n_y) ||
      n_x + n_y - gamma_tau > m) {
    throw ConsistencyError(
        "inconsistent coincidence inputs: gamma=" + std::to_string(gamma_tau) +
        ", N_x=" + std::to_string(n_x) + ", N_y=" + std::to_string(n_y) +
        ", M=" + std::to_string(m));
  }
  CoincidenceCounts c;
  c.n11 = gamma_tau;
  c.n10 = n_x - gamma_tau;
  c.n01 = n_y - gamma_tau;
  c.n00 = m - n_x - n_y + gamma_tau;
  c.tau = tau;
  return c;
}

}  // namespace lagscope
