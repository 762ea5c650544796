// Copyright 2026 The mrafx Authors. All Rights Reserved.
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

#include "mrafx/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "mrafx/errors.h"

namespace mrafx {
namespace {

std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

struct Plan {
  fftw_plan p = nullptr;
  ~Plan() {
    if (p != nullptr) {
      std::lock_guard<std::mutex> lock(PlannerMutex());
      fftw_destroy_plan(p);
    }
  }
};

}  // namespace

std::vector<std::complex<double>> Rfft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  if (n == 0) return {};
  std::vector<double> in(x.begin(), x.end());
  Plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan.p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                  reinterpret_cast<fftw_complex*>(out.data()),
                                  FFTW_ESTIMATE);
  }
  if (plan.p == nullptr) throw DesignError("fftw: planning failed");
  fftw_execute(plan.p);
  return out;
}

std::vector<double> Irfft(std::span<const std::complex<double>> bins,
                          std::size_t n) {
  if (n == 0) return {};
  if (bins.size() != n / 2 + 1) {
    throw ArgumentError("irfft: bin count must be n/2 + 1");
  }
  std::vector<std::complex<double>> in(bins.begin(), bins.end());
  std::vector<double> out(n);
  Plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan.p = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                  reinterpret_cast<fftw_complex*>(in.data()),
                                  out.data(), FFTW_ESTIMATE);
  }
  if (plan.p == nullptr) throw DesignError("fftw: planning failed");
  fftw_execute(plan.p);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<std::complex<double>> Fft(std::span<const std::complex<double>> x,
                                      bool inverse) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  std::vector<std::complex<double>> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(n);
  Plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan.p = fftw_plan_dft_1d(static_cast<int>(n),
                              reinterpret_cast<fftw_complex*>(in.data()),
                              reinterpret_cast<fftw_complex*>(out.data()),
                              inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                              FFTW_ESTIMATE);
  }
  if (plan.p == nullptr) throw DesignError("fftw: planning failed");
  fftw_execute(plan.p);
  return out;
}

}  // namespace mrafx
