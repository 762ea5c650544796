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

#include "mrafx/kernels.h"

#include <omp.h>

#include <cassert>
#include <cmath>
#include <algorithm>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

namespace mrafx::kernels {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Phasor recurrences are re-seeded from exact sin/cos every this many steps.
constexpr std::ptrdiff_t kReseed = 512;

// Fractional part of f * t, computed so that large t keeps phase accuracy.
inline double CyclePhase(double f, double t) {
  const double c = f * t;
  return c - std::floor(c);
}

inline std::complex<double> UnitPhasor(double cycles) {
  const double a = kTwoPi * cycles;
  return {std::cos(a), std::sin(a)};
}

}  // namespace

void SymmetricFirAmplitude(std::span<const double> taps,
                           std::span<const double> freqs,
                           std::span<double> out) {
  assert(out.size() == freqs.size());
  const std::ptrdiff_t n_taps = static_cast<std::ptrdiff_t>(taps.size());
  const std::ptrdiff_t half = n_taps / 2;
  const bool odd_length = (n_taps % 2) == 1;
  const std::ptrdiff_t n_freqs = static_cast<std::ptrdiff_t>(freqs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n_freqs; ++i) {
    const double f = freqs[i];
    // Offsets from the center: odd length -> 1, 2, ...; even -> 1/2, 3/2, ...
    const double first = odd_length ? 1.0 : 0.5;
    double acc = odd_length ? taps[half] : 0.0;
    std::complex<double> z;
    std::complex<double> step = UnitPhasor(f);
    for (std::ptrdiff_t k = 0; k < half; ++k) {
      if (k % kReseed == 0) z = UnitPhasor(CyclePhase(f, first + k));
      // Tap pair at distance (first + k) from the center.
      const std::ptrdiff_t lo = half - 1 - k;
      acc += 2.0 * taps[lo] * z.real();
      z *= step;
    }
    out[i] = acc;
  }
}

void FirMagnitude(std::span<const double> taps, std::span<const double> freqs,
                  std::span<double> out) {
  assert(out.size() == freqs.size());
  const std::ptrdiff_t n_taps = static_cast<std::ptrdiff_t>(taps.size());
  const std::ptrdiff_t n_freqs = static_cast<std::ptrdiff_t>(freqs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n_freqs; ++i) {
    const double f = freqs[i];
    std::complex<double> acc = 0.0;
    std::complex<double> z;
    const std::complex<double> step = UnitPhasor(-f);
    for (std::ptrdiff_t n = 0; n < n_taps; ++n) {
      if (n % kReseed == 0) z = UnitPhasor(-CyclePhase(f, static_cast<double>(n)));
      acc += taps[n] * z;
      z *= step;
    }
    out[i] = std::abs(acc);
  }
}

void BarycentricEvaluate(std::span<const double> nodes,
                         std::span<const double> weights,
                         std::span<const double> values,
                         std::span<const double> points,
                         std::span<double> out) {
  assert(nodes.size() == weights.size() && nodes.size() == values.size());
  assert(out.size() == points.size());
  const std::ptrdiff_t n_nodes = static_cast<std::ptrdiff_t>(nodes.size());
  const std::ptrdiff_t n_points = static_cast<std::ptrdiff_t>(points.size());
  std::vector<CosAbscissa> nx(n_nodes);
  for (std::ptrdiff_t k = 0; k < n_nodes; ++k) nx[k] = MakeCosAbscissa(nodes[k]);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n_points; ++i) {
    const CosAbscissa x = MakeCosAbscissa(points[i]);
    double num = 0.0;
    double den = 0.0;
    double exact = 0.0;
    bool hit = false;
    for (std::ptrdiff_t k = 0; k < n_nodes; ++k) {
      const double d = CosDifference(x, nx[k]);
      if (d == 0.0) {
        exact = values[k];
        hit = true;
        break;
      }
      const double c = weights[k] / d;
      num += c * values[k];
      den += c;
    }
    out[i] = hit ? exact : num / den;
  }
}

void WindowedDtft(std::span<const double> windowed, double start_index,
                  std::span<const double> freqs,
                  std::span<std::complex<double>> out) {
  assert(out.size() == freqs.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(windowed.size());
  const std::ptrdiff_t n_freqs = static_cast<std::ptrdiff_t>(freqs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n_freqs; ++i) {
    const double f = freqs[i];
    const std::complex<double> step = UnitPhasor(-f);
    std::complex<double> acc = 0.0;
    std::complex<double> z;
    for (std::ptrdiff_t t = 0; t < n; ++t) {
      if (t % kReseed == 0) {
        z = UnitPhasor(-CyclePhase(f, start_index + static_cast<double>(t)));
      }
      acc += windowed[t] * z;
      z *= step;
    }
    out[i] = acc;
  }
}

void SynthesizeSines(double dc, std::span<const double> amps,
                     std::span<const double> phases,
                     std::span<const double> freqs, double start_index,
                     std::span<double> out) {
  assert(amps.size() == phases.size() && amps.size() == freqs.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
  const std::size_t n_sines = amps.size();
  const std::ptrdiff_t n_blocks = (n + kReseed - 1) / kReseed;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < n_blocks; ++b) {
    const std::ptrdiff_t begin = b * kReseed;
    const std::ptrdiff_t end = std::min(n, begin + kReseed);
    for (std::ptrdiff_t t = begin; t < end; ++t) out[t] = dc;
    for (std::size_t k = 0; k < n_sines; ++k) {
      if (amps[k] == 0.0) continue;
      const double f = freqs[k];
      const std::complex<double> step = UnitPhasor(f);
      std::complex<double> z =
          UnitPhasor(CyclePhase(f, start_index + static_cast<double>(begin))) *
          std::polar(amps[k], phases[k]);
      for (std::ptrdiff_t t = begin; t < end; ++t) {
        out[t] += z.imag();
        z *= step;
      }
    }
  }
}

namespace serial {

void SymmetricFirAmplitude(std::span<const double> taps,
                           std::span<const double> freqs,
                           std::span<double> out) {
  const std::size_t n_taps = taps.size();
  const double center = 0.5 * static_cast<double>(n_taps - 1);
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    double acc = 0.0;
    for (std::size_t n = 0; n < n_taps; ++n) {
      acc += taps[n] *
             std::cos(kTwoPi * freqs[i] * (static_cast<double>(n) - center));
    }
    out[i] = acc;
  }
}

void FirMagnitude(std::span<const double> taps, std::span<const double> freqs,
                  std::span<double> out) {
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    std::complex<double> acc = 0.0;
    for (std::size_t n = 0; n < taps.size(); ++n) {
      acc += taps[n] *
             std::polar(1.0, -kTwoPi * freqs[i] * static_cast<double>(n));
    }
    out[i] = std::abs(acc);
  }
}

void BarycentricEvaluate(std::span<const double> nodes,
                         std::span<const double> weights,
                         std::span<const double> values,
                         std::span<const double> points,
                         std::span<double> out) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const CosAbscissa x = MakeCosAbscissa(points[i]);
    double num = 0.0;
    double den = 0.0;
    bool hit = false;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double d = CosDifference(x, MakeCosAbscissa(nodes[k]));
      if (d == 0.0) {
        out[i] = values[k];
        hit = true;
        break;
      }
      num += weights[k] / d * values[k];
      den += weights[k] / d;
    }
    if (!hit) out[i] = num / den;
  }
}

void WindowedDtft(std::span<const double> windowed, double start_index,
                  std::span<const double> freqs,
                  std::span<std::complex<double>> out) {
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < windowed.size(); ++t) {
      const double cycles =
          CyclePhase(freqs[i], start_index + static_cast<double>(t));
      acc += windowed[t] * std::polar(1.0, -kTwoPi * cycles);
    }
    out[i] = acc;
  }
}

void SynthesizeSines(double dc, std::span<const double> amps,
                     std::span<const double> phases,
                     std::span<const double> freqs, double start_index,
                     std::span<double> out) {
  for (std::size_t t = 0; t < out.size(); ++t) {
    double acc = dc;
    for (std::size_t k = 0; k < amps.size(); ++k) {
      const double cycles =
          CyclePhase(freqs[k], start_index + static_cast<double>(t));
      acc += amps[k] * std::sin(kTwoPi * cycles + phases[k]);
    }
    out[t] = acc;
  }
}

}  // namespace serial

void ConfigureWorkers(int max_workers) {
  if (max_workers <= 0) {
    if (const char* env = std::getenv("MRAFX_WORKERS")) {
      max_workers = std::atoi(env);
    }
  }
  if (max_workers > 0) omp_set_num_threads(max_workers);
}

int WorkerCount() { return omp_get_max_threads(); }

}  // namespace mrafx::kernels
