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

// Data-parallel inner loops shared by design validation, the Remez
// exchange and the harmonic analysis. Every kernel exists twice: an
// OpenMP version in mrafx::kernels and a plain loop in
// mrafx::kernels::serial that the tests and benchmarks compare against.
//
// All frequencies are normalized (cycles per sample).

#ifndef MRAFX_KERNELS_H_
#define MRAFX_KERNELS_H_

#include <cmath>
#include <complex>
#include <numbers>
#include <cstddef>
#include <span>

namespace mrafx::kernels {

// Zero-phase amplitude of a linear-phase (symmetric) FIR filter,
// A(f) = sum_n h[n] cos(2 pi f (n - N/2)). |A| is the magnitude response.
void SymmetricFirAmplitude(std::span<const double> taps,
                           std::span<const double> freqs,
                           std::span<double> out);

// |sum_n h[n] exp(-j 2 pi f n)| for arbitrary taps.
void FirMagnitude(std::span<const double> taps, std::span<const double> freqs,
                  std::span<double> out);

// Point in the abscissa x = cos(2 pi f), carried with 1 - x and 1 + x so
// that differences of nearby points keep full relative accuracy near x = +-1.
struct CosAbscissa {
  double x = 1.0;
  double one_minus = 0.0;
  double one_plus = 2.0;
};

inline CosAbscissa MakeCosAbscissa(double f) {
  const double s = std::sin(std::numbers::pi * f);
  const double c = std::cos(std::numbers::pi * f);
  return {std::cos(2.0 * std::numbers::pi * f), 2.0 * s * s, 2.0 * c * c};
}

// a.x - b.x without cancellation.
inline double CosDifference(const CosAbscissa& a, const CosAbscissa& b) {
  if (a.x >= 0.0 && b.x >= 0.0) return b.one_minus - a.one_minus;
  if (a.x < 0.0 && b.x < 0.0) return a.one_plus - b.one_plus;
  return a.x - b.x;
}

// Barycentric Lagrange interpolation in x = cos(2 pi f) through (nodes,
// values) with the given barycentric weights, evaluated at points. Nodes and
// points are given as frequencies f. Points that coincide with a node return
// the node value.
void BarycentricEvaluate(std::span<const double> nodes,
                         std::span<const double> weights,
                         std::span<const double> values,
                         std::span<const double> points,
                         std::span<double> out);

// X(f) = sum_n w[n] x[n] exp(-j 2 pi f (n + start_index)) for each f.
// `windowed` already carries the window.
void WindowedDtft(std::span<const double> windowed, double start_index,
                  std::span<const double> freqs,
                  std::span<std::complex<double>> out);

// out[n] = dc + sum_k amps[k] sin(2 pi freqs[k] (n + start_index) + phases[k]).
void SynthesizeSines(double dc, std::span<const double> amps,
                     std::span<const double> phases,
                     std::span<const double> freqs, double start_index,
                     std::span<double> out);

namespace serial {

void SymmetricFirAmplitude(std::span<const double> taps,
                           std::span<const double> freqs,
                           std::span<double> out);
void FirMagnitude(std::span<const double> taps, std::span<const double> freqs,
                  std::span<double> out);
void BarycentricEvaluate(std::span<const double> nodes,
                         std::span<const double> weights,
                         std::span<const double> values,
                         std::span<const double> points,
                         std::span<double> out);
void WindowedDtft(std::span<const double> windowed, double start_index,
                  std::span<const double> freqs,
                  std::span<std::complex<double>> out);
void SynthesizeSines(double dc, std::span<const double> amps,
                     std::span<const double> phases,
                     std::span<const double> freqs, double start_index,
                     std::span<double> out);

}  // namespace serial

// Caps the OpenMP team size used by the parallel kernels and the experiment
// pool. Reads MRAFX_WORKERS when called with 0.
void ConfigureWorkers(int max_workers = 0);
int WorkerCount();

}  // namespace mrafx::kernels

#endif  // MRAFX_KERNELS_H_
