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

// Parks-McClellan (Remez exchange) design of linear-phase FIR filters with
// piecewise-constant desired response. Even orders give symmetric odd-length
// filters, odd orders give symmetric even-length filters (zero at Nyquist).
//
// The exchange runs in x = cos(2 pi f) with barycentric Lagrange
// interpolation; barycentric weights are formed in the log domain so that
// orders in the thousands neither overflow nor underflow.

#ifndef MRAFX_REMEZ_H_
#define MRAFX_REMEZ_H_

#include <span>
#include <vector>

namespace mrafx {

struct RemezBand {
  double lo = 0.0;  // normalized, cycles/sample
  double hi = 0.0;
  double desired = 0.0;
  double weight = 1.0;
};

struct RemezOptions {
  int grid_density = 16;  // grid points per cosine basis function
  int max_iterations = 100;
  // Stop when (max|E| - |delta|) / |delta|, or the relative change of the
  // peak error between iterations, falls below this.
  double tolerance = 1e-10;
};

struct RemezResult {
  std::vector<double> taps;
  double delta = 0.0;  // final weighted equiripple error
  double max_error = 0.0;  // peak weighted error on the design grid
  int iterations = 0;
  int basis_size = 0;  // number of cosine basis functions, L
  std::vector<double> extremal_freqs;
};

// Throws ArgumentError for malformed bands, ConvergenceError when the
// exchange fails to settle within max_iterations.
RemezResult RemezDesign(int order, std::span<const RemezBand> bands,
                        const RemezOptions& options = {});

struct AlternationReport {
  int alternations = 0;  // length of the longest sign-alternating extremal run
  double max_error = 0.0;
  std::vector<double> band_peak_errors;  // peak weighted error per band
};

// Measures the weighted error of `taps` on a dense grid (points_per_tap
// points per tap across the bands) and counts alternating extrema whose
// magnitude is within rel_threshold of the peak.
AlternationReport MeasureAlternation(std::span<const double> taps,
                                     std::span<const RemezBand> bands,
                                     int points_per_tap = 32,
                                     double rel_threshold = 1e-6);

}  // namespace mrafx

#endif  // MRAFX_REMEZ_H_
