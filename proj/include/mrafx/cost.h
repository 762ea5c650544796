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

// Operation-count and latency accounting for the filtering stages.
//
// Costs are operations per sample at a reference rate (44.1 kHz unless
// stated), so figures for stages running at different rates can be summed.

#ifndef MRAFX_COST_H_
#define MRAFX_COST_H_

#include <optional>

namespace mrafx {

inline constexpr double kReferenceRateHz = 44'100.0;

struct CostReport {
  double mpus = 0.0;  // multiplications per reference-rate sample
  double apus = 0.0;  // additions per reference-rate sample
  double total_ops = 0.0;
  double latency_samples = 0.0;  // counted at latency_rate_hz
  double latency_rate_hz = 0.0;
  double latency_ms = 0.0;
  double reference_rate_hz = kReferenceRateHz;
  // Optional estimate of the RNN cell itself (multiply-adds per reference
  // sample); never folded into total_ops.
  std::optional<double> cell_ops;

  // Sum of two chains run in sequence: operations add, latencies add in
  // milliseconds. The result counts latency at 1 kHz (samples == ms).
  CostReport operator+(const CostReport& other) const;
  // n identical instances (e.g. pre- and post-model converters).
  CostReport Times(double n) const;
};

// Polyphase L/M converter with an order-n FIR: (n+1)/M multiplications and
// (n+1-L)/M additions per input sample, latency n/2 samples at L * input.
CostReport FirCost(int n, int l, int m, double reference_rate_hz,
                   double input_rate_hz = 0.0);

// Half-band IIR stage with `sections` first-order all-pass sections in
// total (n0 + n1): one multiply and two adds per section per low-rate sample.
// Zero nominal latency.
CostReport HalfBandIirCost(int sections, double low_rate_hz,
                           double reference_rate_hz);

// Half-band FIR stage with `unique_taps` distinct non-zero off-centre
// coefficients: that many multiplies and twice as many adds per low-rate
// sample. Latency is order/2 samples at the high rate.
CostReport HalfBandFirCost(int unique_taps, int order, double low_rate_hz,
                           double reference_rate_hz);

// First-order high shelf plus linear interpolation: 5 multiplies and 3 adds
// per low-rate sample; one low-rate sample of latency.
CostReport EqLinterpCost(int m, double low_rate_hz, double reference_rate_hz);

// CIC decimator of `stages` stages with per-stage gain normalization followed
// by the high-shelf equalizer: 2*N*M + 2*N + 5 operations per low-rate
// sample. Latency is the group delay N(M-1)/2 at the high rate.
CostReport CicCost(int m, int stages, double low_rate_hz,
                   double reference_rate_hz);

// Fractional-delay state interpolation: (k+1)*s multiplies and k*s adds per
// step at the operating rate l/m * train_rate.
CostReport SrirnnCost(int s, int k, int l, int m, double train_rate_hz,
                      double reference_rate_hz = kReferenceRateHz);

// LSTM cell estimate 8 H^2 + 8 H D multiply-adds per step.
double LstmCellOps(int hidden, int input_dim);

}  // namespace mrafx

#endif  // MRAFX_COST_H_
