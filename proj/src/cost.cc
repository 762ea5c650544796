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

#include "mrafx/cost.h"

#include <cmath>

#include "mrafx/errors.h"

namespace mrafx {
namespace {

void RequireRate(double hz, const char* name) {
  if (!(hz > 0.0) || !std::isfinite(hz)) {
    throw ArgumentError(std::string(name) + " must be positive");
  }
}

CostReport Make(double mpus, double apus, double latency_samples,
                double latency_rate_hz, double reference_rate_hz) {
  CostReport r;
  r.mpus = mpus;
  r.apus = apus;
  r.total_ops = mpus + apus;
  r.latency_samples = latency_samples;
  r.latency_rate_hz = latency_rate_hz;
  r.latency_ms = latency_samples / latency_rate_hz * 1000.0;
  r.reference_rate_hz = reference_rate_hz;
  return r;
}

}  // namespace

CostReport CostReport::operator+(const CostReport& other) const {
  CostReport r = Make(mpus + other.mpus, apus + other.apus,
                      latency_ms + other.latency_ms, 1000.0,
                      reference_rate_hz);
  if (cell_ops || other.cell_ops) {
    r.cell_ops = cell_ops.value_or(0.0) + other.cell_ops.value_or(0.0);
  }
  return r;
}

CostReport CostReport::Times(double n) const {
  CostReport r = Make(mpus * n, apus * n, latency_ms * n, 1000.0,
                      reference_rate_hz);
  if (cell_ops) r.cell_ops = *cell_ops * n;
  return r;
}

CostReport FirCost(int n, int l, int m, double reference_rate_hz,
                   double input_rate_hz) {
  if (n < 0 || l < 1 || m < 1) throw ArgumentError("fir cost: bad n, l or m");
  RequireRate(reference_rate_hz, "reference rate");
  if (input_rate_hz == 0.0) input_rate_hz = reference_rate_hz;
  RequireRate(input_rate_hz, "input rate");
  const double scale = input_rate_hz / reference_rate_hz;
  return Make((n + 1.0) / m * scale, (n + 1.0 - l) / m * scale, 0.5 * n,
              l * input_rate_hz, reference_rate_hz);
}

CostReport HalfBandIirCost(int sections, double low_rate_hz,
                           double reference_rate_hz) {
  if (sections < 0) throw ArgumentError("half-band cost: negative sections");
  RequireRate(low_rate_hz, "low rate");
  RequireRate(reference_rate_hz, "reference rate");
  const double scale = low_rate_hz / reference_rate_hz;
  return Make(sections * scale, 2.0 * sections * scale, 0.0, 2.0 * low_rate_hz,
              reference_rate_hz);
}

CostReport HalfBandFirCost(int unique_taps, int order, double low_rate_hz,
                           double reference_rate_hz) {
  if (unique_taps < 0 || order < 0) {
    throw ArgumentError("half-band cost: negative size");
  }
  RequireRate(low_rate_hz, "low rate");
  RequireRate(reference_rate_hz, "reference rate");
  const double scale = low_rate_hz / reference_rate_hz;
  return Make(unique_taps * scale, 2.0 * unique_taps * scale, 0.5 * order,
              2.0 * low_rate_hz, reference_rate_hz);
}

CostReport EqLinterpCost(int m, double low_rate_hz, double reference_rate_hz) {
  if (m < 2) throw ArgumentError("eq-linterp cost: m must be >= 2");
  RequireRate(low_rate_hz, "low rate");
  RequireRate(reference_rate_hz, "reference rate");
  const double scale = low_rate_hz / reference_rate_hz;
  return Make(5.0 * scale, 3.0 * scale, 1.0, low_rate_hz, reference_rate_hz);
}

CostReport CicCost(int m, int stages, double low_rate_hz,
                   double reference_rate_hz) {
  if (m < 2 || stages < 1) throw ArgumentError("cic cost: bad m or stages");
  RequireRate(low_rate_hz, "low rate");
  RequireRate(reference_rate_hz, "reference rate");
  const double scale = low_rate_hz / reference_rate_hz;
  // Integrators: gain multiply + add per high-rate sample; combs: subtract +
  // gain multiply per low-rate sample; shelf: 3 multiplies, 2 adds.
  const double mults = stages * m + stages + 3.0;
  const double adds = stages * m + stages + 2.0;
  return Make(mults * scale, adds * scale, 0.5 * stages * (m - 1.0),
              m * low_rate_hz, reference_rate_hz);
}

CostReport SrirnnCost(int s, int k, int l, int m, double train_rate_hz,
                      double reference_rate_hz) {
  if (s < 0 || k < 0 || l < 1 || m < 1) {
    throw ArgumentError("srirnn cost: bad parameters");
  }
  RequireRate(train_rate_hz, "train rate");
  RequireRate(reference_rate_hz, "reference rate");
  const double operating = train_rate_hz * l / m;
  const double scale = operating / reference_rate_hz;
  return Make((k + 1.0) * s * scale, static_cast<double>(k) * s * scale, 0.0,
              operating, reference_rate_hz);
}

double LstmCellOps(int hidden, int input_dim) {
  return 8.0 * hidden * hidden + 8.0 * hidden * input_dim;
}

}  // namespace mrafx
