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

// Single-layer LSTM audio-effect models and the ways of running them at a
// rate other than the one they were trained at: naive, fractional state
// delay (SRIRNN), integer oversampling with a pure state delay, and
// resampling around an untouched model.
//
// Gate layout follows the PyTorch convention: rows [i; f; g; o] of the
// 4H-row weight matrices, sigmoid on i, f, o and tanh on g and the cell.

#ifndef MRAFX_NEURAL_H_
#define MRAFX_NEURAL_H_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrafx/cost.h"
#include "mrafx/resamplers.h"

namespace mrafx {

struct RnnModel {
  std::string name;
  int hidden_size = 0;
  int input_dim = 1;
  double train_rate_hz = 44'100.0;
  std::vector<double> w_input;      // 4H x D, row-major
  std::vector<double> w_recurrent;  // 4H x H, row-major
  std::vector<double> bias;         // 4H (input and recurrent biases summed)
  std::vector<double> dense_hidden;  // H
  std::vector<double> dense_input;   // D; a skip path, often zero
  double dense_bias = 0.0;

  // Hidden plus cell states.
  int state_size() const { return 2 * hidden_size; }
  // Throws SchemaError naming the offending field.
  void Validate() const;
};

// Hidden then cell, laid out contiguously as one length-2H vector.
struct RnnState {
  std::vector<double> values;

  explicit RnnState(int hidden_size = 0)
      : values(2 * static_cast<std::size_t>(hidden_size), 0.0) {}
  std::span<double> hidden() { return std::span(values).first(values.size() / 2); }
  std::span<double> cell() { return std::span(values).last(values.size() / 2); }
  std::span<const double> hidden() const {
    return std::span(values).first(values.size() / 2);
  }
  std::span<const double> cell() const {
    return std::span(values).last(values.size() / 2);
  }
};

inline constexpr double kInstabilityThreshold = 1e6;

// One LSTM update from `prev` into `next` (which may alias `prev`), then the
// affine output. `x` has input_dim entries.
double LstmStep(const RnnModel& model, std::span<const double> prev,
                std::span<const double> x, std::span<double> next);
double LstmStep(const RnnModel& model, RnnState& state,
                std::span<const double> x);

// l_j = prod_{i != j} (d - i) / (j - i), j = 0..k.
std::vector<double> LagrangeCoeffs(int k, double d);

struct SrirnnConfig {
  int l = 1;
  int m = 1;
  int k = 1;
  double delta = 0.0;  // l / m - 1
  std::vector<double> coeffs;

  // Throws ArgumentError unless l, m >= 1, coprime, and k >= 0.
  static SrirnnConfig Make(int l, int m, int k);
};

// Conditioning inputs beyond the audio channel are held constant.
struct RunOptions {
  std::vector<double> conditioning;  // input_dim - 1 values, zero if empty
  std::size_t sample_offset = 0;     // added to fault indices
};

std::vector<double> ProcessPlain(const RnnModel& model,
                                 std::span<const double> signal,
                                 const RunOptions& options = {});

// Each step starts from sum_j l_j state[n - 1 - j] over the hidden and cell
// states. Throws InstabilityFault once any |cell| exceeds
// kInstabilityThreshold or a value turns non-finite.
std::vector<double> SrirnnProcess(const RnnModel& model,
                                  const SrirnnConfig& config,
                                  std::span<const double> signal,
                                  const RunOptions& options = {});

struct PipelineOutput {
  std::vector<double> signal;
  double latency_s = 0.0;  // nominal delay introduced by the converters
};

// Interpolate by m, step the LSTM with the state from m steps back, then
// decimate by m. m == 1 ignores the converters and is plain processing.
PipelineOutput OversampledProcess(const RnnModel& model, int m,
                                  const Converter& interp,
                                  const Converter& decim,
                                  std::span<const double> signal,
                                  const RunOptions& options = {});

// Convert to the training rate, process plainly, convert back.
PipelineOutput ResampledProcess(const RnnModel& model, const Converter& to_model,
                                const Converter& from_model,
                                std::span<const double> signal,
                                const RunOptions& options = {});

// Documents. Canonical:
//   {"name": ..., "hidden_size": H, "input_dim": D, "train_rate_hz": R,
//    "lstm": {"w_input": [[..D]..4H], "w_recurrent": [[..H]..4H],
//             "bias": [..4H]},
//    "dense": {"w_hidden": [..H], "w_input": [..D], "bias": b}}
// Also accepted:
//   GuitarML / Automated-GuitarAmpModelling exports ("model_data" plus a
//   PyTorch "state_dict" with rec.weight_ih_l0 etc.; "skip" adds the input
//   to the output; rate from "samplerate", default 44.1 kHz),
//   AIDA-X / RTNeural Keras exports ("layers" with an lstm layer holding
//   [W (D x 4H), U (H x 4H), b] and a dense layer; "in_skip" as above;
//   rate from "samplerate", default 48 kHz).
RnnModel ModelFromJson(const nlohmann::json& doc);
nlohmann::json ModelToJson(const RnnModel& model);
RnnModel LoadModel(const std::string& path);
void SaveModel(const RnnModel& model, const std::string& path);

// Deterministic synthetic models trained "at" 44.1 kHz. `builtin:seeded-8`
// and `builtin:seeded-16` name the two bundled ones; LoadModel accepts
// those names too.
RnnModel SeededModel(int hidden_size, unsigned long long seed);
std::vector<std::string> BundledModelNames();
bool IsBundledModelName(const std::string& name);

// Filtering cost of running with a fractional state delay of order k at
// l/m of the training rate (cell excluded), optionally with the cell
// estimate attached.
CostReport SrirnnModelCost(const RnnModel& model, int k, int l, int m,
                           bool include_cell = false);

}  // namespace mrafx

#endif  // MRAFX_NEURAL_H_
