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

// Batch tone experiments: every (model, method, f0) cell runs a sine
// through the model in one operating mode and is scored against the same
// model run at its training rate.
//
// Method descriptors:
//   naive                        model stepped at the inference rate
//   srirnn{K}                    order-K Lagrange state interpolation
//   resample{D}                  D converts to and from the training rate
//                                (any named resampling method, or fft)
//   oversample{M,I,D}            I up by M, state delay M, D down by M

#ifndef MRAFX_EXPERIMENT_H_
#define MRAFX_EXPERIMENT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrafx/analysis.h"
#include "mrafx/neural.h"

namespace mrafx {

struct MethodSpec {
  enum class Kind { kNaive, kSrirnn, kResample, kOversample };
  Kind kind = Kind::kNaive;
  int k = 1;                 // srirnn order
  std::string design;        // resample method
  int m = 1;                 // oversampling factor
  std::string interp, decim;  // oversampling converters

  // Throws ArgumentError on malformed descriptors.
  static MethodSpec Parse(const std::string& descriptor);
  std::string Label() const;
  bool operator==(const MethodSpec&) const = default;
};

struct ExperimentConfig {
  std::vector<std::string> models = {"builtin:seeded-8", "builtin:seeded-16"};
  std::vector<std::string> methods = {"naive", "srirnn{1}", "srirnn{3}",
                                      "resample{hb-wb-kaiser}", "resample{fft}"};
  std::vector<double> f0_hz = DefaultF0Grid();
  double g = 0.1;
  // Inference rate for naive / srirnn / resample; 0 uses the training rate.
  double inference_rate_hz = 48'000.0;
  std::size_t frame_length = 1u << 17;
  std::size_t preroll = 8192;  // raised-cosine fade-in, at each signal's rate
  std::size_t tail = 8192;     // fade-out after the analysis frame
  std::string output_dir = ".";

  static ExperimentConfig FromJson(const nlohmann::json& doc);
  nlohmann::json ToJson() const;
  // `key=value`, value parsed as JSON when possible (lists, numbers),
  // otherwise taken as a string. Comma lists without brackets are accepted
  // for models, methods and f0_hz.
  void Set(const std::string& assignment);
};

// A tone shaped for steady-state analysis: fade-in over `preroll`, then
// frame_length samples, then a fade-out over `tail`.
std::vector<double> MakeTestTone(double f0_hz, double rate_hz, double g,
                                 const ExperimentConfig& config);

// Runs one method on a signal at `input_rate_hz`. Returns the output (at
// the input rate, or at the training rate for oversampling), its nominal
// latency and whether any converter has nonlinear phase.
struct MethodOutput {
  std::vector<double> signal;
  double rate_hz = 0.0;
  double latency_s = 0.0;
  bool nonlinear_phase = false;
};
MethodOutput RunMethod(const RnnModel& model, const MethodSpec& method,
                       std::span<const double> signal, double input_rate_hz);

struct CellResult {
  std::string model;
  std::string method;
  long long l = 1;
  long long m = 1;
  double f0_hz = 0.0;
  MetricsReport metrics;
  std::string status = "ok";  // ok | unstable | error: ...
};

// Scores `method` for one tone against plain processing at the training rate.
CellResult EvaluateCell(const RnnModel& model, const MethodSpec& method,
                        double f0_hz, const ExperimentConfig& config);

struct ExperimentResult {
  std::vector<CellResult> rows;  // sorted by (model, method, f0)
  std::vector<std::string> skipped;  // "path: reason"
};

// Cells run on the worker pool (MRAFX_WORKERS caps it).
ExperimentResult RunExperiment(const ExperimentConfig& config);

inline constexpr const char* kCsvHeader =
    "model,method,l,m,f0_hz,esr_db,mesr_db,asr_db,nmr_db,status";
std::string CsvRow(const CellResult& row);
void WriteCsv(const ExperimentResult& result, const std::string& path);
// Per (model, method) means over f0 of the non-faulted rows, row counts,
// faults, and the worst row of each metric.
nlohmann::json Summarize(const ExperimentResult& result);

}  // namespace mrafx

#endif  // MRAFX_EXPERIMENT_H_
