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

#include "mrafx/neural.h"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>

#include "mrafx/errors.h"

namespace mrafx {
namespace {

using nlohmann::json;

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Input frame: audio sample followed by the held conditioning values.
class Frame {
 public:
  Frame(const RnnModel& model, const RunOptions& options)
      : values_(static_cast<std::size_t>(model.input_dim), 0.0) {
    if (!options.conditioning.empty() &&
        options.conditioning.size() + 1 != values_.size()) {
      throw ArgumentError("conditioning needs input_dim - 1 values");
    }
    for (std::size_t i = 0; i < options.conditioning.size(); ++i) {
      values_[i + 1] = options.conditioning[i];
    }
  }
  std::span<const double> With(double sample) {
    values_[0] = sample;
    return values_;
  }

 private:
  std::vector<double> values_;
};

void CheckState(const RnnModel& model, std::span<const double> state,
                std::size_t index) {
  const std::size_t h = state.size() / 2;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double v = state[i];
    if (!std::isfinite(v) || (i >= h && std::abs(v) > kInstabilityThreshold)) {
      throw InstabilityFault("model '" + model.name + "' diverged at sample " +
                                 std::to_string(index),
                             index);
    }
  }
}

// --- JSON helpers -------------------------------------------------------------

const json& Field(const json& doc, const std::string& key,
                  const std::string& path) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw SchemaError(path + key, "missing");
  }
  return doc[key];
}

std::vector<double> Vector(const json& v, const std::string& field) {
  if (!v.is_array()) throw SchemaError(field, "expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number()) throw SchemaError(field, "expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

// rows x cols, row-major.
std::vector<double> Matrix(const json& v, std::size_t rows, std::size_t cols,
                           const std::string& field) {
  if (!v.is_array() || v.size() != rows) {
    throw SchemaError(field, "expected " + std::to_string(rows) + " rows");
  }
  std::vector<double> out;
  out.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::vector<double> row = Vector(v[r], field);
    if (row.size() != cols) {
      throw SchemaError(field, "expected " + std::to_string(cols) + " columns");
    }
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

std::vector<double> Transposed(const std::vector<double>& m, std::size_t rows,
                               std::size_t cols) {
  std::vector<double> t(m.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) t[c * rows + r] = m[r * cols + c];
  }
  return t;
}

json MatrixJson(const std::vector<double>& m, std::size_t rows,
                std::size_t cols) {
  json out = json::array();
  for (std::size_t r = 0; r < rows; ++r) {
    out.push_back(std::vector<double>(m.begin() + r * cols,
                                      m.begin() + (r + 1) * cols));
  }
  return out;
}

int PositiveInt(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw SchemaError(field, "expected a positive integer");
  }
  return v.get<int>();
}

RnnModel FromCanonical(const json& doc) {
  RnnModel m;
  m.name = doc.value("name", "");
  m.hidden_size = PositiveInt(Field(doc, "hidden_size", ""), "hidden_size");
  m.input_dim = PositiveInt(Field(doc, "input_dim", ""), "input_dim");
  m.train_rate_hz = doc.value("train_rate_hz", 44'100.0);
  const std::size_t h = m.hidden_size, d = m.input_dim;
  const json& lstm = Field(doc, "lstm", "");
  m.w_input = Matrix(Field(lstm, "w_input", "lstm."), 4 * h, d, "lstm.w_input");
  m.w_recurrent =
      Matrix(Field(lstm, "w_recurrent", "lstm."), 4 * h, h, "lstm.w_recurrent");
  m.bias = Vector(Field(lstm, "bias", "lstm."), "lstm.bias");
  const json& dense = Field(doc, "dense", "");
  m.dense_hidden = Vector(Field(dense, "w_hidden", "dense."), "dense.w_hidden");
  m.dense_input = dense.contains("w_input")
                      ? Vector(dense["w_input"], "dense.w_input")
                      : std::vector<double>(d, 0.0);
  const json& b = Field(dense, "bias", "dense.");
  if (b.is_array() && b.size() == 1 && b[0].is_number()) {
    m.dense_bias = b[0].get<double>();
  } else if (b.is_number()) {
    m.dense_bias = b.get<double>();
  } else {
    throw SchemaError("dense.bias", "expected a number");
  }
  return m;
}

RnnModel FromGuitarMl(const json& doc) {
  const json& md = doc["model_data"];
  const json& sd = Field(doc, "state_dict", "");
  RnnModel m;
  m.name = doc.value("name", "");
  if (md.contains("unit_type") && md["unit_type"] != "LSTM") {
    throw SchemaError("model_data.unit_type", "only LSTM is supported");
  }
  if (md.value("num_layers", 1) != 1) {
    throw SchemaError("model_data.num_layers", "only one layer is supported");
  }
  m.hidden_size =
      PositiveInt(Field(md, "hidden_size", "model_data."), "model_data.hidden_size");
  m.input_dim = md.contains("input_size")
                    ? PositiveInt(md["input_size"], "model_data.input_size")
                    : 1;
  m.train_rate_hz = md.value("samplerate", doc.value("samplerate", 44'100.0));
  const std::size_t h = m.hidden_size, d = m.input_dim;
  m.w_input = Matrix(Field(sd, "rec.weight_ih_l0", "state_dict."), 4 * h, d,
                     "state_dict.rec.weight_ih_l0");
  m.w_recurrent = Matrix(Field(sd, "rec.weight_hh_l0", "state_dict."), 4 * h, h,
                         "state_dict.rec.weight_hh_l0");
  m.bias.assign(4 * h, 0.0);
  for (const char* key : {"rec.bias_ih_l0", "rec.bias_hh_l0"}) {
    if (!sd.contains(key)) continue;
    const auto b = Vector(sd[key], std::string("state_dict.") + key);
    if (b.size() != 4 * h) {
      throw SchemaError(std::string("state_dict.") + key, "expected 4H entries");
    }
    for (std::size_t i = 0; i < b.size(); ++i) m.bias[i] += b[i];
  }
  const auto lin = Matrix(Field(sd, "lin.weight", "state_dict."), 1, h,
                          "state_dict.lin.weight");
  m.dense_hidden = lin;
  if (sd.contains("lin.bias")) {
    const auto b = Vector(sd["lin.bias"], "state_dict.lin.bias");
    if (b.size() != 1) throw SchemaError("state_dict.lin.bias", "expected 1 entry");
    m.dense_bias = b[0];
  }
  m.dense_input.assign(d, 0.0);
  if (md.value("skip", 0) != 0) m.dense_input[0] = 1.0;
  return m;
}

RnnModel FromAidaX(const json& doc) {
  const json& layers = doc["layers"];
  if (!layers.is_array()) throw SchemaError("layers", "expected an array");
  const json* lstm = nullptr;
  const json* dense = nullptr;
  for (const json& layer : layers) {
    const std::string type = layer.value("type", "");
    if (type == "lstm") {
      if (lstm) throw SchemaError("layers", "only one lstm layer is supported");
      lstm = &layer;
    } else if (type == "dense") {
      dense = &layer;
    } else {
      throw SchemaError("layers", "unsupported layer type '" + type + "'");
    }
  }
  if (!lstm) throw SchemaError("layers", "no lstm layer");
  if (!dense) throw SchemaError("layers", "no dense layer");
  const json& lw = Field(*lstm, "weights", "layers[lstm].");
  if (!lw.is_array() || lw.size() != 3) {
    throw SchemaError("layers[lstm].weights", "expected [W, U, b]");
  }
  RnnModel m;
  m.name = doc.value("name", "");
  if (!lw[1].is_array() || lw[1].empty()) {
    throw SchemaError("layers[lstm].weights[1]", "empty recurrent kernel");
  }
  m.hidden_size = static_cast<int>(lw[1].size());
  m.input_dim = lw[0].is_array() ? static_cast<int>(lw[0].size()) : 0;
  if (m.input_dim < 1) throw SchemaError("layers[lstm].weights[0]", "empty kernel");
  m.train_rate_hz = doc.value("samplerate", doc.value("sample_rate", 48'000.0));
  const std::size_t h = m.hidden_size, d = m.input_dim;
  m.w_input = Transposed(Matrix(lw[0], d, 4 * h, "layers[lstm].weights[0]"), d, 4 * h);
  m.w_recurrent =
      Transposed(Matrix(lw[1], h, 4 * h, "layers[lstm].weights[1]"), h, 4 * h);
  m.bias = Vector(lw[2], "layers[lstm].weights[2]");
  const json& dw = Field(*dense, "weights", "layers[dense].");
  if (!dw.is_array() || dw.size() != 2) {
    throw SchemaError("layers[dense].weights", "expected [W, b]");
  }
  m.dense_hidden = Matrix(dw[0], h, 1, "layers[dense].weights[0]");
  const auto b = Vector(dw[1], "layers[dense].weights[1]");
  if (b.size() != 1) throw SchemaError("layers[dense].weights[1]", "expected 1 entry");
  m.dense_bias = b[0];
  m.dense_input.assign(d, 0.0);
  if (doc.value("in_skip", 0) != 0) m.dense_input[0] = 1.0;
  return m;
}

// splitmix64, so the bundled models do not depend on a library's
// distribution algorithms.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  double Uniform(double lo, double hi) {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return lo + (hi - lo) * static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

constexpr unsigned long long kSeed8 = 8;
constexpr unsigned long long kSeed16 = 16;

}  // namespace

void RnnModel::Validate() const {
  if (hidden_size < 1) throw SchemaError("hidden_size", "must be positive");
  if (input_dim < 1) throw SchemaError("input_dim", "must be positive");
  if (!(train_rate_hz > 0.0)) throw SchemaError("train_rate_hz", "must be positive");
  const std::size_t h = hidden_size, d = input_dim;
  auto check = [](const std::vector<double>& v, std::size_t n, const char* f) {
    if (v.size() != n) {
      throw SchemaError(f, "expected " + std::to_string(n) + " values, got " +
                               std::to_string(v.size()));
    }
    for (double x : v) {
      if (!std::isfinite(x)) throw SchemaError(f, "non-finite weight");
    }
  };
  check(w_input, 4 * h * d, "lstm.w_input");
  check(w_recurrent, 4 * h * h, "lstm.w_recurrent");
  check(bias, 4 * h, "lstm.bias");
  check(dense_hidden, h, "dense.w_hidden");
  check(dense_input, d, "dense.w_input");
  if (!std::isfinite(dense_bias)) throw SchemaError("dense.bias", "non-finite");
}

double LstmStep(const RnnModel& model, std::span<const double> prev,
                std::span<const double> x, std::span<double> next) {
  const std::size_t h = model.hidden_size;
  const std::size_t d = model.input_dim;
  thread_local std::vector<double> z;
  z.resize(4 * h);
  const double* hp = prev.data();
  for (std::size_t r = 0; r < 4 * h; ++r) {
    double acc = model.bias[r];
    const double* wi = model.w_input.data() + r * d;
    for (std::size_t j = 0; j < d; ++j) acc += wi[j] * x[j];
    const double* wr = model.w_recurrent.data() + r * h;
    for (std::size_t j = 0; j < h; ++j) acc += wr[j] * hp[j];
    z[r] = acc;
  }
  double y = model.dense_bias;
  for (std::size_t j = 0; j < d; ++j) y += model.dense_input[j] * x[j];
  for (std::size_t u = 0; u < h; ++u) {
    const double i = Sigmoid(z[u]);
    const double f = Sigmoid(z[h + u]);
    const double g = std::tanh(z[2 * h + u]);
    const double o = Sigmoid(z[3 * h + u]);
    const double c = f * prev[h + u] + i * g;
    const double hv = o * std::tanh(c);
    next[h + u] = c;
    next[u] = hv;
    y += model.dense_hidden[u] * hv;
  }
  return y;
}

double LstmStep(const RnnModel& model, RnnState& state,
                std::span<const double> x) {
  return LstmStep(model, state.values, x, state.values);
}

std::vector<double> LagrangeCoeffs(int k, double d) {
  if (k < 0) throw ArgumentError("lagrange: order must be >= 0");
  std::vector<double> c(k + 1, 1.0);
  for (int j = 0; j <= k; ++j) {
    for (int i = 0; i <= k; ++i) {
      if (i != j) c[j] *= (d - i) / static_cast<double>(j - i);
    }
  }
  return c;
}

SrirnnConfig SrirnnConfig::Make(int l, int m, int k) {
  if (l < 1 || m < 1) throw ArgumentError("srirnn: l and m must be >= 1");
  if (std::gcd(l, m) != 1) throw ArgumentError("srirnn: l and m not coprime");
  SrirnnConfig c;
  c.l = l;
  c.m = m;
  c.k = k;
  c.delta = static_cast<double>(l) / m - 1.0;
  c.coeffs = LagrangeCoeffs(k, c.delta);
  return c;
}

std::vector<double> ProcessPlain(const RnnModel& model,
                                 std::span<const double> signal,
                                 const RunOptions& options) {
  Frame frame(model, options);
  RnnState state(model.hidden_size);
  std::vector<double> out(signal.size());
  for (std::size_t n = 0; n < signal.size(); ++n) {
    out[n] = LstmStep(model, state, frame.With(signal[n]));
    CheckState(model, state.values, options.sample_offset + n);
  }
  return out;
}

std::vector<double> SrirnnProcess(const RnnModel& model,
                                  const SrirnnConfig& config,
                                  std::span<const double> signal,
                                  const RunOptions& options) {
  const std::size_t s = model.state_size();
  const std::size_t taps = config.coeffs.size();
  if (taps == 0) throw ArgumentError("srirnn: empty coefficient set");
  Frame frame(model, options);
  // history[j] is the state after step n - 1 - j.
  std::vector<std::vector<double>> history(taps, std::vector<double>(s, 0.0));
  std::vector<double> start(s);
  std::vector<double> out(signal.size());
  std::size_t newest = 0;  // ring index of history[0]
  for (std::size_t n = 0; n < signal.size(); ++n) {
    std::fill(start.begin(), start.end(), 0.0);
    for (std::size_t j = 0; j < taps; ++j) {
      const double c = config.coeffs[j];
      const std::vector<double>& past = history[(newest + j) % taps];
      for (std::size_t i = 0; i < s; ++i) start[i] += c * past[i];
    }
    newest = (newest + taps - 1) % taps;
    out[n] = LstmStep(model, start, frame.With(signal[n]), history[newest]);
    CheckState(model, history[newest], options.sample_offset + n);
  }
  return out;
}

PipelineOutput OversampledProcess(const RnnModel& model, int m,
                                  const Converter& interp,
                                  const Converter& decim,
                                  std::span<const double> signal,
                                  const RunOptions& options) {
  if (m < 1) throw ArgumentError("oversampling factor must be >= 1");
  if (m == 1) return {ProcessPlain(model, signal, options), 0.0};
  if (interp.ratio != Ratio{m, 1} || decim.ratio != Ratio{1, m}) {
    throw ArgumentError("oversampling converters do not match the factor");
  }
  const std::vector<double> up = interp(signal);
  Frame frame(model, options);
  const std::size_t s = model.state_size();
  // Ring of the last m states; the slot being overwritten is the state
  // from m steps back.
  std::vector<std::vector<double>> ring(m, std::vector<double>(s, 0.0));
  std::vector<double> y(up.size());
  for (std::size_t n = 0; n < up.size(); ++n) {
    std::vector<double>& slot = ring[n % m];
    y[n] = LstmStep(model, slot, frame.With(up[n]), slot);
    CheckState(model, slot, options.sample_offset + n);
  }
  PipelineOutput out;
  out.signal = decim(y);
  out.latency_s = interp.latency_output_samples / (m * model.train_rate_hz) +
                  decim.latency_output_samples / model.train_rate_hz;
  return out;
}

PipelineOutput ResampledProcess(const RnnModel& model, const Converter& to_model,
                                const Converter& from_model,
                                std::span<const double> signal,
                                const RunOptions& options) {
  if (to_model.ratio.l * from_model.ratio.l != to_model.ratio.m * from_model.ratio.m) {
    throw ArgumentError("resampling converters are not inverse ratios");
  }
  const std::vector<double> in = to_model(signal);
  PipelineOutput out;
  out.signal = from_model(ProcessPlain(model, in, options));
  const double foreign_rate = model.train_rate_hz * from_model.ratio.value();
  out.latency_s = to_model.latency_output_samples / model.train_rate_hz +
                  from_model.latency_output_samples / foreign_rate;
  return out;
}

RnnModel ModelFromJson(const json& doc) {
  if (!doc.is_object()) throw SchemaError("(root)", "expected an object");
  RnnModel m;
  if (doc.contains("model_data")) {
    m = FromGuitarMl(doc);
  } else if (doc.contains("layers")) {
    m = FromAidaX(doc);
  } else if (doc.contains("lstm")) {
    m = FromCanonical(doc);
  } else {
    throw SchemaError("(root)", "unrecognized model layout");
  }
  m.Validate();
  return m;
}

json ModelToJson(const RnnModel& model) {
  model.Validate();
  const std::size_t h = model.hidden_size, d = model.input_dim;
  json doc;
  doc["name"] = model.name;
  doc["hidden_size"] = model.hidden_size;
  doc["input_dim"] = model.input_dim;
  doc["train_rate_hz"] = model.train_rate_hz;
  doc["lstm"]["w_input"] = MatrixJson(model.w_input, 4 * h, d);
  doc["lstm"]["w_recurrent"] = MatrixJson(model.w_recurrent, 4 * h, h);
  doc["lstm"]["bias"] = model.bias;
  doc["dense"]["w_hidden"] = model.dense_hidden;
  doc["dense"]["w_input"] = model.dense_input;
  doc["dense"]["bias"] = model.dense_bias;
  return doc;
}

RnnModel LoadModel(const std::string& path) {
  if (path == "builtin:seeded-8") return SeededModel(8, kSeed8);
  if (path == "builtin:seeded-16") return SeededModel(16, kSeed16);
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SchemaError("(document)", e.what());
  }
  RnnModel m = ModelFromJson(doc);
  if (m.name.empty()) m.name = path;
  return m;
}

void SaveModel(const RnnModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  out << ModelToJson(model).dump(1) << "\n";
}

// Strong input weights drive the gates into saturation at g = 0.1, so the
// model distorts (and aliases) like an overdrive; small recurrent weights
// keep the state map contractive.
RnnModel SeededModel(int hidden_size, unsigned long long seed) {
  if (hidden_size < 1) throw ArgumentError("seeded model: hidden_size >= 1");
  SplitMix rng(seed);
  RnnModel m;
  m.name = "seeded-" + std::to_string(hidden_size);
  m.hidden_size = hidden_size;
  m.input_dim = 1;
  m.train_rate_hz = 44'100.0;
  const std::size_t h = hidden_size;
  const double rec = 0.6 / std::sqrt(static_cast<double>(h));
  m.w_input.resize(4 * h);
  m.w_recurrent.resize(4 * h * h);
  m.bias.resize(4 * h);
  for (double& w : m.w_input) w = rng.Uniform(-40.0, 40.0);
  for (double& w : m.w_recurrent) w = rng.Uniform(-rec, rec);
  for (double& b : m.bias) b = rng.Uniform(-0.5, 0.5);
  // Forget gates lean open so the state carries some memory.
  for (std::size_t u = 0; u < h; ++u) m.bias[h + u] += 1.0;
  m.dense_hidden.resize(h);
  for (double& w : m.dense_hidden) w = rng.Uniform(-1.0, 1.0) / std::sqrt(static_cast<double>(h));
  m.dense_input = {0.0};
  m.dense_bias = rng.Uniform(-0.05, 0.05);
  return m;
}

std::vector<std::string> BundledModelNames() {
  return {"builtin:seeded-8", "builtin:seeded-16"};
}

bool IsBundledModelName(const std::string& name) {
  return name == "builtin:seeded-8" || name == "builtin:seeded-16";
}

CostReport SrirnnModelCost(const RnnModel& model, int k, int l, int m,
                           bool include_cell) {
  CostReport r = SrirnnCost(model.state_size(), k, l, m, model.train_rate_hz,
                            kReferenceRateHz);
  if (include_cell) {
    r.cell_ops = LstmCellOps(model.hidden_size, model.input_dim) *
                 model.train_rate_hz * l / m / kReferenceRateHz;
  }
  return r;
}

}  // namespace mrafx
