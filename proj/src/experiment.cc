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

#include "mrafx/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <tuple>

#include "mrafx/errors.h"
#include "mrafx/kernels.h"

namespace mrafx {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Splits on commas outside braces.
std::vector<std::string> SplitTopLevel(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(Trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!Trim(cur).empty() || !parts.empty()) parts.push_back(Trim(cur));
  return parts;
}

int ParseInt(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw ArgumentError("method: " + what + " must be an integer, got '" + s + "'");
  }
  return v;
}

bool HasNonlinearPhase(const std::string& method) {
  return method == "hb-wb-kaiser" || method == "hb-wb-remez" ||
         method == "c-hb-iir" || method == "eq-linterp" || method == "cic";
}

struct GroundTruth {
  HarmonicSet h;
  std::string error;  // non-empty when the reference run failed
};

GroundTruth ComputeGroundTruth(const RnnModel& model, double f0_hz,
                               const ExperimentConfig& config) {
  GroundTruth gt;
  try {
    const double rate = model.train_rate_hz;
    const std::vector<double> tone = MakeTestTone(f0_hz, rate, config.g, config);
    const std::vector<double> y = ProcessPlain(model, tone);
    const Spectrum s = AnalyzeSpectrum(
        std::span(y).subspan(config.preroll, config.frame_length), rate,
        config.preroll);
    gt.h = ExtractHarmonics(s, f0_hz);
  } catch (const std::exception& e) {
    gt.error = std::string("reference: ") + e.what();
  }
  return gt;
}

CellResult Score(const RnnModel& model, const std::string& model_label,
                 const MethodSpec& method, double f0_hz,
                 const ExperimentConfig& config, const GroundTruth& gt) {
  CellResult row;
  row.model = model_label;
  row.method = method.Label();
  row.f0_hz = f0_hz;
  const double train = model.train_rate_hz;
  const double inference =
      config.inference_rate_hz > 0.0 ? config.inference_rate_hz : train;
  const double input_rate =
      method.kind == MethodSpec::Kind::kOversample ? train : inference;
  if (method.kind == MethodSpec::Kind::kOversample) {
    row.l = method.m;
    row.m = 1;
  } else {
    const Ratio r = RateRatio(train, inference);
    row.l = r.l;
    row.m = r.m;
  }
  auto fail = [&](const std::string& status) {
    row.metrics = {kNaN, kNaN, kNaN, kNaN};
    row.status = status;
    return row;
  };
  if (!gt.error.empty()) return fail("error: " + gt.error);

  try {
    const std::vector<double> tone =
        MakeTestTone(f0_hz, input_rate, config.g, config);
    const MethodOutput out = RunMethod(model, method, tone, input_rate);
    if (out.signal.size() < config.preroll + config.frame_length) {
      return fail("error: output shorter than the analysis frame");
    }
    const Spectrum s = AnalyzeSpectrum(
        std::span(out.signal).subspan(config.preroll, config.frame_length),
        out.rate_hz, config.preroll);
    const HarmonicSet h = ExtractHarmonics(s, f0_hz);
    HarmonicSet aligned = DelayHarmonics(h, -out.latency_s);
    if (out.nonlinear_phase) {
      const double tau =
          EstimateDelay(gt.h, aligned, std::min(0.5 / f0_hz, 1e-3));
      aligned = DelayHarmonics(aligned, -tau);
    }
    const std::size_t n = config.frame_length;
    const auto y_bl = ResynthBandlimited(gt.h, train, n, config.preroll);
    const auto y_bl_prime = ResynthBandlimited(aligned, train, n, config.preroll);
    row.metrics.esr_db = Esr(y_bl, y_bl_prime);
    row.metrics.mesr_db = Mesr(gt.h, aligned);
    row.metrics.asr_db = Asr(s, h);
    row.metrics.nmr_db = Nmr(s, h);
  } catch (const InstabilityFault& e) {
    return fail("unstable");
  } catch (const std::exception& e) {
    return fail(std::string("error: ") + e.what());
  }
  return row;
}

std::string FormatNumber(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> StringList(const json& v, const std::string& key) {
  if (v.is_string()) return SplitTopLevel(v.get<std::string>());
  if (!v.is_array()) throw ArgumentError("config: " + key + " must be a list");
  std::vector<std::string> out;
  for (const json& e : v) {
    if (!e.is_string()) throw ArgumentError("config: " + key + " must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<double> NumberList(const json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>()};
  if (v.is_string()) {
    std::vector<double> out;
    for (const std::string& p : SplitTopLevel(v.get<std::string>())) {
      try {
        out.push_back(std::stod(p));
      } catch (const std::exception&) {
        throw ArgumentError("config: " + key + " holds a non-number '" + p + "'");
      }
    }
    return out;
  }
  if (!v.is_array()) throw ArgumentError("config: " + key + " must be a list");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) throw ArgumentError("config: " + key + " must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

double Number(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return std::stod(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw ArgumentError("config: " + key + " must be a number");
}

std::size_t Count(const json& v, const std::string& key) {
  const double d = Number(v, key);
  if (d < 0.0 || d != std::floor(d)) {
    throw ArgumentError("config: " + key + " must be a non-negative integer");
  }
  return static_cast<std::size_t>(d);
}

void ApplyKey(ExperimentConfig& c, const std::string& key, const json& v) {
  if (key == "models") {
    c.models = StringList(v, key);
  } else if (key == "methods") {
    c.methods = StringList(v, key);
  } else if (key == "f0_hz") {
    c.f0_hz = NumberList(v, key);
  } else if (key == "g") {
    c.g = Number(v, key);
  } else if (key == "inference_rate_hz") {
    c.inference_rate_hz = Number(v, key);
  } else if (key == "frame_length") {
    c.frame_length = Count(v, key);
  } else if (key == "preroll") {
    c.preroll = Count(v, key);
  } else if (key == "tail") {
    c.tail = Count(v, key);
  } else if (key == "output_dir") {
    if (!v.is_string()) throw ArgumentError("config: output_dir must be a string");
    c.output_dir = v.get<std::string>();
  } else {
    throw ArgumentError("config: unknown key '" + key + "'");
  }
}

}  // namespace

MethodSpec MethodSpec::Parse(const std::string& descriptor) {
  const std::string d = Trim(descriptor);
  MethodSpec spec;
  const auto brace = d.find('{');
  const std::string head = d.substr(0, brace);
  std::vector<std::string> args;
  if (brace != std::string::npos) {
    if (d.back() != '}') throw ArgumentError("method '" + d + "': missing '}'");
    args = SplitTopLevel(d.substr(brace + 1, d.size() - brace - 2));
  }
  if (head == "naive") {
    if (!args.empty()) throw ArgumentError("method naive takes no arguments");
    spec.kind = Kind::kNaive;
  } else if (head == "srirnn") {
    if (args.size() != 1) throw ArgumentError("method srirnn{K} needs K");
    spec.kind = Kind::kSrirnn;
    spec.k = ParseInt(args[0], "K");
    if (spec.k < 0) throw ArgumentError("method srirnn: K must be >= 0");
  } else if (head == "resample") {
    if (args.size() != 1 || args[0].empty()) {
      throw ArgumentError("method resample{D} needs a design");
    }
    spec.kind = Kind::kResample;
    spec.design = args[0];
  } else if (head == "oversample") {
    if (args.size() != 3) {
      throw ArgumentError("method oversample{M,I,D} needs three arguments");
    }
    spec.kind = Kind::kOversample;
    spec.m = ParseInt(args[0], "M");
    if (spec.m < 1) throw ArgumentError("method oversample: M must be >= 1");
    spec.interp = args[1];
    spec.decim = args[2];
  } else {
    throw ArgumentError("unknown method '" + d + "'");
  }
  return spec;
}

std::string MethodSpec::Label() const {
  switch (kind) {
    case Kind::kNaive:
      return "naive";
    case Kind::kSrirnn:
      return "srirnn{" + std::to_string(k) + "}";
    case Kind::kResample:
      return "resample{" + design + "}";
    case Kind::kOversample:
      return "oversample{" + std::to_string(m) + "," + interp + "," + decim + "}";
  }
  return "";
}

ExperimentConfig ExperimentConfig::FromJson(const json& doc) {
  if (!doc.is_object()) throw ArgumentError("config: expected a JSON object");
  ExperimentConfig c;
  for (auto it = doc.begin(); it != doc.end(); ++it) ApplyKey(c, it.key(), it.value());
  return c;
}

json ExperimentConfig::ToJson() const {
  json doc;
  doc["models"] = models;
  doc["methods"] = methods;
  doc["f0_hz"] = f0_hz;
  doc["g"] = g;
  doc["inference_rate_hz"] = inference_rate_hz;
  doc["frame_length"] = frame_length;
  doc["preroll"] = preroll;
  doc["tail"] = tail;
  doc["output_dir"] = output_dir;
  return doc;
}

void ExperimentConfig::Set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ArgumentError("--set expects key=value, got '" + assignment + "'");
  }
  const std::string key = Trim(assignment.substr(0, eq));
  const std::string raw = Trim(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = raw;
  ApplyKey(*this, key, value);
}

std::vector<double> MakeTestTone(double f0_hz, double rate_hz, double g,
                                 const ExperimentConfig& config) {
  const std::size_t n = config.preroll + config.frame_length + config.tail;
  std::vector<double> x = GenSineSamples(f0_hz, rate_hz, g, n);
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i < config.preroll; ++i) {
    x[i] *= 0.5 - 0.5 * std::cos(pi * static_cast<double>(i) / config.preroll);
  }
  for (std::size_t i = 0; i < config.tail; ++i) {
    x[n - 1 - i] *= 0.5 - 0.5 * std::cos(pi * static_cast<double>(i) / config.tail);
  }
  return x;
}

MethodOutput RunMethod(const RnnModel& model, const MethodSpec& method,
                       std::span<const double> signal, double input_rate_hz) {
  const double train = model.train_rate_hz;
  MethodOutput out;
  out.rate_hz = input_rate_hz;
  switch (method.kind) {
    case MethodSpec::Kind::kNaive:
      out.signal = ProcessPlain(model, signal);
      break;
    case MethodSpec::Kind::kSrirnn: {
      const Ratio r = RateRatio(train, input_rate_hz);
      const auto cfg = SrirnnConfig::Make(static_cast<int>(r.l),
                                          static_cast<int>(r.m), method.k);
      out.signal = SrirnnProcess(model, cfg, signal);
      break;
    }
    case MethodSpec::Kind::kResample: {
      const Converter to = MakeNamedConverter(method.design, input_rate_hz, train);
      const Converter from = MakeNamedConverter(method.design, train, input_rate_hz);
      PipelineOutput p = ResampledProcess(model, to, from, signal);
      out.signal = std::move(p.signal);
      out.latency_s = p.latency_s;
      out.nonlinear_phase = HasNonlinearPhase(method.design);
      break;
    }
    case MethodSpec::Kind::kOversample: {
      if (std::abs(input_rate_hz - train) > 1e-9 * train) {
        throw ArgumentError("oversampling runs at the model's training rate");
      }
      PipelineOutput p;
      if (method.m == 1) {
        p = OversampledProcess(model, 1, IdentityConverter(), IdentityConverter(),
                               signal);
      } else {
        const double high = train * method.m;
        p = OversampledProcess(model, method.m,
                               MakeNamedConverter(method.interp, train, high),
                               MakeNamedConverter(method.decim, high, train),
                               signal);
      }
      out.signal = std::move(p.signal);
      out.latency_s = p.latency_s;
      out.nonlinear_phase =
          method.m > 1 &&
          (HasNonlinearPhase(method.interp) || HasNonlinearPhase(method.decim));
      break;
    }
  }
  return out;
}

CellResult EvaluateCell(const RnnModel& model, const MethodSpec& method,
                        double f0_hz, const ExperimentConfig& config) {
  const GroundTruth gt = ComputeGroundTruth(model, f0_hz, config);
  return Score(model, model.name, method, f0_hz, config, gt);
}

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  kernels::ConfigureWorkers();
  ExperimentResult result;

  std::vector<MethodSpec> methods;
  for (const std::string& d : config.methods) methods.push_back(MethodSpec::Parse(d));
  if (config.frame_length < 4096) throw ArgumentError("config: frame_length < 4096");

  struct Loaded {
    std::string label;
    RnnModel model;
  };
  std::vector<Loaded> models;
  for (const std::string& path : config.models) {
    try {
      models.push_back({path, LoadModel(path)});
    } catch (const std::exception& e) {
      result.skipped.push_back(path + ": " + e.what());
      std::cerr << "skipping model " << path << ": " << e.what() << "\n";
    }
  }
  for (const Loaded& lm : models) {
    const double train = lm.model.train_rate_hz;
    const double inference =
        config.inference_rate_hz > 0.0 ? config.inference_rate_hz : train;
    for (double f0 : config.f0_hz) {
      if (!(f0 > 0.0) || !(f0 < 0.5 * std::min(train, inference))) {
        throw ArgumentError("config: f0 " + std::to_string(f0) +
                            " Hz is not below both Nyquist frequencies");
      }
    }
  }

  const std::size_t n_f0 = config.f0_hz.size();
  std::vector<GroundTruth> truths(models.size() * n_f0);
  const auto n_truths = static_cast<std::ptrdiff_t>(truths.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n_truths; ++i) {
    truths[i] = ComputeGroundTruth(models[i / n_f0].model, config.f0_hz[i % n_f0],
                                   config);
  }

  const std::size_t n_methods = methods.size();
  result.rows.resize(models.size() * n_methods * n_f0);
  const auto n_cells = static_cast<std::ptrdiff_t>(result.rows.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n_cells; ++i) {
    const std::size_t mi = i / (n_methods * n_f0);
    const std::size_t ki = (i / n_f0) % n_methods;
    const std::size_t fi = i % n_f0;
    result.rows[i] = Score(models[mi].model, models[mi].label, methods[ki],
                           config.f0_hz[fi], config, truths[mi * n_f0 + fi]);
  }
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const CellResult& a, const CellResult& b) {
                     return std::tie(a.model, a.method, a.f0_hz) <
                            std::tie(b.model, b.method, b.f0_hz);
                   });
  return result;
}

std::string CsvRow(const CellResult& r) {
  return CsvField(r.model) + "," + CsvField(r.method) + "," + std::to_string(r.l) +
         "," + std::to_string(r.m) + "," + FormatNumber(r.f0_hz) + "," +
         FormatNumber(r.metrics.esr_db) + "," + FormatNumber(r.metrics.mesr_db) +
         "," + FormatNumber(r.metrics.asr_db) + "," +
         FormatNumber(r.metrics.nmr_db) + "," + CsvField(r.status);
}

void WriteCsv(const ExperimentResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  out << kCsvHeader << "\n";
  for (const CellResult& r : result.rows) out << CsvRow(r) << "\n";
}

json Summarize(const ExperimentResult& result) {
  struct Acc {
    int rows = 0;
    int faults = 0;
    int errors = 0;
    std::array<double, 4> sum{};
    std::array<const CellResult*, 4> worst{};
  };
  std::map<std::pair<std::string, std::string>, Acc> acc;
  auto metric = [](const CellResult& r, int i) {
    const MetricsReport& m = r.metrics;
    return i == 0 ? m.esr_db : i == 1 ? m.mesr_db : i == 2 ? m.asr_db : m.nmr_db;
  };
  for (const CellResult& r : result.rows) {
    Acc& a = acc[{r.model, r.method}];
    if (r.status == "unstable") {
      ++a.faults;
      continue;
    }
    if (r.status != "ok") {
      ++a.errors;
      continue;
    }
    ++a.rows;
    for (int i = 0; i < 4; ++i) {
      a.sum[i] += metric(r, i);
      if (!a.worst[i] || metric(r, i) > metric(*a.worst[i], i)) a.worst[i] = &r;
    }
  }
  static const char* kNames[4] = {"esr_db", "mesr_db", "asr_db", "nmr_db"};
  json doc;
  doc["models"] = json::object();
  for (const auto& [key, a] : acc) {
    json entry;
    entry["rows"] = a.rows;
    entry["unstable"] = a.faults;
    entry["errors"] = a.errors;
    for (int i = 0; i < 4; ++i) {
      if (a.rows == 0) {
        entry["mean"][kNames[i]] = nullptr;
        entry["worst"][kNames[i]] = nullptr;
        continue;
      }
      entry["mean"][kNames[i]] = a.sum[i] / a.rows;
      entry["worst"][kNames[i]] = {{"f0_hz", a.worst[i]->f0_hz},
                                   {"value", metric(*a.worst[i], i)}};
    }
    doc["models"][key.first][key.second] = entry;
  }
  doc["skipped"] = result.skipped;
  return doc;
}

}  // namespace mrafx
