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

#include "mrafx/cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>

#include "CLI11.hpp"
#include "mrafx/analysis.h"
#include "mrafx/errors.h"
#include "mrafx/experiment.h"
#include "mrafx/filter_io.h"
#include "mrafx/kernels.h"
#include "mrafx/neural.h"
#include "mrafx/resamplers.h"
#include "mrafx/wav.h"

namespace mrafx {
namespace {

using nlohmann::json;

constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

const std::vector<std::string> kDesignNames = {"nb-kaiser", "nb-remez", "wb-kaiser",
                                               "wb-remez",  "hb-iir",   "hb-fir"};

Ratio ParseRatio(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    const long long l = std::stoll(text.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? text.size() : slash)) throw 0;
    long long m = 1;
    if (slash != std::string::npos) {
      const std::string rest = text.substr(slash + 1);
      m = std::stoll(rest, &used);
      if (used != rest.size()) throw 0;
    }
    if (l < 1 || m < 1) throw 0;
    const long long g = std::gcd(l, m);
    return {l / g, m / g};
  } catch (...) {
    throw ArgumentError("ratio must look like L/M with positive integers, got '" +
                        text + "'");
  }
}

// Composite response of a half-band followed by a wide-band stage, checked
// against the single-stage 44.1 kHz <-> 48 kHz requirements.
SpecReport ValidateComposite(const FirFilter& wb) {
  return ValidateResponse(TwoStageMagnitude(designs::HbIir(), wb),
                          0.5 * designs::kNbFilterRateHz,
                          designs::CriteriaFor(designs::NbRemezSpec()));
}

struct DesignArgs {
  std::string name;
  std::optional<double> fpb, fsb;
  double ap = 0.5;
  std::optional<double> as;
  double rate = 1.0;
  std::string method = "kaiser";
  std::optional<int> order;
  std::string output;
};

int CmdDesign(const DesignArgs& a, std::ostream& out) {
  json report;
  AnyFilter filter;
  SpecReport spec;
  if (!a.name.empty()) {
    if (a.fpb || a.fsb || a.as || a.order) {
      throw ArgumentError("a named design takes no band or order flags");
    }
    const double base = designs::kBaseRateHz;
    report["design"] = a.name;
    CostReport cost;
    if (a.name == "nb-kaiser" || a.name == "nb-remez") {
      const bool kaiser = a.name == "nb-kaiser";
      const FirFilter& f = kaiser ? designs::NbKaiser() : designs::NbRemez();
      const DesignSpecification s =
          kaiser ? designs::NbKaiserSpec() : designs::NbRemezSpec();
      filter = f;
      spec = ValidateAgainstSpec(f, designs::CriteriaFor(s));
      cost = MakeNamedResampler(a.name, base, 48'000.0)->Cost(base);
      report["order"] = f.order();
      if (!kaiser) {
        const RippleAmplitudes r = ComputeRippleAmplitudes(s.a_p, s.a_s);
        report["order_estimate"] = BellangerOrder(r.delta1, r.delta2, s.transition_width());
      }
    } else if (a.name == "wb-kaiser" || a.name == "wb-remez") {
      const bool kaiser = a.name == "wb-kaiser";
      const FirFilter& f = kaiser ? designs::WbKaiser() : designs::WbRemez();
      const DesignSpecification s =
          kaiser ? designs::WbKaiserSpec() : designs::WbRemezSpec();
      filter = f;
      spec = ValidateComposite(f);
      report["stage_spec"] = SpecReportToJson(ValidateAgainstSpec(f, designs::CriteriaFor(s)));
      cost = MakeNamedResampler(kaiser ? "hb-wb-kaiser" : "hb-wb-remez", base, 48'000.0)
                 ->Cost(base);
      report["order"] = f.order();
      if (!kaiser) {
        const RippleAmplitudes r = ComputeRippleAmplitudes(s.a_p, s.a_s);
        report["order_estimate"] = BellangerOrder(r.delta1, r.delta2, s.transition_width());
      }
    } else if (a.name == "hb-iir") {
      const HalfBandIir& f = designs::HbIir();
      filter = f;
      spec = ValidateAgainstSpec(f, designs::CriteriaFor(designs::NbRemezSpec()));
      cost = MakeHalfBandCascade(2, Direction::kInterpolate, HalfBandKind::kIir)
                 ->Cost(base, kReferenceRateHz);
      report["order"] = f.order();
      report["branch_sections"] = {f.branch0.size(), f.branch1.size()};
    } else if (a.name == "hb-fir") {
      const FirFilter& f = designs::HbFir();
      filter = f;
      spec = ValidateAgainstSpec(f, designs::CriteriaFor(designs::NbRemezSpec()));
      cost = MakeHalfBandCascade(2, Direction::kInterpolate, HalfBandKind::kFir)
                 ->Cost(base, kReferenceRateHz);
      const int centre = f.order() / 2;
      int nonzero = 0;
      for (int i = 0; i <= f.order(); ++i) {
        if (i != centre && f.coeffs[i] != 0.0) ++nonzero;
      }
      report["order"] = f.order();
      report["unique_coefficients"] = (nonzero + 1) / 2;
    } else {
      throw ArgumentError("unknown design '" + a.name + "'");
    }
    report["cost"] = CostReportToJson(cost);
  } else {
    if (!a.fpb || !a.fsb || !a.as) {
      throw ArgumentError("give a design name or --fpb, --fsb and --as");
    }
    DesignSpecification s{*a.fpb, *a.fsb, a.ap, *a.as, a.rate};
    s.Validate();
    SpecCriteria c;
    c.passband_hz = s.f_pb * a.rate;
    c.stopband_hz = s.f_sb * a.rate;
    c.max_passband_dev_db = a.ap;
    c.max_dc_dev_db = a.ap;
    c.min_stopband_atten_db = s.a_s - 0.5;
    FirFilter f;
    if (a.method == "kaiser") {
      f = DesignKaiserLowpass(s, a.order);
    } else if (a.method == "remez") {
      const RippleAmplitudes r = ComputeRippleAmplitudes(s.a_p, s.a_s);
      report["order_estimate"] = BellangerOrder(r.delta1, r.delta2, s.transition_width());
      f = a.order ? DesignEquirippleLowpass(s, *a.order, r.delta1 / r.delta2)
                  : DesignEquirippleToSpec(s, c);
    } else {
      throw ArgumentError("--method must be kaiser or remez");
    }
    f.rate_hz = a.rate;
    filter = f;
    spec = ValidateAgainstSpec(f, c);
    report["design"] = a.method;
    report["order"] = f.order();
    report["cost"] = CostReportToJson(FirCost(f.order(), 1, 1, a.rate, a.rate));
  }
  const std::string path =
      !a.output.empty() ? a.output : (a.name.empty() ? a.method : a.name) + ".json";
  SaveFilter(filter, path);
  report["file"] = path;
  report["spec"] = SpecReportToJson(spec);
  report["passes"] = spec.passes;
  out << report.dump(2) << "\n";
  return spec.passes ? 0 : kExitFailed;
}

struct ResampleArgs {
  std::string input, output;
  std::optional<double> from_rate;
  double to_rate = 0.0;
  std::string method = "fft";
  bool report_cost = false;
  std::string format;
};

int CmdResample(const ResampleArgs& a, std::ostream& out, std::ostream& err) {
  const WavData wav = ReadWav(a.input);
  const double from = a.from_rate.value_or(wav.rate_hz);
  if (a.from_rate && *a.from_rate != wav.rate_hz) {
    err << "note: treating " << a.input << " as " << from << " Hz (header says "
        << wav.rate_hz << " Hz)\n";
  }
  const Converter conv = MakeNamedConverter(a.method, from, a.to_rate);
  std::vector<double> y = conv(wav.samples);
  if (a.method == "fft") {
    const long long n = static_cast<long long>(wav.samples.size());
    y.resize(static_cast<std::size_t>((n * conv.ratio.l + conv.ratio.m - 1) / conv.ratio.m));
  }
  const WavFormat format = a.format.empty() ? wav.format : ParseWavFormat(a.format);
  WriteWav(a.output, y, a.to_rate, format);
  if (a.report_cost) {
    if (a.method == "fft") {
      out << json{{"method", "fft"}, {"note", "offline; no streaming cost"}}.dump(2)
          << "\n";
    } else {
      out << CostReportToJson(MakeNamedResampler(a.method, from, a.to_rate)->Cost(from))
                 .dump(2)
          << "\n";
    }
  }
  return 0;
}

struct ProcessArgs {
  std::string input, output;
  std::string model;
  std::string mode = "naive";
  std::string spectrum;
  std::string format;
};

int CmdProcess(const ProcessArgs& a, std::ostream& out, std::ostream& err) {
  const WavData wav = ReadWav(a.input);
  const RnnModel model = LoadModel(a.model);
  const MethodSpec method = MethodSpec::Parse(a.mode);
  MethodOutput y;
  try {
    y = RunMethod(model, method, wav.samples, wav.rate_hz);
  } catch (const InstabilityFault& e) {
    err << "unstable: " << e.what() << "\n";
    return kExitFailed;
  }
  const WavFormat format = a.format.empty() ? wav.format : ParseWavFormat(a.format);
  WriteWav(a.output, y.signal, y.rate_hz, format);
  if (!a.spectrum.empty()) {
    const std::size_t n = std::min<std::size_t>(y.signal.size(), 1u << 17);
    WriteSpectrumText(AnalyzeTail(y.signal, y.rate_hz, n), a.spectrum);
  }
  out << json{{"model", model.name},
              {"mode", method.Label()},
              {"rate_hz", y.rate_hz},
              {"latency_s", y.latency_s},
              {"samples", y.signal.size()}}
             .dump(2)
      << "\n";
  return 0;
}

struct RunArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string output;
};

int CmdRun(const RunArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw ArgumentError("cannot read " + a.config);
    json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) throw ArgumentError(a.config + ": invalid JSON");
    config = ExperimentConfig::FromJson(doc);
  }
  for (const std::string& s : a.sets) config.Set(s);
  if (!a.output.empty()) config.output_dir = a.output;
  std::filesystem::create_directories(config.output_dir);

  const ExperimentResult result = RunExperiment(config);
  const std::filesystem::path dir(config.output_dir);
  WriteCsv(result, (dir / "results.csv").string());
  json summary = Summarize(result);
  summary["config"] = config.ToJson();
  std::ofstream((dir / "summary.json").string()) << summary.dump(2) << "\n";

  int errors = 0, unstable = 0;
  for (const CellResult& r : result.rows) {
    if (r.status == "unstable") ++unstable;
    else if (r.status != "ok") ++errors;
  }
  out << "wrote " << result.rows.size() << " rows to "
      << (dir / "results.csv").string() << " (" << unstable << " unstable, "
      << errors << " errors, " << result.skipped.size() << " models skipped)\n";
  for (const std::string& s : result.skipped) err << "skipped " << s << "\n";
  return errors == 0 && result.skipped.empty() ? 0 : kExitPartial;
}

struct CostArgs {
  // srirnn
  int k = 1;
  std::optional<int> s;
  std::string ratio = "160/147";
  double train_rate = kReferenceRateHz;
  std::string model;
  bool include_cell = false;
  int hidden = 0;
  int input_dim = 1;
  // resample
  std::string design;
  double from_rate = kReferenceRateHz;
  double to_rate = 48'000.0;
  // oversample
  int m = 2;
  std::string interp = "c-hb-iir";
  std::string decim = "c-hb-iir";
  double rate = kReferenceRateHz;
  // fir
  int order = 0;
};

int CmdCostSrirnn(const CostArgs& a, std::ostream& out) {
  const Ratio r = ParseRatio(a.ratio);
  CostReport cost;
  if (!a.model.empty()) {
    const RnnModel model = LoadModel(a.model);
    cost = SrirnnModelCost(model, a.k, static_cast<int>(r.l), static_cast<int>(r.m),
                           a.include_cell);
  } else {
    if (!a.s) throw ArgumentError("cost srirnn needs --s or --model");
    cost = SrirnnCost(*a.s, a.k, static_cast<int>(r.l), static_cast<int>(r.m),
                      a.train_rate);
    if (a.include_cell) {
      const int hidden = a.hidden > 0 ? a.hidden : *a.s / 2;
      cost.cell_ops = LstmCellOps(hidden, a.input_dim) * r.value() * a.train_rate /
                      cost.reference_rate_hz;
    }
  }
  out << CostReportToJson(cost).dump(2) << "\n";
  return 0;
}

int CmdCostResample(const CostArgs& a, std::ostream& out) {
  // One converter before the model and one after it, both counted as the
  // forward direction.
  const auto up = MakeNamedResampler(a.design, a.from_rate, a.to_rate);
  json doc = CostReportToJson(up->Cost(a.from_rate).Times(2));
  doc["method"] = a.design;
  out << doc.dump(2) << "\n";
  return 0;
}

int CmdCostOversample(const CostArgs& a, std::ostream& out) {
  if (a.m < 1) throw ArgumentError("--m must be >= 1");
  CostReport cost;
  if (a.m > 1) {
    const double high = a.rate * a.m;
    cost = MakeNamedResampler(a.interp, a.rate, high)->Cost(a.rate) +
           MakeNamedResampler(a.decim, high, a.rate)->Cost(high);
  }
  json doc = CostReportToJson(cost);
  if (a.include_cell) {
    if (a.hidden < 1) throw ArgumentError("--include-cell needs --hidden");
    doc["cell_ops"] = LstmCellOps(a.hidden, a.input_dim) * a.m * a.rate / kReferenceRateHz;
  }
  out << doc.dump(2) << "\n";
  return 0;
}

int CmdCostFir(const CostArgs& a, std::ostream& out) {
  const Ratio r = ParseRatio(a.ratio);
  out << CostReportToJson(FirCost(a.order, static_cast<int>(r.l), static_cast<int>(r.m),
                                  kReferenceRateHz, a.rate))
             .dump(2)
      << "\n";
  return 0;
}

}  // namespace

json CostReportToJson(const CostReport& r) {
  json doc = {{"mpus", r.mpus},
              {"apus", r.apus},
              {"total_ops", r.total_ops},
              {"latency_samples", r.latency_samples},
              {"latency_rate_hz", r.latency_rate_hz},
              {"latency_ms", r.latency_ms},
              {"reference_rate_hz", r.reference_rate_hz}};
  if (r.cell_ops) doc["cell_ops"] = *r.cell_ops;
  return doc;
}

json SpecReportToJson(const SpecReport& r) {
  return {{"passband_dev_db", r.passband_dev_db},
          {"stopband_atten_db", r.stopband_atten_db},
          {"dc_gain_db", r.dc_gain_db},
          {"passband_ok", r.passband_ok},
          {"stopband_ok", r.stopband_ok},
          {"dc_ok", r.dc_ok},
          {"passes", r.passes}};
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Multirate processing for recurrent audio models"};
  app.name("mrafx");
  app.require_subcommand(1);
  std::function<int()> action;

  DesignArgs design;
  auto* d = app.add_subcommand("design", "Design a filter, validate it and write it as JSON");
  d->add_option("name", design.name, "Reference design")
      ->check(CLI::IsMember(kDesignNames));
  d->add_option("--fpb", design.fpb, "Passband edge (cycles/sample, or Hz with --rate)");
  d->add_option("--fsb", design.fsb, "Stopband edge");
  d->add_option("--ap", design.ap, "Peak-to-peak passband ripple, dB");
  d->add_option("--as", design.as, "Stopband attenuation, dB");
  d->add_option("--rate", design.rate, "Filter rate; edges are divided by it")
      ->check(CLI::PositiveNumber);
  d->add_option("--method", design.method, "kaiser or remez");
  d->add_option("--order", design.order, "Fixed (even) order");
  d->add_option("-o,--output", design.output, "Filter file (default <name>.json)");
  d->callback([&] {
    action = [&] {
      DesignArgs a = design;
      if (a.fpb && a.rate != 1.0) *a.fpb /= a.rate;
      if (a.fsb && a.rate != 1.0) *a.fsb /= a.rate;
      return CmdDesign(a, out);
    };
  });

  ResampleArgs resample;
  auto* r = app.add_subcommand("resample", "Resample a mono WAV file");
  r->add_option("input", resample.input)->required();
  r->add_option("output", resample.output)->required();
  r->add_option("--from-rate", resample.from_rate, "Input rate (default: header)");
  r->add_option("--to-rate", resample.to_rate)->required()->check(CLI::PositiveNumber);
  r->add_option("--method", resample.method)
      ->check(CLI::IsMember({"nb-kaiser", "nb-remez", "hb-wb-kaiser", "hb-wb-remez",
                             "c-hb-iir", "c-hb-fir", "eq-linterp", "cic", "fft"}));
  r->add_flag("--report-cost", resample.report_cost, "Print the CostReport as JSON");
  r->add_option("--format", resample.format, "16, 24 or 32f (default: input's)");
  r->callback([&] { action = [&] { return CmdResample(resample, out, err); }; });

  ProcessArgs process;
  auto* p = app.add_subcommand("process", "Run a mono WAV file through a model");
  p->add_option("input", process.input)->required();
  p->add_option("output", process.output)->required();
  p->add_option("--model", process.model, "Model file or builtin:seeded-8/16")->required();
  p->add_option("--mode", process.mode,
                "naive | srirnn{K} | resample{D} | oversample{M,I,D}");
  p->add_option("--spectrum", process.spectrum, "Write the output spectrum (Hz, dB)");
  p->add_option("--format", process.format, "16, 24 or 32f (default: input's)");
  p->callback([&] { action = [&] { return CmdProcess(process, out, err); }; });

  RunArgs run;
  auto* b = app.add_subcommand("run", "Batch tone experiments to CSV and JSON");
  b->add_option("--config", run.config, "JSON config");
  b->add_option("--set", run.sets, "key=value override (repeatable)");
  b->add_option("--output", run.output, "Output directory");
  b->callback([&] { action = [&] { return CmdRun(run, out, err); }; });

  CostArgs cost;
  auto* c = app.add_subcommand("cost", "Operation and latency accounting");
  c->require_subcommand(1);
  auto* cs = c->add_subcommand("srirnn", "Fractional state delay");
  cs->add_option("--k", cost.k)->check(CLI::NonNegativeNumber);
  cs->add_option("--s", cost.s, "State size (hidden + cell)");
  cs->add_option("--ratio", cost.ratio, "L/M");
  cs->add_option("--train-rate", cost.train_rate);
  cs->add_option("--model", cost.model, "Take the state size from a model");
  cs->add_flag("--include-cell", cost.include_cell, "Attach the cell estimate");
  cs->add_option("--hidden", cost.hidden, "Hidden size for the cell estimate");
  cs->add_option("--input-dim", cost.input_dim);
  cs->callback([&] { action = [&] { return CmdCostSrirnn(cost, out); }; });
  auto* cr = c->add_subcommand("resample", "Converters before and after the model");
  cr->add_option("design", cost.design)->required();
  cr->add_option("--from-rate", cost.from_rate);
  cr->add_option("--to-rate", cost.to_rate);
  cr->callback([&] { action = [&] { return CmdCostResample(cost, out); }; });
  auto* co = c->add_subcommand("oversample", "Interpolator and decimator by M");
  co->add_option("--m", cost.m);
  co->add_option("--interp", cost.interp);
  co->add_option("--decim", cost.decim);
  co->add_option("--rate", cost.rate, "Base rate");
  co->add_flag("--include-cell", cost.include_cell);
  co->add_option("--hidden", cost.hidden);
  co->add_option("--input-dim", cost.input_dim);
  co->callback([&] { action = [&] { return CmdCostOversample(cost, out); }; });
  auto* cf = c->add_subcommand("fir", "Polyphase FIR converter");
  cf->add_option("--order", cost.order)->required()->check(CLI::NonNegativeNumber);
  cf->add_option("--ratio", cost.ratio, "L/M");
  cf->add_option("--rate", cost.rate, "Input rate");
  cf->callback([&] { action = [&] { return CmdCostFir(cost, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  kernels::ConfigureWorkers();
  try {
    return action ? action() : kExitUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
}

}  // namespace mrafx
