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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion with
// indented details. Exits non-zero only for failures outside the known
// shortfalls listed in README.md (NB-Kaiser stopband depth, EQ-Linterp and
// CIC passband droop).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mrafx/analysis.h"
#include "mrafx/cost.h"
#include "mrafx/errors.h"
#include "mrafx/experiment.h"
#include "mrafx/filter_design.h"
#include "mrafx/neural.h"
#include "mrafx/resamplers.h"

namespace mrafx {
namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  // Set when every failed check is one of the documented shortfalls.
  bool known = true;
  std::vector<std::string> details;

  void Check(bool ok, const std::string& what, bool is_known = false) {
    if (!ok) {
      pass = false;
      if (!is_known) known = false;
    }
    details.push_back(std::string(ok ? "ok   " : (is_known ? "known " : "FAIL ")) + what);
  }
  void Note(const std::string& what) { details.push_back("     " + what); }
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

bool TwoDecimals(double value, double expected) {
  return std::abs(std::round(value * 100.0) - std::round(expected * 100.0)) < 0.5;
}

Outcome TableOne() {
  Outcome o;
  struct Row {
    const char* name;
    int n, l, m;
    double input_rate, mpus, apus, latency_ms;
  };
  const Row rows[] = {
      {"NB-Kaiser", 3318, 160, 147, kReferenceRateHz, 22.58, 21.49, 0.235},
      {"NB-Remez", 2554, 160, 147, kReferenceRateHz, 17.38, 16.29, 0.181},
      {"WB-Kaiser", 916, 80, 147, 2 * kReferenceRateHz, 12.48, 11.39, 0.065},
      {"WB-Remez", 698, 80, 147, 2 * kReferenceRateHz, 9.51, 8.42, 0.049},
  };
  for (const Row& r : rows) {
    const CostReport c = FirCost(r.n, r.l, r.m, kReferenceRateHz, r.input_rate);
    o.Check(TwoDecimals(c.mpus, r.mpus) && TwoDecimals(c.apus, r.apus) &&
                std::abs(c.latency_ms - r.latency_ms) < 0.0005,
            Fmt("%-9s N=%d: MPU %.2f APU %.2f latency %.3f ms", r.name, r.n, c.mpus,
                c.apus, c.latency_ms));
  }
  return o;
}

Outcome TableTwo() {
  Outcome o;
  struct Row {
    const char* name;
    int k, l, m;
    double train_rate, expected;
  };
  const Row rows[] = {
      {"LIDL", 1, 160, 147, kReferenceRateHz, 261.22},
      {"CIDL", 3, 160, 147, kReferenceRateHz, 609.52},
      {"LEDL", 1, 147, 160, 48'000.0, 240.0},
      {"CEDL", 3, 147, 160, 48'000.0, 560.0},
  };
  for (const Row& r : rows) {
    const double ops = SrirnnCost(80, r.k, r.l, r.m, r.train_rate).total_ops;
    o.Check(TwoDecimals(ops, r.expected), Fmt("%s: %.2f ops/sample", r.name, ops));
  }
  return o;
}

Outcome FilterOrders() {
  Outcome o;
  const int nb_kaiser = designs::NbKaiser().order();
  o.Check(nb_kaiser == 3318, Fmt("NB-Kaiser N=%d", nb_kaiser));
  const int wb_kaiser = designs::WbKaiser().order();
  o.Check(wb_kaiser == 916 || wb_kaiser == 918, Fmt("WB-Kaiser N=%d", wb_kaiser));
  const HalfBandIir& hb = designs::HbIir();
  const double hb_atten =
      ValidateAgainstSpec(hb, designs::CriteriaFor(designs::NbRemezSpec())).stopband_atten_db;
  o.Check(hb.order() == 13 && std::abs(hb_atten - 119.7) <= 0.3,
          Fmt("HB-IIR N=%d, stopband %.2f dB", hb.order(), hb_atten));
  const FirFilter& hbf = designs::HbFir();
  const int c = hbf.order() / 2;
  std::set<double> unique;
  for (int n = 0; n < c; ++n) {
    if (hbf.coeffs[n] != 0.0) unique.insert(hbf.coeffs[n]);
  }
  o.Check(hbf.order() == 54 && unique.size() == 14,
          Fmt("HB-FIR N=%d, %zu unique non-zero off-centre taps", hbf.order(), unique.size()));
  const RippleAmplitudes d = ComputeRippleAmplitudes(0.5, 120.0);
  const int nb = BellangerOrder(d.delta1, d.delta2, designs::NbRemezSpec().transition_width());
  const int wb = BellangerOrder(d.delta1, d.delta2, designs::WbRemezSpec().transition_width());
  o.Check(nb == 2544 && wb == 698, Fmt("Bellanger estimates %d and %d", nb, wb));
  return o;
}

Outcome SpecCompliance() {
  Outcome o;
  SpecCriteria c;
  c.passband_hz = 16'000.0;
  c.stopband_hz = 28'100.0;
  c.max_passband_dev_db = 0.5;
  c.min_stopband_atten_db = 119.0;
  c.grid_points = 16'384;
  const double nyquist = 0.5 * designs::kNbFilterRateHz;
  auto report = [&](const char* name, const SpecReport& r, bool shortfall_known) {
    // The Kaiser paths with the pinned order and beta fall ~0.1 dB short.
    const bool known = shortfall_known && r.passband_ok && r.dc_ok &&
                       r.stopband_atten_db >= c.min_stopband_atten_db - 0.5;
    o.Check(r.passband_ok && r.stopband_ok,
            Fmt("%-16s passband %.3f dB, stopband %.2f dB", name, r.passband_dev_db,
                r.stopband_atten_db),
            known);
  };
  report("NB-Kaiser", ValidateAgainstSpec(designs::NbKaiser(), c), true);
  report("NB-Remez", ValidateAgainstSpec(designs::NbRemez(), c), false);
  report("HB-IIR+WB-Kaiser",
         ValidateResponse(TwoStageMagnitude(designs::HbIir(), designs::WbKaiser()), nyquist, c),
         true);
  report("HB-IIR+WB-Remez",
         ValidateResponse(TwoStageMagnitude(designs::HbIir(), designs::WbRemez()), nyquist, c),
         false);
  return o;
}

// Harmonics 0.1 / k up to 16 kHz.
std::vector<double> RichTone(double f0, double rate_hz, std::size_t n) {
  HarmonicSet h;
  h.f0_hz = f0;
  for (int k = 1; k * f0 < 16'000.0; ++k) {
    h.amplitudes.push_back(0.1 / k);
    h.phases.push_back(0.3 * k);
  }
  return ResynthBandlimited(h, rate_hz, n);
}

std::vector<double> Noise(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

// Zero-stuff by l, convolve with h, keep every m-th sample, scale by l.
std::vector<double> DenseOracle(const std::vector<double>& x, const std::vector<double>& h,
                                int l, int m, std::size_t n_out) {
  std::vector<double> y(n_out, 0.0);
  for (std::size_t j = 0; j < n_out; ++j) {
    const long long n = static_cast<long long>(j) * m;
    double acc = 0.0;
    for (long long k = n % l; k < static_cast<long long>(h.size()) && k <= n; k += l) {
      const long long i = (n - k) / l;
      if (i < static_cast<long long>(x.size())) acc += h[k] * x[i];
    }
    y[j] = l * acc;
  }
  return y;
}

Outcome OracleEquivalence() {
  Outcome o;
  struct Case {
    const char* name;
    double from, to;
    bool fir;      // linear phase: checked for alignment too
    bool droops;   // crude baselines with built-in passband droop
  };
  const Case cases[] = {
      {"nb-kaiser", 44'100, 48'000, true, false},
      {"nb-kaiser", 48'000, 44'100, true, false},
      {"nb-remez", 44'100, 48'000, true, false},
      {"nb-remez", 48'000, 44'100, true, false},
      {"hb-wb-kaiser", 44'100, 48'000, false, false},
      {"hb-wb-kaiser", 48'000, 44'100, false, false},
      {"hb-wb-remez", 44'100, 48'000, false, false},
      {"hb-wb-remez", 48'000, 44'100, false, false},
      {"c-hb-iir", 44'100, 352'800, false, false},
      {"c-hb-iir", 352'800, 44'100, false, false},
      {"c-hb-fir", 44'100, 352'800, true, false},
      {"c-hb-fir", 352'800, 44'100, true, false},
      {"eq-linterp", 44'100, 352'800, false, true},
      {"cic", 352'800, 44'100, false, true},
  };
  const double f0s[] = {110.0, 220.0, 261.63, 440.0, 1000.0,
                        1760.0, 2637.02, 3520.0, 4186.01, 7040.0};
  constexpr std::size_t kFrame = 1u << 15;
  for (const Case& c : cases) {
    const Converter conv = MakeNamedConverter(c.name, c.from, c.to);
    const Converter fft = FftConverter(conv.ratio.l, conv.ratio.m);
    double worst_db = 0.0, worst_phase = 0.0;
    for (double f0 : f0s) {
      const auto n_in = static_cast<std::size_t>(std::ceil(3.0 * kFrame * c.from / c.to));
      const std::vector<double> x = RichTone(f0, c.from, n_in);
      const std::vector<double> y = conv(x), z = fft(x);
      const std::size_t start = z.size() / 2 - kFrame / 2;
      const HarmonicSet hy = ExtractHarmonics(
          AnalyzeSpectrum(std::span(y).subspan(start, kFrame), c.to, start), f0);
      const HarmonicSet hz = ExtractHarmonics(
          AnalyzeSpectrum(std::span(z).subspan(start, kFrame), c.to, start), f0);
      const HarmonicSet hd = DelayHarmonics(hz, conv.latency_output_samples / c.to);
      for (std::size_t k = 0; k < hz.size(); ++k) {
        if (hz.amplitudes[k] < 1e-6) continue;
        worst_db = std::max(worst_db, std::abs(20.0 * std::log10(hy.amplitudes[k] /
                                                                 hz.amplitudes[k])));
        const double turn = 2.0 * kPi * (k + 1) * f0;
        const double d = std::remainder(hy.phases[k] - hd.phases[k], 2.0 * kPi) / turn * c.to;
        worst_phase = std::max(worst_phase, std::abs(d));
      }
    }
    const std::string label = Fmt("%-12s %6.0f -> %6.0f Hz", c.name, c.from, c.to);
    o.Check(worst_db <= 0.5, label + Fmt(": worst harmonic magnitude %.3f dB", worst_db),
            c.droops);
    if (c.fir) {
      o.Check(worst_phase <= 0.01, label + Fmt(": worst phase offset %.2e samples", worst_phase));
    }
  }

  for (auto [l, m] : {std::pair{2, 3}, std::pair{160, 147}}) {
    FirFilter filter;
    if (l == 160) {
      filter = designs::NbKaiser();
    } else {
      const double fc = IdealCutoff(l, m);
      filter = DesignKaiserLowpass({0.8 * fc, 1.2 * fc, 0.1, 80.0, 1.0});
    }
    const std::vector<double> x = Noise(2048, 7 + l);
    RationalResampler r(filter, l, m);
    const std::vector<double> y = r.Process(x);
    const std::vector<double> ref = DenseOracle(x, filter.coeffs, l, m, y.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, std::abs(y[i] - ref[i]));
    o.Check(worst <= 1e-12, Fmt("dense oracle l/m = %d/%d: max |diff| %.1e", l, m, worst));
  }
  return o;
}

std::vector<RnnModel> BundledModels() {
  std::vector<RnnModel> out;
  for (const std::string& name : BundledModelNames()) out.push_back(LoadModel(name));
  return out;
}

Outcome PlainEquivalence() {
  Outcome o;
  for (const RnnModel& model : BundledModels()) {
    bool same = true;
    for (double f0 : {110.0, 1000.0, 4186.01}) {
      const std::vector<double> x = GenSine(f0, model.train_rate_hz, 0.1, 0.2);
      const std::vector<double> plain = ProcessPlain(model, x);
      for (int k : {0, 1, 3}) same = same && SrirnnProcess(model, SrirnnConfig::Make(1, 1, k), x) == plain;
    }
    o.Check(same, model.name + ": l=m=1 output bit-identical for k = 0, 1, 3");
  }
  return o;
}

Outcome ConstantSteadyState() {
  Outcome o;
  for (const RnnModel& model : BundledModels()) {
    const double reference = ProcessPlain(model, std::vector<double>(4410, 0.1)).back();
    double worst = 0.0;
    for (auto [l, m, k] : {std::tuple{160, 147, 1}, std::tuple{160, 147, 3},
                           std::tuple{147, 160, 1}, std::tuple{147, 160, 3},
                           std::tuple{2, 1, 3}}) {
      const std::vector<double> x(4410 * l / m, 0.1);
      const double y = SrirnnProcess(model, SrirnnConfig::Make(l, m, k), x).back();
      worst = std::max(worst, std::abs(y - reference));
    }
    o.Check(worst <= 1e-6, model.name + Fmt(": max steady-state difference %.1e", worst));
  }
  return o;
}

Outcome FaultCapture() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "mrafx_acceptance";
  fs::create_directories(dir);
  ExperimentConfig base;
  base.methods = {"srirnn{1}", "srirnn{3}", "resample{nb-kaiser}", "resample{hb-wb-kaiser}",
                  "resample{fft}"};
  // Only fault status matters here, so short frames suffice.
  base.frame_length = 4096;
  base.preroll = 1024;
  base.tail = 1024;

  // Bundled models run at 48 kHz, and copies labelled as trained at 48 kHz
  // run at 44.1 kHz, which is the LEDL / CEDL situation.
  ExperimentConfig up = base;
  up.models = BundledModelNames();
  up.inference_rate_hz = 48'000.0;
  ExperimentConfig down = base;
  down.inference_rate_hz = 44'100.0;
  for (RnnModel model : BundledModels()) {
    model.train_rate_hz = 48'000.0;
    const fs::path path = dir / (model.name + "_48k.json");
    SaveModel(model, path.string());
    down.models.push_back(path.string());
  }
  int resampled = 0, resampled_faults = 0, srirnn = 0, srirnn_faults = 0, errors = 0;
  for (const ExperimentConfig& config : {up, down}) {
    const ExperimentResult r = RunExperiment(config);
    for (const CellResult& row : r.rows) {
      const bool is_srirnn = row.method.starts_with("srirnn");
      if (row.status != "ok" && row.status != "unstable") ++errors;
      if (is_srirnn) {
        ++srirnn;
        srirnn_faults += row.status == "unstable";
      } else {
        ++resampled;
        resampled_faults += row.status != "ok";
      }
    }
    errors += static_cast<int>(r.skipped.size());
  }
  o.Check(resampled_faults == 0,
          Fmt("resampled cells: %d of %d faulted", resampled_faults, resampled));
  o.Check(errors == 0, Fmt("unexpected errors or skipped models: %d", errors));
  o.Note(Fmt("srirnn cells: %d of %d flagged unstable", srirnn_faults, srirnn));

  // A model that does diverge under far state extrapolation.
  RnnModel m;
  m.name = "integrator";
  m.hidden_size = 2;
  m.w_input.assign(8, 0.0);
  m.w_recurrent.assign(16, 0.0);
  m.bias = {30, 30, 30, 30, 0.5, 0.5, 0, 0};
  m.dense_hidden = {1.0, 1.0};
  m.dense_input = {0.0};
  const fs::path path = dir / "integrator.json";
  SaveModel(m, path.string());
  ExperimentConfig diverging = base;
  diverging.models = {path.string()};
  diverging.methods = {"srirnn{3}", "resample{fft}"};
  diverging.f0_hz = {440.0};
  diverging.inference_rate_hz = 7 * 44'100.0;
  const ExperimentResult r = RunExperiment(diverging);
  for (const CellResult& row : r.rows) o.Note(row.method + ": " + row.status);
  // Its output ignores the input, so the resampled twin scores a silent
  // reference; what matters is that only the state interpolation faults.
  const bool flagged = r.rows.size() == 2 && r.rows[0].status != "unstable" &&
                       r.rows[1].status == "unstable" && std::isnan(r.rows[1].metrics.esr_db);
  o.Check(flagged, "diverging srirnn{3} cell flagged unstable with nan metrics, its resampled twin not");
  fs::remove_all(dir);
  return o;
}

Outcome OversamplingMonotone() {
  Outcome o;
  ExperimentConfig config;
  config.g = 0.1;
  for (const RnnModel& model : BundledModels()) {
    double last_asr = 1e9, last_nmr = 1e9;
    bool monotone = true;
    std::string trace;
    for (int factor : {1, 2, 4, 8}) {
      const MethodSpec method = MethodSpec::Parse(Fmt("oversample{%d,fft,fft}", factor));
      const CellResult cell = EvaluateCell(model, method, 4186.01, config);
      const double asr = cell.metrics.asr_db, nmr = cell.metrics.nmr_db;
      monotone = monotone && cell.status == "ok" && asr <= last_asr && nmr <= last_nmr;
      last_asr = asr;
      last_nmr = nmr;
      trace += Fmt(" M=%d %.1f/%.1f", factor, asr, nmr);
    }
    o.Check(monotone, model.name + " ASR/NMR dB:" + trace);
  }
  return o;
}

Outcome MetricSelfTests() {
  Outcome o;
  constexpr double kRate = 44'100.0;
  constexpr std::size_t kFrame = 1u << 16;
  const std::vector<double> y = GenSineSamples(1000.0, kRate, 0.1, kFrame);
  std::vector<double> neg(y.size());
  std::transform(y.begin(), y.end(), neg.begin(), [](double v) { return -v; });
  const double same = Esr(y, y), flipped = Esr(y, neg);
  o.Check(same == kFloorDb, Fmt("ESR(y, y) = %.0f dB", same));
  o.Check(std::abs(flipped - 6.02) <= 0.01, Fmt("ESR(y, -y) = %.4f dB", flipped));

  HarmonicSet ref;
  ref.f0_hz = 1000.0;
  ref.amplitudes = {0.1, 0.03, 0.01, 0.004};
  ref.phases = {0.0, 0.5, 1.0, 1.5};
  const std::vector<double> clean = ResynthBandlimited(ref, kRate, 3 * kFrame / 2);
  double power = 0.0;
  for (double v : clean) power += v * v;
  power /= static_cast<double>(clean.size());
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(clean.size());
  for (double& v : noise) v = gauss(rng);
  auto with = [&](double relative_db) {
    const double s = std::sqrt(power * std::pow(10.0, relative_db / 10.0));
    std::vector<double> x(clean.size());
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = clean[n] + s * noise[n];
    return AnalyzeTail(x, kRate, kFrame);
  };
  const Spectrum at80 = with(-80.0);
  const double asr = Asr(at80, ExtractHarmonics(at80, 1000.0));
  o.Check(std::abs(asr + 80.0) <= 0.5, Fmt("-80 dB noise: ASR %.2f dB", asr));
  const Spectrum s1 = with(-60.0), s2 = with(-60.0 + 10.0 * std::log10(2.0));
  const double gain = Nmr(s2, ExtractHarmonics(s2, 1000.0)) - Nmr(s1, ExtractHarmonics(s1, 1000.0));
  o.Check(std::abs(gain - 3.01) <= 0.05, Fmt("noise power doubled: NMR %+.3f dB", gain));

  HarmonicSet test = ref, rotated = ref;
  test.amplitudes = {0.09, 0.031, 0.012, 0.0};
  rotated.amplitudes = test.amplitudes;
  for (std::size_t k = 0; k < rotated.size(); ++k) rotated.phases[k] += 0.7 * (k + 1) + 2.0;
  const double mesr = Mesr(ref, test), mesr_rotated = Mesr(ref, rotated);
  o.Check(mesr == mesr_rotated, Fmt("MESR %.6f dB equal under phase rotation", mesr));
  return o;
}

Outcome HardClipOracle() {
  Outcome o;
  constexpr double kRate = 44'100.0, kHigh = 8 * kRate, kF0 = 4186.01;
  constexpr std::size_t kFrame = 1u << 16;
  const std::vector<double> x = GenSineSamples(kF0, kRate, 0.1, kFrame + 16'384);
  auto nmr = [&](const char* up, const char* down) {
    std::vector<double> high = MakeNamedConverter(up, kRate, kHigh)(x);
    for (double& v : high) v = std::clamp(v, -0.05, 0.05);
    const std::vector<double> y = MakeNamedConverter(down, kHigh, kRate)(high);
    const Spectrum s = AnalyzeTail(y, kRate, kFrame);
    return Nmr(s, ExtractHarmonics(s, kF0));
  };
  const double iir = nmr("c-hb-iir", "c-hb-iir"), baseline = nmr("eq-linterp", "cic");
  o.Check(baseline - iir >= 10.0, Fmt("NMR C-HB-IIR %.2f dB, EQ-Linterp+CIC %.2f dB, margin %.2f dB",
                                      iir, baseline, baseline - iir));
  return o;
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome()> run;
  double max_seconds;  // 0: no runtime bound
};

int Main() {
  const Criterion criteria[] = {
      {"1", "Table I FIR costs", TableOne, 1.0},
      {"2", "Table II state-interpolation costs", TableTwo, 0.0},
      {"3", "reference filter orders", FilterOrders, 10.0},
      {"4", "spec compliance of the 44.1/48 kHz responses", SpecCompliance, 0.0},
      {"5", "streaming resamplers against the FFT and dense oracles", OracleEquivalence, 0.0},
      {"6a", "state interpolation at l=m=1 is plain processing", PlainEquivalence, 0.0},
      {"6b", "constant-input steady state across rates", ConstantSteadyState, 0.0},
      {"6c", "resampling never faults, state interpolation faults are flagged", FaultCapture,
       0.0},
      {"6d", "oversampling ASR and NMR non-increasing in M", OversamplingMonotone, 0.0},
      {"7", "metric self-tests", MetricSelfTests, 0.0},
      {"8", "hard clipper x8, C-HB-IIR against EQ-Linterp+CIC", HardClipOracle, 0.0},
  };
  int passed = 0, known = 0, unexpected = 0;
  double six_seconds = 0.0;
  std::vector<std::string> known_ids;
  // MRAFX_ACCEPTANCE_ONLY=<id> runs a single criterion.
  const char* only = std::getenv("MRAFX_ACCEPTANCE_ONLY");
  std::size_t ran = 0;
  for (const Criterion& c : criteria) {
    if (only != nullptr && std::string(only) != c.id) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.Check(false, std::string("threw: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.max_seconds > 0.0) {
      o.Check(seconds < c.max_seconds, Fmt("runtime %.2f s (limit %.0f s)", seconds, c.max_seconds));
    }
    if (c.id[0] == '6') six_seconds += seconds;
    if (o.pass) {
      ++passed;
    } else if (o.known) {
      ++known;
      known_ids.push_back(c.id);
    } else {
      ++unexpected;
    }
    std::printf("%s %-3s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, seconds);
    for (const std::string& d : o.details) std::printf("       %s\n", d.c_str());
    std::fflush(stdout);
  }
  const bool six_fast = six_seconds < 300.0;
  std::printf("%s 6   total runtime %.1f s (limit 300 s)\n", six_fast ? "PASS" : "FAIL",
              six_seconds);
  if (!six_fast) ++unexpected;
  std::string ids;
  for (const std::string& id : known_ids) ids += (ids.empty() ? "" : ", ") + id;
  std::printf("\n%d of %zu criteria pass; %d fail on documented shortfalls (%s); %d unexpected\n",
              passed, ran, known, ids.empty() ? "none" : ids.c_str(), unexpected);
  return unexpected == 0 ? 0 : 1;
}

}  // namespace
}  // namespace mrafx

int main() { return mrafx::Main(); }
