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

// Streaming sample-rate converters.
//
// Every converter is causal, zero-initialized and keeps its state between
// Process calls, so splitting a signal into arbitrary blocks yields the same
// concatenated output. Nothing is swallowed at start-up: the first outputs
// carry the filter's group delay, which callers compensate using
// latency_input_samples().

#ifndef MRAFX_RESAMPLERS_H_
#define MRAFX_RESAMPLERS_H_

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mrafx/cost.h"
#include "mrafx/filter_design.h"

namespace mrafx {

struct Ratio {
  long long l = 1;  // output samples ...
  long long m = 1;  // ... per this many input samples
  double value() const { return static_cast<double>(l) / m; }
  bool operator==(const Ratio&) const = default;
};

class Resampler {
 public:
  virtual ~Resampler() = default;

  // Appends the outputs produced by `in` to `out`.
  virtual void Process(std::span<const double> in, std::vector<double>& out) = 0;
  std::vector<double> Process(std::span<const double> in) {
    std::vector<double> out;
    Process(in, out);
    return out;
  }

  virtual void Reset() = 0;
  virtual Ratio ratio() const = 0;
  // Group delay in input-rate samples (nominal zero for all-pass paths).
  virtual double latency_input_samples() const = 0;
  // Cost for a stream entering at input_rate_hz.
  virtual CostReport Cost(double input_rate_hz,
                          double reference_rate_hz = kReferenceRateHz) const = 0;
  virtual std::unique_ptr<Resampler> Clone() const = 0;
};

// 1 / (2 max(l, m)).
double IdealCutoff(long long l, long long m);

// L/M polyphase converter. The filter is designed at L times the input rate;
// outputs are scaled by L to restore unity passband gain.
class RationalResampler final : public Resampler {
 public:
  RationalResampler(const FirFilter& filter, int l, int m);

  using Resampler::Process;
  void Process(std::span<const double> in, std::vector<double>& out) override;
  void Reset() override;
  Ratio ratio() const override { return {l_, m_}; }
  double latency_input_samples() const override;
  CostReport Cost(double input_rate_hz,
                  double reference_rate_hz) const override;
  std::unique_ptr<Resampler> Clone() const override;

  int phase() const { return phase_; }
  int taps_per_phase() const { return taps_per_phase_; }

 private:
  int l_;
  int m_;
  int order_;
  int taps_per_phase_;
  std::vector<double> bank_;  // l rows of taps_per_phase, pre-scaled by l
  std::vector<double> history_;  // doubled ring, see Process
  int pos_ = 0;
  int phase_ = 0;
};

enum class Direction { kInterpolate, kDecimate };

// Two-branch all-pass polyphase half-band stage (factor 2).
class HalfBandIirStage final : public Resampler {
 public:
  HalfBandIirStage(const HalfBandIir& filter, Direction direction);

  using Resampler::Process;
  void Process(std::span<const double> in, std::vector<double>& out) override;
  void Reset() override;
  Ratio ratio() const override;
  double latency_input_samples() const override { return 0.0; }
  CostReport Cost(double input_rate_hz,
                  double reference_rate_hz) const override;
  std::unique_ptr<Resampler> Clone() const override;

 private:
  struct Chain {
    std::vector<double> a, x1, y1;
    double Step(double x);
    void Reset();
  };
  Direction direction_;
  Chain branch0_;
  Chain branch1_;
  double pending_odd_ = 0.0;  // A1 output awaiting the next even input
  long long count_ = 0;
};

// Half-band FIR stage (factor 2); the odd polyphase branch is a pure delay.
class HalfBandFirStage final : public Resampler {
 public:
  HalfBandFirStage(const FirFilter& filter, Direction direction);

  using Resampler::Process;
  void Process(std::span<const double> in, std::vector<double>& out) override;
  void Reset() override { inner_.Reset(); }
  Ratio ratio() const override { return inner_.ratio(); }
  double latency_input_samples() const override {
    return inner_.latency_input_samples();
  }
  CostReport Cost(double input_rate_hz,
                  double reference_rate_hz) const override;
  std::unique_ptr<Resampler> Clone() const override;

 private:
  Direction direction_;
  int order_;
  int unique_taps_;
  RationalResampler inner_;
};

// Stages applied in order; ratio and latency compose.
class CascadeResampler final : public Resampler {
 public:
  explicit CascadeResampler(std::vector<std::unique_ptr<Resampler>> stages);

  using Resampler::Process;
  void Process(std::span<const double> in, std::vector<double>& out) override;
  void Reset() override;
  Ratio ratio() const override;
  double latency_input_samples() const override;
  CostReport Cost(double input_rate_hz,
                  double reference_rate_hz) const override;
  std::unique_ptr<Resampler> Clone() const override;

  std::size_t size() const { return stages_.size(); }
  const Resampler& stage(std::size_t i) const { return *stages_[i]; }

 private:
  std::vector<std::unique_ptr<Resampler>> stages_;
  std::vector<std::vector<double>> scratch_;
};

// First-order high shelf y = b0 x + b1 x[-1] - a1 y[-1], unity gain at DC.
struct HighShelf {
  static constexpr double kB0 = 1.234;
  static constexpr double kB1 = 0.270;
  static constexpr double kA1 = 0.504;
  double x1 = 0.0;
  double y1 = 0.0;
  double Step(double x) {
    const double y = kB0 * x + kB1 * x1 - kA1 * y1;
    x1 = x;
    y1 = y;
    return y;
  }
};

// High-shelf equalizer then linear interpolation to m times the rate.
class EqLinterp final : public Resampler {
 public:
  explicit EqLinterp(int m);

  using Resampler::Process;
  void Process(std::span<const double> in, std::vector<double>& out) override;
  void Reset() override;
  Ratio ratio() const override { return {m_, 1}; }
  double latency_input_samples() const override { return 1.0; }
  CostReport Cost(double input_rate_hz,
                  double reference_rate_hz) const override;
  std::unique_ptr<Resampler> Clone() const override;

 private:
  int m_;
  HighShelf shelf_;
  double prev_ = 0.0;
};

// Unit-DC CIC low-pass (sinc^N of length M) as an FIR at the high rate.
FirFilter CicFilter(int m, int stages, double rate_hz = 0.0);

// CIC decimation by m with `stages` stages, followed by the high shelf.
// Runs as the equivalent non-recursive FIR: pure floating-point integrators
// grow without bound, while the FIR form is exact to rounding.
class CicDecimator final : public Resampler {
 public:
  explicit CicDecimator(int m = 8, int stages = 6);

  using Resampler::Process;
  void Process(std::span<const double> in, std::vector<double>& out) override;
  void Reset() override;
  Ratio ratio() const override { return {1, m_}; }
  double latency_input_samples() const override;
  CostReport Cost(double input_rate_hz,
                  double reference_rate_hz) const override;
  std::unique_ptr<Resampler> Clone() const override;

 private:
  int m_;
  int stages_;
  RationalResampler fir_;
  HighShelf shelf_;
  std::vector<double> scratch_;
};

// Offline band-limited resampling by l/m in the frequency domain: the signal
// is zero-padded to a multiple of m, its spectrum truncated or zero-extended
// to the new length, and transformed back. Even-length Nyquist bins are split
// (upsampling) or folded (downsampling) so real signals stay real. The
// output covers the padded input: ceil(n / m) * l samples.
std::vector<double> FftResample(std::span<const double> x, long long l,
                                long long m);

// Factories for the reference pipelines.
// 44.1k -> 48k and 48k -> 44.1k single-stage.
std::unique_ptr<Resampler> MakeSingleStage(const FirFilter& filter,
                                           Direction direction);
// HB interpolate then 80/147 on the way up; 147/80 then HB decimate down.
std::unique_ptr<Resampler> MakeTwoStage(const HalfBandIir& hb,
                                        const FirFilter& wb,
                                        Direction direction);
// Magnitude of the two-stage chain as a function of frequency in Hz: the
// half-band at 88.2 kHz times the wide-band filter at 7.056 MHz.
BatchMagnitude TwoStageMagnitude(const HalfBandIir& hb, const FirFilter& wb);

enum class HalfBandKind { kIir, kFir };
// log2(m) half-band stages; throws ArgumentError unless m is a power of two.
std::unique_ptr<CascadeResampler> MakeHalfBandCascade(int m,
                                                      Direction direction,
                                                      HalfBandKind kind);

// Whole-signal conversion used by the offline pipelines: either a streaming
// resampler run over the full input, or the FFT oracle.
struct Converter {
  Ratio ratio;
  double latency_output_samples = 0.0;
  std::function<std::vector<double>(std::span<const double>)> run;
  std::vector<double> operator()(std::span<const double> x) const {
    return run(x);
  }
};
Converter StreamConverter(const Resampler& prototype);
Converter FftConverter(long long l, long long m);
Converter IdentityConverter();

// Named methods: nb-kaiser, nb-remez, hb-wb-kaiser, hb-wb-remez (44.1 <-> 48
// kHz), c-hb-iir, c-hb-fir (power-of-two ratios), eq-linterp (power-of-two
// up), cic (power-of-two down). Throws ArgumentError on unsupported combos.
std::unique_ptr<Resampler> MakeNamedResampler(const std::string& method,
                                              double from_rate_hz,
                                              double to_rate_hz);
// As above plus "fft" (offline).
Converter MakeNamedConverter(const std::string& method, double from_rate_hz,
                             double to_rate_hz);

// Reduced l/m for two rates (exact on rational Hz values up to 1e-9).
Ratio RateRatio(double from_rate_hz, double to_rate_hz);

}  // namespace mrafx

#endif  // MRAFX_RESAMPLERS_H_
