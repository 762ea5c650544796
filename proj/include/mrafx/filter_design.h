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

// Low-pass prototype synthesis for the resamplers: Kaiser windowed sinc,
// Parks-McClellan equiripple, elliptic half-band IIR (all-pass polyphase)
// and half-band FIR, plus measurement of a response against absolute
// passband / stopband requirements.
//
// Normalized frequencies are in cycles per sample at the rate the filter
// runs at (for an L/M converter that is L times the input rate).

#ifndef MRAFX_FILTER_DESIGN_H_
#define MRAFX_FILTER_DESIGN_H_

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace mrafx {

struct DesignSpecification {
  double f_pb = 0.0;  // passband edge, normalized
  double f_sb = 0.0;  // stopband edge, normalized
  double a_p = 0.0;   // peak-to-peak passband ripple, dB
  double a_s = 0.0;   // minimum stopband attenuation, dB
  double filter_rate_hz = 0.0;

  static DesignSpecification FromHz(double f_pb_hz, double f_sb_hz,
                                    double a_p_db, double a_s_db,
                                    double filter_rate_hz);

  double transition_width() const { return f_sb - f_pb; }

  // Throws ArgumentError unless 0 <= f_pb < f_sb <= 0.5, a_p > 0, a_s > 0.
  void Validate() const;
};

struct RippleAmplitudes {
  double delta1 = 0.0;  // passband ripple amplitude (linear)
  double delta2 = 0.0;  // stopband ripple height (linear)
};

RippleAmplitudes ComputeRippleAmplitudes(double a_p_db, double a_s_db);

// Inverse of ComputeRippleAmplitudes: returns {a_p_db, a_s_db}.
std::pair<double, double> RippleAmplitudesToDb(const RippleAmplitudes& r);

struct FirFilter {
  std::vector<double> coeffs;
  bool linear_phase = true;
  // 2 for half-band filters: every second tap (counted from the center) is
  // zero except the center tap itself.
  std::optional<int> zero_stride;
  double rate_hz = 0.0;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  double group_delay_samples() const { return 0.5 * order(); }
};

// Elliptic half-band filter H(z) = (A0(z^2) + z^-1 A1(z^2)) / 2.
// Each branch is a cascade of sections (a + z^-2) / (1 + a z^-2) at the
// filter rate, i.e. first-order all-passes (a + z^-1) / (1 + a z^-1) at the
// low rate of the polyphase implementation.
struct HalfBandIir {
  std::vector<double> branch0;
  std::vector<double> branch1;
  double rate_hz = 0.0;
  double predicted_attenuation_db = 0.0;

  int order() const {
    return 2 * static_cast<int>(branch0.size() + branch1.size()) + 1;
  }
};

// Numeric limits for the design entry points.
inline constexpr int kDefaultMaxOrder = 1'000'000;

// ceil-to-even of (a_s - 7.95) / (14.36 delta_f). Requires a_s > 7.95.
int KaiserOrder(double a_s_db, double delta_f);

// 0.1102 (A - 8.7) above 50 dB, the standard piecewise form below.
double KaiserBeta(double a_s_db);

// Modified Bessel I0 based Kaiser window of length n_taps.
std::vector<double> KaiserWindow(int n_taps, double beta);

// Windowed sinc with cutoff at the transition-band midpoint, order from
// KaiserOrder unless `order` is given, unity DC gain.
FirFilter DesignKaiserLowpass(const DesignSpecification& spec,
                              std::optional<int> order = std::nullopt,
                              int max_order = kDefaultMaxOrder);

// Bellanger's equiripple order estimate, rounded up to the next even integer.
int BellangerOrder(double delta1, double delta2, double delta_f);

// Parks-McClellan low-pass of the given order. The stopband weight is
// relative to a unit passband weight (use delta1 / delta2 for the usual
// ripple-matched design).
FirFilter DesignEquirippleLowpass(const DesignSpecification& spec, int order,
                                  double stopband_weight);

// Minimal odd order power-symmetric elliptic half-band reaching
// a_s_target - 0.5 dB. f_sb is normalized to the filter (high) rate.
HalfBandIir DesignHalfBandEllipticIir(double f_sb, double a_s_target_db,
                                      double rate_hz = 0.0,
                                      int max_order = 51);

// Elliptic half-band of a fixed odd order.
HalfBandIir DesignHalfBandEllipticIirOfOrder(double f_sb, int order,
                                             double rate_hz = 0.0);

// Predicted stopband attenuation of the order-`order` elliptic half-band.
double HalfBandEllipticAttenuation(double f_sb, int order);

// Half-band FIR via the one-band trick: an odd-order equiripple G(z), then
// H(z) = (z^-K + G(z^2)) / 2. Smallest order meeting a_s - 0.5 dB.
FirFilter DesignHalfBandFir(double a_s_db, double f_sb, double rate_hz = 0.0,
                            int max_order = 2000);

// Response evaluation, f normalized to the filter rate.
std::complex<double> FrequencyResponse(const HalfBandIir& filter, double f);
double MagnitudeResponse(const HalfBandIir& filter, double f);
double MagnitudeResponse(const FirFilter& filter, double f);
// Batch helpers (parallel kernels underneath).
std::vector<double> MagnitudeResponse(const FirFilter& filter,
                                      std::span<const double> freqs);
std::vector<double> MagnitudeResponse(const HalfBandIir& filter,
                                      std::span<const double> freqs);

// Poles of the branch all-passes at the filter rate (z^2 = -a).
std::vector<std::complex<double>> Poles(const HalfBandIir& filter);

struct SpecCriteria {
  double passband_hz = 16'000.0;
  double stopband_hz = 28'100.0;
  double max_passband_dev_db = 0.5;
  double min_stopband_atten_db = 119.5;
  double max_dc_dev_db = 1e-4;
  int grid_points = 16'384;
};

struct SpecReport {
  double passband_dev_db = 0.0;    // max |20 log10 |H|| over the passband
  double stopband_atten_db = 0.0;  // min -20 log10 |H| over the stopband
  double dc_gain_db = 0.0;
  bool passband_ok = false;
  bool stopband_ok = false;
  bool dc_ok = false;
  bool passes = false;
};

// Evaluates a magnitude function of absolute frequency (Hz) on a grid over
// [0, passband] and [stopband, nyquist_hz], with extra points near the
// stopband edge. The batch callback receives all frequencies at once.
using BatchMagnitude =
    std::function<std::vector<double>(std::span<const double> freqs_hz)>;
SpecReport ValidateResponse(const BatchMagnitude& magnitude, double nyquist_hz,
                            const SpecCriteria& criteria = {});

SpecReport ValidateAgainstSpec(const FirFilter& filter,
                               const SpecCriteria& criteria = {});
SpecReport ValidateAgainstSpec(const HalfBandIir& filter,
                               const SpecCriteria& criteria = {});

// Equiripple design starting at the Bellanger estimate, stepping the order
// by two until the measured response meets `criteria`. Throws DesignError
// after 64 attempts.
FirFilter DesignEquirippleToSpec(const DesignSpecification& spec,
                                 const SpecCriteria& criteria);

// The project's reference designs for 44.1 kHz <-> 48 kHz and 2x stages.
// Computed once and cached; safe to call from any thread.
namespace designs {

inline constexpr double kBaseRateHz = 44'100.0;
inline constexpr double kNbFilterRateHz = 7'056'000.0;  // 160 * 44.1 kHz
inline constexpr double kHalfBandRateHz = 88'200.0;

DesignSpecification NbKaiserSpec();
DesignSpecification NbRemezSpec();
DesignSpecification WbKaiserSpec();
DesignSpecification WbRemezSpec();

// Validation grid for a reference design: 0-16 kHz passband, stopband from
// the design's f_sb, a_s - 0.5 dB minimum attenuation.
SpecCriteria CriteriaFor(const DesignSpecification& spec);

const FirFilter& NbKaiser();
const FirFilter& NbRemez();
const FirFilter& WbKaiser();
const FirFilter& WbRemez();
const HalfBandIir& HbIir();
const FirFilter& HbFir();

}  // namespace designs

}  // namespace mrafx

#endif  // MRAFX_FILTER_DESIGN_H_
