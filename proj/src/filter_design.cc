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

#include "mrafx/filter_design.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "mrafx/errors.h"
#include "mrafx/kernels.h"
#include "mrafx/remez.h"

namespace mrafx {
namespace {

constexpr double kPi = std::numbers::pi;

void RequireFinitePositive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw ArgumentError(std::string(name) + " must be finite and positive");
  }
}

void NormalizeDc(std::vector<double>& taps) {
  const double sum = std::accumulate(taps.begin(), taps.end(), 0.0);
  if (sum == 0.0) throw DesignError("filter has zero DC gain");
  for (double& t : taps) t /= sum;
}

// Minimum attenuation over [f_sb, 0.5] for a normalized magnitude function.
template <typename Mag>
double MeasuredStopband(const Mag& mag, double f_sb, int points) {
  std::vector<double> f(points);
  for (int i = 0; i < points; ++i) {
    f[i] = f_sb + (0.5 - f_sb) * i / (points - 1);
  }
  const std::vector<double> m = mag(f);
  const double peak = *std::max_element(m.begin(), m.end());
  return -20.0 * std::log10(std::max(peak, 1e-300));
}

// Theta-series sums for the elliptic half-band all-pass coefficients.
double ThetaNumerator(double q, int order, int c) {
  double acc = 0.0;
  for (int i = 0;; ++i) {
    const double term = std::pow(q, static_cast<double>(i) * (i + 1)) *
                        std::sin((2.0 * i + 1.0) * c * kPi / order) *
                        ((i % 2 == 0) ? 1.0 : -1.0);
    acc += term;
    if (std::abs(term) < 1e-100 || i > 1000) break;
  }
  return acc;
}

double ThetaDenominator(double q, int order, int c) {
  double acc = 0.0;
  for (int i = 1;; ++i) {
    const double term = std::pow(q, static_cast<double>(i) * i) *
                        std::cos(2.0 * i * c * kPi / order) *
                        ((i % 2 == 0) ? 1.0 : -1.0);
    acc += term;
    if (std::abs(term) < 1e-100 || i > 1000) break;
  }
  return acc;
}

struct EllipticParams {
  double k;  // selectivity, tan^2(pi f_pb)
  double q;  // nome of the complementary modulus
};

EllipticParams HalfBandParams(double f_sb) {
  if (!(f_sb > 0.25 && f_sb < 0.5)) {
    throw ArgumentError("half-band stopband edge must lie in (0.25, 0.5)");
  }
  const double f_pb = 0.5 - f_sb;
  const double t = std::tan(kPi * f_pb);
  const double k = t * t;
  const double kp_sqrt = std::pow(1.0 - k * k, 0.25);
  const double e = 0.5 * (1.0 - kp_sqrt) / (1.0 + kp_sqrt);
  const double e4 = e * e * e * e;
  const double q = e * (1.0 + e4 * (2.0 + e4 * (15.0 + 150.0 * e4)));
  return {k, q};
}

std::complex<double> AllpassChain(std::span<const double> coeffs,
                                  std::complex<double> z_inv2) {
  std::complex<double> acc = 1.0;
  for (double a : coeffs) acc *= (a + z_inv2) / (1.0 + a * z_inv2);
  return acc;
}

}  // namespace

DesignSpecification DesignSpecification::FromHz(double f_pb_hz, double f_sb_hz,
                                                double a_p_db, double a_s_db,
                                                double filter_rate_hz) {
  RequireFinitePositive(filter_rate_hz, "filter rate");
  DesignSpecification s;
  s.f_pb = f_pb_hz / filter_rate_hz;
  s.f_sb = f_sb_hz / filter_rate_hz;
  s.a_p = a_p_db;
  s.a_s = a_s_db;
  s.filter_rate_hz = filter_rate_hz;
  return s;
}

void DesignSpecification::Validate() const {
  if (!(f_pb >= 0.0 && f_pb < f_sb && f_sb <= 0.5)) {
    std::ostringstream msg;
    msg << "band edges must satisfy 0 <= f_pb < f_sb <= 0.5 (got f_pb=" << f_pb
        << ", f_sb=" << f_sb << ")";
    throw ArgumentError(msg.str());
  }
  RequireFinitePositive(a_p, "passband ripple");
  RequireFinitePositive(a_s, "stopband attenuation");
}

RippleAmplitudes ComputeRippleAmplitudes(double a_p_db, double a_s_db) {
  RequireFinitePositive(a_p_db, "passband ripple");
  RequireFinitePositive(a_s_db, "stopband attenuation");
  const double g = std::pow(10.0, a_p_db / 20.0);
  return {(g - 1.0) / (g + 1.0), std::pow(10.0, -a_s_db / 20.0)};
}

std::pair<double, double> RippleAmplitudesToDb(const RippleAmplitudes& r) {
  return {20.0 * std::log10((1.0 + r.delta1) / (1.0 - r.delta1)),
          -20.0 * std::log10(r.delta2)};
}

int KaiserOrder(double a_s_db, double delta_f) {
  if (!(a_s_db > 7.95) || !std::isfinite(a_s_db)) {
    throw ArgumentError("Kaiser order formula needs a_s > 7.95 dB");
  }
  RequireFinitePositive(delta_f, "transition width");
  const double raw = (a_s_db - 7.95) / (14.36 * delta_f);
  if (raw > static_cast<double>(std::numeric_limits<int>::max() - 2)) {
    throw DesignError("Kaiser order overflow");
  }
  int n = static_cast<int>(std::ceil(raw));
  if (n % 2 != 0) ++n;
  return n;
}

double KaiserBeta(double a_s_db) {
  if (a_s_db > 50.0) return 0.1102 * (a_s_db - 8.7);
  if (a_s_db >= 21.0) {
    const double d = a_s_db - 21.0;
    return 0.5842 * std::pow(d, 0.4) + 0.07886 * d;
  }
  return 0.0;
}

std::vector<double> KaiserWindow(int n_taps, double beta) {
  std::vector<double> w(n_taps, 1.0);
  if (n_taps == 1) return w;
  const double i0_beta = std::cyl_bessel_i(0.0, beta);
  const double half = 0.5 * (n_taps - 1);
  for (int n = 0; n < n_taps; ++n) {
    const double r = (n - half) / half;
    w[n] = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) /
           i0_beta;
  }
  return w;
}

FirFilter DesignKaiserLowpass(const DesignSpecification& spec,
                              std::optional<int> order, int max_order) {
  spec.Validate();
  const int n = order.value_or(KaiserOrder(spec.a_s, spec.transition_width()));
  if (n < 0 || n % 2 != 0) throw ArgumentError("Kaiser order must be even");
  if (n > max_order) {
    std::ostringstream msg;
    msg << "Kaiser order " << n << " exceeds cap " << max_order;
    throw DesignError(msg.str());
  }
  const double fc = 0.5 * (spec.f_pb + spec.f_sb);
  const std::vector<double> w = KaiserWindow(n + 1, KaiserBeta(spec.a_s));
  FirFilter filter;
  filter.coeffs.resize(n + 1);
  const int half = n / 2;
  for (int k = 0; k <= half; ++k) {
    const double offset = static_cast<double>(half - k);
    const double ideal = offset == 0.0
                             ? 2.0 * fc
                             : std::sin(2.0 * kPi * fc * offset) / (kPi * offset);
    filter.coeffs[k] = ideal * w[k];
    filter.coeffs[n - k] = filter.coeffs[k];
  }
  NormalizeDc(filter.coeffs);
  filter.rate_hz = spec.filter_rate_hz;
  return filter;
}

int BellangerOrder(double delta1, double delta2, double delta_f) {
  RequireFinitePositive(delta1, "delta1");
  RequireFinitePositive(delta2, "delta2");
  RequireFinitePositive(delta_f, "transition width");
  if (!(delta_f < 0.5)) throw ArgumentError("transition width must be < 0.5");
  const double raw =
      2.0 * std::log10(1.0 / (10.0 * delta1 * delta2)) / (3.0 * delta_f);
  int n = static_cast<int>(std::ceil(raw));
  if (n % 2 != 0) ++n;
  return std::max(n, 2);
}

FirFilter DesignEquirippleLowpass(const DesignSpecification& spec, int order,
                                  double stopband_weight) {
  spec.Validate();
  if (order < 2) throw ArgumentError("equiripple order must be >= 2");
  RequireFinitePositive(stopband_weight, "stopband weight");
  const RemezBand bands[] = {{0.0, spec.f_pb, 1.0, 1.0},
                             {spec.f_sb, 0.5, 0.0, stopband_weight}};
  RemezResult r = RemezDesign(order, bands);
  FirFilter filter;
  filter.coeffs = std::move(r.taps);
  NormalizeDc(filter.coeffs);
  filter.rate_hz = spec.filter_rate_hz;
  return filter;
}

double HalfBandEllipticAttenuation(double f_sb, int order) {
  const EllipticParams p = HalfBandParams(f_sb);
  const double k1 = 4.0 * std::pow(p.q, 0.5 * order);
  return -10.0 * std::log10(k1 / (1.0 + k1));
}

HalfBandIir DesignHalfBandEllipticIirOfOrder(double f_sb, int order,
                                             double rate_hz) {
  if (order < 3 || order % 2 == 0) {
    throw ArgumentError("half-band IIR order must be odd and >= 3");
  }
  const EllipticParams p = HalfBandParams(f_sb);
  const int n_coefs = (order - 1) / 2;
  std::vector<double> coefs(n_coefs);
  for (int i = 0; i < n_coefs; ++i) {
    const int c = i + 1;
    const double num = ThetaNumerator(p.q, order, c) * std::pow(p.q, 0.25);
    const double den = ThetaDenominator(p.q, order, c) + 0.5;
    const double ww = num / den;
    const double wwsq = ww * ww;
    const double x =
        std::sqrt((1.0 - wwsq * p.k) * (1.0 - wwsq / p.k)) / (1.0 + wwsq);
    coefs[i] = (1.0 - x) / (1.0 + x);
  }
  HalfBandIir filter;
  for (int i = 0; i < n_coefs; ++i) {
    (i % 2 == 0 ? filter.branch0 : filter.branch1).push_back(coefs[i]);
  }
  filter.rate_hz = rate_hz;
  filter.predicted_attenuation_db = HalfBandEllipticAttenuation(f_sb, order);
  return filter;
}

HalfBandIir DesignHalfBandEllipticIir(double f_sb, double a_s_target_db,
                                      double rate_hz, int max_order) {
  RequireFinitePositive(a_s_target_db, "stopband attenuation");
  HalfBandParams(f_sb);
  for (int order = 3; order <= max_order; order += 2) {
    HalfBandIir filter = DesignHalfBandEllipticIirOfOrder(f_sb, order, rate_hz);
    const double measured = MeasuredStopband(
        [&](std::span<const double> f) { return MagnitudeResponse(filter, f); },
        f_sb, 8192);
    if (measured >= a_s_target_db - 0.5) return filter;
  }
  std::ostringstream msg;
  msg << "half-band IIR cannot reach " << a_s_target_db << " dB below order "
      << max_order;
  throw DesignError(msg.str());
}

FirFilter DesignHalfBandFir(double a_s_db, double f_sb, double rate_hz,
                            int max_order) {
  RequireFinitePositive(a_s_db, "stopband attenuation");
  if (!(f_sb > 0.25 && f_sb < 0.5)) {
    throw ArgumentError("half-band stopband edge must lie in (0.25, 0.5)");
  }
  // G runs at half the rate, so its band edge is twice the passband edge.
  const double g_edge = 2.0 * (0.5 - f_sb);
  const RemezBand band[] = {{0.0, g_edge, 1.0, 1.0}};
  for (int k = 1; 2 * k <= max_order; k += 2) {
    // G is left unscaled: rescaling it to G(1) = 1 would double the
    // stopband ripple of H, and the center tap must stay exactly 1/2.
    const RemezResult g = RemezDesign(k, band);
    FirFilter filter;
    filter.coeffs.assign(2 * k + 1, 0.0);
    for (int i = 0; i <= k; ++i) filter.coeffs[2 * i] = 0.5 * g.taps[i];
    filter.coeffs[k] = 0.5;
    filter.zero_stride = 2;
    filter.rate_hz = rate_hz;
    const double measured = MeasuredStopband(
        [&](std::span<const double> f) { return MagnitudeResponse(filter, f); },
        f_sb, 8192);
    if (measured >= a_s_db - 0.5) return filter;
  }
  std::ostringstream msg;
  msg << "half-band FIR cannot reach " << a_s_db << " dB below order "
      << max_order;
  throw DesignError(msg.str());
}

std::complex<double> FrequencyResponse(const HalfBandIir& filter, double f) {
  const std::complex<double> z_inv = std::polar(1.0, -2.0 * kPi * f);
  const std::complex<double> z_inv2 = z_inv * z_inv;
  return 0.5 * (AllpassChain(filter.branch0, z_inv2) +
                z_inv * AllpassChain(filter.branch1, z_inv2));
}

double MagnitudeResponse(const HalfBandIir& filter, double f) {
  return std::abs(FrequencyResponse(filter, f));
}

double MagnitudeResponse(const FirFilter& filter, double f) {
  return MagnitudeResponse(filter, std::span<const double>(&f, 1)).front();
}

std::vector<double> MagnitudeResponse(const FirFilter& filter,
                                      std::span<const double> freqs) {
  std::vector<double> out(freqs.size());
  if (filter.linear_phase) {
    kernels::SymmetricFirAmplitude(filter.coeffs, freqs, out);
    for (double& v : out) v = std::abs(v);
  } else {
    kernels::FirMagnitude(filter.coeffs, freqs, out);
  }
  return out;
}

std::vector<double> MagnitudeResponse(const HalfBandIir& filter,
                                      std::span<const double> freqs) {
  std::vector<double> out(freqs.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(freqs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = MagnitudeResponse(filter, freqs[i]);
  }
  return out;
}

std::vector<std::complex<double>> Poles(const HalfBandIir& filter) {
  std::vector<std::complex<double>> poles;
  for (const auto* branch : {&filter.branch0, &filter.branch1}) {
    for (double a : *branch) {
      const std::complex<double> r = std::sqrt(std::complex<double>(-a, 0.0));
      poles.push_back(r);
      poles.push_back(-r);
    }
  }
  return poles;
}

SpecReport ValidateResponse(const BatchMagnitude& magnitude, double nyquist_hz,
                            const SpecCriteria& criteria) {
  const int n_stop = std::max(criteria.grid_points, 2);
  const int n_pass = std::max(criteria.grid_points / 4, 2);
  const int n_edge = 2048;
  std::vector<double> f;
  f.reserve(n_stop + n_pass + n_edge + 1);
  f.push_back(0.0);
  for (int i = 0; i < n_pass; ++i) {
    f.push_back(criteria.passband_hz * i / (n_pass - 1));
  }
  const std::size_t stop_begin = f.size();
  const double sb = criteria.stopband_hz;
  if (sb < nyquist_hz) {
    for (int i = 0; i < n_stop; ++i) {
      f.push_back(sb + (nyquist_hz - sb) * i / (n_stop - 1));
    }
    const double edge_span = (nyquist_hz - sb) / 64.0;
    for (int i = 0; i < n_edge; ++i) {
      f.push_back(sb + edge_span * i / (n_edge - 1));
    }
  }
  const std::vector<double> m = magnitude(f);

  SpecReport r;
  r.dc_gain_db = 20.0 * std::log10(m[0]);
  double dev = 0.0;
  for (std::size_t i = 1; i < stop_begin; ++i) {
    dev = std::max(dev, std::abs(20.0 * std::log10(std::max(m[i], 1e-300))));
  }
  r.passband_dev_db = dev;
  double atten = std::numeric_limits<double>::infinity();
  for (std::size_t i = stop_begin; i < m.size(); ++i) {
    atten = std::min(atten, -20.0 * std::log10(std::max(m[i], 1e-300)));
  }
  r.stopband_atten_db = stop_begin == m.size() ? 0.0 : atten;
  r.passband_ok = r.passband_dev_db <= criteria.max_passband_dev_db;
  r.stopband_ok = stop_begin < m.size() &&
                  r.stopband_atten_db >= criteria.min_stopband_atten_db;
  r.dc_ok = std::abs(r.dc_gain_db) <= criteria.max_dc_dev_db;
  r.passes = r.passband_ok && r.stopband_ok && r.dc_ok;
  return r;
}

SpecReport ValidateAgainstSpec(const FirFilter& filter,
                               const SpecCriteria& criteria) {
  RequireFinitePositive(filter.rate_hz, "filter rate");
  const double rate = filter.rate_hz;
  return ValidateResponse(
      [&](std::span<const double> hz) {
        std::vector<double> f(hz.begin(), hz.end());
        for (double& v : f) v /= rate;
        return MagnitudeResponse(filter, f);
      },
      0.5 * rate, criteria);
}

SpecReport ValidateAgainstSpec(const HalfBandIir& filter,
                               const SpecCriteria& criteria) {
  RequireFinitePositive(filter.rate_hz, "filter rate");
  const double rate = filter.rate_hz;
  return ValidateResponse(
      [&](std::span<const double> hz) {
        std::vector<double> f(hz.begin(), hz.end());
        for (double& v : f) v /= rate;
        return MagnitudeResponse(filter, f);
      },
      0.5 * rate, criteria);
}

FirFilter DesignEquirippleToSpec(const DesignSpecification& spec,
                                const SpecCriteria& criteria) {
  const RippleAmplitudes r = ComputeRippleAmplitudes(spec.a_p, spec.a_s);
  int order = BellangerOrder(r.delta1, r.delta2, spec.transition_width());
  for (int attempt = 0; attempt < 64; ++attempt, order += 2) {
    FirFilter f = DesignEquirippleLowpass(spec, order, r.delta1 / r.delta2);
    if (ValidateAgainstSpec(f, criteria).passes) return f;
  }
  throw DesignError("equiripple design did not meet the specification");
}

namespace designs {

SpecCriteria CriteriaFor(const DesignSpecification& spec) {
  SpecCriteria c;
  c.passband_hz = 16'000.0;
  c.stopband_hz = spec.f_sb * spec.filter_rate_hz;
  c.min_stopband_atten_db = spec.a_s - 0.5;
  return c;
}

DesignSpecification NbKaiserSpec() {
  return DesignSpecification::FromHz(11'500.0, 28'100.0, 0.5, 120.0,
                                     kNbFilterRateHz);
}
DesignSpecification NbRemezSpec() {
  return DesignSpecification::FromHz(16'000.0, 28'100.0, 0.5, 120.0,
                                     kNbFilterRateHz);
}
DesignSpecification WbKaiserSpec() {
  return DesignSpecification::FromHz(0.0, 60'100.0, 0.5, 120.0,
                                     kNbFilterRateHz);
}
DesignSpecification WbRemezSpec() {
  return DesignSpecification::FromHz(16'000.0, 60'100.0, 0.5, 120.0,
                                     kNbFilterRateHz);
}

const FirFilter& NbKaiser() {
  static const FirFilter f = DesignKaiserLowpass(NbKaiserSpec());
  return f;
}
const FirFilter& NbRemez() {
  static const FirFilter f =
      DesignEquirippleToSpec(NbRemezSpec(), CriteriaFor(NbRemezSpec()));
  return f;
}
const FirFilter& WbKaiser() {
  static const FirFilter f = DesignKaiserLowpass(WbKaiserSpec());
  return f;
}
const FirFilter& WbRemez() {
  static const FirFilter f =
      DesignEquirippleToSpec(WbRemezSpec(), CriteriaFor(WbRemezSpec()));
  return f;
}
const HalfBandIir& HbIir() {
  static const HalfBandIir f = DesignHalfBandEllipticIir(
      28'100.0 / kHalfBandRateHz, 120.0, kHalfBandRateHz);
  return f;
}
const FirFilter& HbFir() {
  static const FirFilter f =
      DesignHalfBandFir(120.0, 28'100.0 / kHalfBandRateHz, kHalfBandRateHz);
  return f;
}

}  // namespace designs

}  // namespace mrafx
