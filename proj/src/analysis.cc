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

#include "mrafx/analysis.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>

#include "mrafx/errors.h"
#include "mrafx/fft.h"
#include "mrafx/kernels.h"

namespace mrafx {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAmplitudeEpsilon = 1e-15;

double WrapPhase(double p) {
  p = std::remainder(p, kTwoPi);
  return p <= -kPi ? p + kTwoPi : p;
}

std::vector<double> HarmonicFreqs(double f0_hz, double rate_hz,
                                  std::size_t count) {
  std::vector<double> f(count);
  for (std::size_t k = 0; k < count; ++k) {
    f[k] = static_cast<double>(k + 1) * f0_hz / rate_hz;
  }
  return f;
}

// w * (dc + harmonics) over the spectrum's frame.
std::vector<double> WindowedModel(const Spectrum& s, const HarmonicSet& h,
                                  bool include_dc) {
  std::vector<double> y =
      ResynthBandlimited(h, s.rate_hz, s.length, s.start_index, include_dc);
  for (std::size_t t = 0; t < y.size(); ++t) y[t] *= s.window[t];
  return y;
}

std::vector<double> WindowedResidual(const Spectrum& s, const HarmonicSet& h) {
  std::vector<double> r = WindowedModel(s, h, /*include_dc=*/true);
  for (std::size_t t = 0; t < r.size(); ++t) r[t] = s.windowed[t] - r[t];
  return r;
}

double SumSquares(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

// Critical-band edges in Hz; the last band extends to Nyquist.
constexpr std::array<double, 25> kBandEdgesHz = {
    0,    100,  200,  300,  400,  510,  630,  770,  920,  1080, 1270, 1480, 1720,
    2000, 2320, 2700, 3150, 3700, 4400, 5300, 6400, 7700, 9500, 12000, 15500};

struct Band {
  double lo = 0.0;
  double hi = 0.0;
  double bark = 0.0;
};

std::vector<Band> CriticalBands(double nyquist_hz) {
  std::vector<Band> bands;
  for (std::size_t i = 0; i < kBandEdgesHz.size(); ++i) {
    const double lo = kBandEdgesHz[i];
    if (lo >= nyquist_hz) break;
    double hi = i + 1 < kBandEdgesHz.size() ? kBandEdgesHz[i + 1] : nyquist_hz;
    hi = std::min(hi, nyquist_hz);
    bands.push_back({lo, hi, Bark(0.5 * (lo + hi))});
  }
  return bands;
}

std::size_t BandOf(const std::vector<Band>& bands, double hz) {
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (hz < bands[i].hi || i + 1 == bands.size()) return i;
  }
  return bands.size() - 1;
}

}  // namespace

double AmplitudeDb(double amplitude) {
  const double a = std::abs(amplitude);
  if (!(a > 0.0)) return kFloorDb;
  return std::max(kFloorDb, 20.0 * std::log10(a));
}

double PowerRatioDb(double ratio) {
  if (!(ratio > 0.0)) return kFloorDb;
  return std::max(kFloorDb, 10.0 * std::log10(ratio));
}

std::vector<double> GenSineSamples(double f0_hz, double rate_hz, double g,
                                   std::size_t n) {
  if (!(rate_hz > 0.0)) throw ArgumentError("gen_sine: rate must be positive");
  if (!(f0_hz > 0.0) || !(f0_hz < 0.5 * rate_hz)) {
    throw ArgumentError("gen_sine: f0 must lie in (0, rate/2)");
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Reduce the phase to one cycle before scaling by 2 pi.
    const double cycles = std::fmod(f0_hz * static_cast<double>(i), rate_hz) / rate_hz;
    x[i] = g * std::sin(kTwoPi * cycles);
  }
  return x;
}

std::vector<double> GenSine(double f0_hz, double rate_hz, double g,
                            double duration_s) {
  if (!(duration_s >= 0.0)) throw ArgumentError("gen_sine: negative duration");
  return GenSineSamples(f0_hz, rate_hz, g,
                        static_cast<std::size_t>(std::llround(duration_s * rate_hz)));
}

std::vector<double> DefaultF0Grid() {
  std::vector<double> f;
  for (int i = 0; i <= 24; ++i) {
    const int key = 1 + static_cast<int>(std::lround(i * 87.0 / 24.0));
    f.push_back(440.0 * std::pow(2.0, (key - 49) / 12.0));
  }
  return f;
}

std::vector<double> ChebyshevWindow(std::size_t n, double attenuation_db) {
  if (n == 0) return {};
  if (n == 1) return {1.0};
  const double order = static_cast<double>(n) - 1.0;
  const double beta =
      std::cosh(std::acosh(std::pow(10.0, std::abs(attenuation_db) / 20.0)) / order);
  // Chebyshev polynomial samples of the frequency response, then an FFT.
  std::vector<std::complex<double>> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = beta * std::cos(kPi * static_cast<double>(k) / n);
    double v;
    if (x > 1.0) {
      v = std::cosh(order * std::acosh(x));
    } else if (x < -1.0) {
      v = (n % 2 == 1 ? 1.0 : -1.0) * std::cosh(order * std::acosh(-x));
    } else {
      v = std::cos(order * std::acos(x));
    }
    p[k] = v;
    if (n % 2 == 0) p[k] *= std::polar(1.0, kPi * static_cast<double>(k) / n);
  }
  const auto spec = Fft(p);
  std::vector<double> w;
  w.reserve(n);
  if (n % 2 == 1) {
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = half - 1; i >= 1; --i) w.push_back(spec[i].real());
    for (std::size_t i = 0; i < half; ++i) w.push_back(spec[i].real());
  } else {
    const std::size_t half = n / 2 + 1;
    for (std::size_t i = half - 1; i >= 1; --i) w.push_back(spec[i].real());
    for (std::size_t i = 1; i < half; ++i) w.push_back(spec[i].real());
  }
  const double peak = *std::max_element(w.begin(), w.end());
  for (double& v : w) v /= peak;
  return w;
}

std::vector<double> Spectrum::MagnitudeDb() const {
  std::vector<double> db(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) db[k] = AmplitudeDb(std::abs(bins[k]));
  return db;
}

Spectrum AnalyzeSpectrum(std::span<const double> frame, double rate_hz,
                         std::size_t start_index,
                         const SpectrumOptions& options) {
  if (!(rate_hz > 0.0)) throw ArgumentError("spectrum: rate must be positive");
  if (frame.size() < options.min_length) {
    throw ArgumentError("spectrum: frame shorter than " +
                        std::to_string(options.min_length) + " samples");
  }
  Spectrum s;
  s.rate_hz = rate_hz;
  s.length = frame.size();
  s.start_index = start_index;
  s.attenuation_db = options.attenuation_db;
  s.window = ChebyshevWindow(frame.size(), options.attenuation_db);
  s.windowed.resize(frame.size());
  for (std::size_t t = 0; t < frame.size(); ++t) {
    s.windowed[t] = s.window[t] * frame[t];
    s.window_sum += s.window[t];
    s.window_energy += s.window[t] * s.window[t];
  }
  s.bins = Rfft(s.windowed);
  const double scale = 2.0 / s.window_sum;
  for (auto& b : s.bins) b *= scale;
  return s;
}

Spectrum AnalyzeTail(std::span<const double> signal, double rate_hz,
                     std::size_t frame_length, const SpectrumOptions& options) {
  const std::size_t len = std::min(frame_length, signal.size());
  return AnalyzeSpectrum(signal.subspan(signal.size() - len), rate_hz,
                         signal.size() - len, options);
}

void WriteSpectrumText(const Spectrum& spectrum, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  const auto db = spectrum.MagnitudeDb();
  for (std::size_t k = 0; k < db.size(); ++k) {
    out << static_cast<double>(k) * spectrum.bin_hz() << " " << db[k] << "\n";
  }
}

double HarmonicSet::Energy() const {
  double e = 0.0;
  for (double a : amplitudes) e += 0.5 * a * a;
  return e;
}

std::size_t HarmonicCount(double f0_hz, double rate_hz) {
  if (!(f0_hz > 0.0)) throw ArgumentError("harmonics: f0 must be positive");
  std::size_t k = 0;
  while (static_cast<double>(k + 1) * f0_hz < 0.5 * rate_hz) ++k;
  return k;
}

HarmonicSet ExtractHarmonics(const Spectrum& spectrum, double f0_hz,
                             int refinement_passes) {
  const std::size_t count = HarmonicCount(f0_hz, spectrum.rate_hz);
  HarmonicSet h;
  h.f0_hz = f0_hz;
  h.amplitudes.assign(count, 0.0);
  h.phases.assign(count, 0.0);

  std::vector<double> freqs = HarmonicFreqs(f0_hz, spectrum.rate_hz, count);
  freqs.push_back(0.0);
  std::vector<std::complex<double>> c(count + 1, 0.0);  // a e^{j phi}; dc last
  std::vector<std::complex<double>> reads(count + 1);
  const double start = static_cast<double>(spectrum.start_index);
  const std::complex<double> two_j(0.0, 2.0);

  std::vector<double> residual = spectrum.windowed;
  for (int pass = 0; pass <= refinement_passes; ++pass) {
    kernels::WindowedDtft(residual, start, freqs, reads);
    for (std::size_t k = 0; k < count; ++k) {
      c[k] += two_j * reads[k] / spectrum.window_sum;
    }
    c[count] += reads[count].real() / spectrum.window_sum;
    for (std::size_t k = 0; k < count; ++k) {
      h.amplitudes[k] = std::abs(c[k]);
      h.phases[k] = std::arg(c[k]);
    }
    h.dc = c[count].real();
    if (pass < refinement_passes) residual = WindowedResidual(spectrum, h);
  }
  for (std::size_t k = 0; k < count; ++k) {
    if (h.amplitudes[k] < kAmplitudeEpsilon) {
      h.amplitudes[k] = 0.0;
      h.phases[k] = 0.0;
    }
  }
  return h;
}

std::vector<double> ResynthBandlimited(const HarmonicSet& h, double rate_hz,
                                       std::size_t length,
                                       std::size_t start_index,
                                       bool include_dc) {
  std::vector<double> y(length, 0.0);
  if (h.size() == 0 && !include_dc) return y;
  const std::size_t count = std::min(h.size(), HarmonicCount(h.f0_hz, rate_hz));
  const std::vector<double> freqs = HarmonicFreqs(h.f0_hz, rate_hz, count);
  kernels::SynthesizeSines(include_dc ? h.dc : 0.0,
                           std::span(h.amplitudes).first(count),
                           std::span(h.phases).first(count), freqs,
                           static_cast<double>(start_index), y);
  return y;
}

HarmonicSet DelayHarmonics(const HarmonicSet& h, double tau_s) {
  HarmonicSet out = h;
  for (std::size_t k = 0; k < h.size(); ++k) {
    out.phases[k] =
        WrapPhase(h.phases[k] - kTwoPi * static_cast<double>(k + 1) * h.f0_hz * tau_s);
  }
  return out;
}

double EstimateDelay(const HarmonicSet& ref, const HarmonicSet& test,
                     double max_delay_s) {
  const std::size_t count = std::min(ref.size(), test.size());
  if (count == 0 || !(max_delay_s > 0.0)) return 0.0;
  std::vector<double> w(count), dphi(count), omega(count);
  for (std::size_t k = 0; k < count; ++k) {
    w[k] = ref.amplitudes[k] * test.amplitudes[k];
    dphi[k] = test.phases[k] - ref.phases[k];
    omega[k] = kTwoPi * static_cast<double>(k + 1) * ref.f0_hz;
  }
  auto corr = [&](double tau) {
    double acc = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      acc += w[k] * std::cos(dphi[k] + omega[k] * tau);
    }
    return acc;
  };
  // Sample finely enough to resolve the highest weighted harmonic.
  std::size_t top = 0;
  for (std::size_t k = 0; k < count; ++k) {
    if (w[k] > 0.0) top = k;
  }
  const double step = 1.0 / (16.0 * omega[top] / kTwoPi);
  const auto n_steps = static_cast<long long>(std::ceil(max_delay_s / step));
  double best_tau = 0.0;
  double best = corr(0.0);
  for (long long i = -n_steps; i <= n_steps; ++i) {
    const double tau = static_cast<double>(i) * step;
    const double v = corr(tau);
    if (v > best) {
      best = v;
      best_tau = tau;
    }
  }
  // Golden-section polish within one grid step.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_tau - step;
  double b = best_tau + step;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = corr(x1);
  double f2 = corr(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = corr(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = corr(x2);
    }
  }
  return std::clamp(0.5 * (a + b), -max_delay_s, max_delay_s);
}

double Esr(std::span<const double> y_bl, std::span<const double> y_bl_prime) {
  if (y_bl.size() != y_bl_prime.size()) {
    throw ArgumentError("esr: signals differ in length");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < y_bl.size(); ++i) {
    const double e = y_bl[i] - y_bl_prime[i];
    num += e * e;
    den += y_bl[i] * y_bl[i];
  }
  if (!(den > 0.0)) throw UndefinedMetricError("esr: silent reference");
  return PowerRatioDb(num / den);
}

double Mesr(const HarmonicSet& h, const HarmonicSet& h_prime) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double a = h.amplitudes[k];
    const double b = k < h_prime.size() ? h_prime.amplitudes[k] : 0.0;
    num += (a - b) * (a - b);
    den += a * a;
  }
  if (!(den > 0.0)) throw UndefinedMetricError("mesr: silent reference");
  return PowerRatioDb(num / den);
}

double Asr(const Spectrum& spectrum, const HarmonicSet& h) {
  const std::vector<double> reference = WindowedModel(spectrum, h, false);
  const double den = SumSquares(reference);
  if (!(den > 0.0)) throw UndefinedMetricError("asr: no harmonic energy");
  return PowerRatioDb(SumSquares(WindowedResidual(spectrum, h)) / den);
}

double Bark(double hz) {
  return 13.0 * std::atan(0.00076 * hz) +
         3.5 * std::atan((hz / 7500.0) * (hz / 7500.0));
}

double ThresholdInQuietDb(double hz) {
  const double f = std::max(hz, 20.0) / 1000.0;
  return 3.64 * std::pow(f, -0.8) - 6.5 * std::exp(-0.6 * (f - 3.3) * (f - 3.3)) +
         1e-3 * f * f * f * f;
}

// Harmonic (masker) power is gathered per critical band, spread across
// bands with slopes of 25 dB/Bark towards lower and 10 dB/Bark towards
// higher bands, and lowered by 14.5 + z dB. Each band's threshold is the
// larger of that and the threshold in quiet. Residual power per band (from
// the window-consistent residual spectrum) is divided by its threshold and
// the ratios are averaged linearly across bands.
double Nmr(const Spectrum& spectrum, const HarmonicSet& h) {
  const double nyquist = 0.5 * spectrum.rate_hz;
  const std::vector<Band> bands = CriticalBands(nyquist);
  const std::size_t nb = bands.size();

  std::vector<double> masker(nb, 0.0);
  const std::size_t count = std::min(h.size(), HarmonicCount(h.f0_hz, spectrum.rate_hz));
  for (std::size_t k = 0; k < count; ++k) {
    const double hz = static_cast<double>(k + 1) * h.f0_hz;
    masker[BandOf(bands, hz)] += 0.5 * h.amplitudes[k] * h.amplitudes[k];
  }
  double total_masker = 0.0;
  for (double m : masker) total_masker += m;
  if (!(total_masker > 0.0)) throw UndefinedMetricError("nmr: no harmonic energy");

  const double spl_offset = kFullScaleSineDbSpl - 10.0 * std::log10(0.5);
  std::vector<double> threshold(nb, 0.0);
  for (std::size_t j = 0; j < nb; ++j) {
    double spread = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
      if (masker[i] == 0.0) continue;
      const double dz = bands[j].bark - bands[i].bark;
      const double slope_db = dz < 0.0 ? 25.0 * dz : -10.0 * dz;
      spread += masker[i] * std::pow(10.0, slope_db / 10.0);
    }
    spread *= std::pow(10.0, -(14.5 + bands[j].bark) / 10.0);
    const double quiet = std::pow(
        10.0, (ThresholdInQuietDb(0.5 * (bands[j].lo + bands[j].hi)) - spl_offset) / 10.0);
    threshold[j] = std::max(spread, quiet);
  }

  const std::vector<double> residual = WindowedResidual(spectrum, h);
  const auto r = Rfft(residual);
  const double n = static_cast<double>(spectrum.length);
  const double norm = 1.0 / (n * spectrum.window_energy);
  std::vector<double> noise(nb, 0.0);
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double hz = static_cast<double>(k) * spectrum.bin_hz();
    const bool edge = k == 0 || (spectrum.length % 2 == 0 && k + 1 == r.size());
    noise[BandOf(bands, hz)] += (edge ? 1.0 : 2.0) * std::norm(r[k]) * norm;
  }
  double mean = 0.0;
  for (std::size_t j = 0; j < nb; ++j) mean += noise[j] / threshold[j];
  return PowerRatioDb(mean / static_cast<double>(nb));
}

}  // namespace mrafx
