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

// Tone-based evaluation of nonlinear processors: sine generation, windowed
// spectra, harmonic extraction and band-limited resynthesis, and the
// ESR / MESR / ASR / NMR metrics.
//
// Harmonic phases are referred to the first sample of the analyzed signal:
// component k is a_k sin(2 pi k f0 t + phi_k) with t = n / rate, so sets
// taken from signals at different sample rates are directly comparable.

#ifndef MRAFX_ANALYSIS_H_
#define MRAFX_ANALYSIS_H_

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mrafx {

// Reported in place of -inf when a metric's numerator vanishes.
inline constexpr double kFloorDb = -300.0;

// 20 log10(amplitude), clamped at kFloorDb.
double AmplitudeDb(double amplitude);
// 10 log10(ratio), clamped at kFloorDb.
double PowerRatioDb(double ratio);

// x_n = g sin(2 pi f0 n / rate). Throws ArgumentError unless 0 < f0 < rate/2.
std::vector<double> GenSine(double f0_hz, double rate_hz, double g,
                            double duration_s);
std::vector<double> GenSineSamples(double f0_hz, double rate_hz, double g,
                                   std::size_t n);

// The 25 piano keys 1 + round(i * 87 / 24), i = 0..24, from A0 (27.5 Hz)
// to C8 (4186.01 Hz).
std::vector<double> DefaultF0Grid();

// Symmetric Dolph-Chebyshev window, peak normalized to 1.
std::vector<double> ChebyshevWindow(std::size_t n, double attenuation_db = 120.0);

struct Spectrum {
  // Amplitude-normalized one-sided bins: a sine of amplitude a centred on a
  // bin reads |bins[k]| = a.
  std::vector<std::complex<double>> bins;
  double rate_hz = 0.0;
  std::size_t length = 0;       // frame / FFT length
  std::size_t start_index = 0;  // position of the frame in its signal
  double attenuation_db = 120.0;
  double window_sum = 0.0;
  double window_energy = 0.0;  // sum of squared window samples
  std::vector<double> window;
  std::vector<double> windowed;  // window * frame

  double bin_hz() const { return rate_hz / static_cast<double>(length); }
  std::vector<double> MagnitudeDb() const;
};

struct SpectrumOptions {
  std::size_t min_length = 4096;
  double attenuation_db = 120.0;
};

// Windowed DFT of `frame`, which starts at sample `start_index` of the
// signal the phases should be referred to.
Spectrum AnalyzeSpectrum(std::span<const double> frame, double rate_hz,
                         std::size_t start_index = 0,
                         const SpectrumOptions& options = {});

// The last `frame_length` samples of `signal`, skipping onset transients.
Spectrum AnalyzeTail(std::span<const double> signal, double rate_hz,
                     std::size_t frame_length = 1u << 17,
                     const SpectrumOptions& options = {});

// Writes "Hz dB" lines.
void WriteSpectrumText(const Spectrum& spectrum, const std::string& path);

struct HarmonicSet {
  double f0_hz = 0.0;
  std::vector<double> amplitudes;  // harmonic k + 1 at index k
  std::vector<double> phases;
  // Mean of the frame. Kept apart from the harmonics: it is removed before
  // residual metrics but does not enter ESR or MESR.
  double dc = 0.0;

  std::size_t size() const { return amplitudes.size(); }
  double Energy() const;  // mean-square power of the harmonic part
};

// Number of harmonics k f0 strictly below rate / 2.
std::size_t HarmonicCount(double f0_hz, double rate_hz);

// Amplitude and phase at every k f0 below Nyquist, read from the
// windowed frame at the exact harmonic frequencies. The reads are refined
// jointly (each pass subtracts the windowed resynthesis and re-reads the
// residual), so a purely harmonic frame is recovered to rounding.
// Amplitudes below 1e-15 are recorded as 0.
HarmonicSet ExtractHarmonics(const Spectrum& spectrum, double f0_hz,
                             int refinement_passes = 3);

// sum_k a_k sin(2 pi k f0 (n + start) / rate + phi_k) for k f0 < rate / 2.
std::vector<double> ResynthBandlimited(const HarmonicSet& h, double rate_hz,
                                       std::size_t length,
                                       std::size_t start_index = 0,
                                       bool include_dc = false);

// The set delayed by tau seconds (phases retarded by 2 pi k f0 tau).
HarmonicSet DelayHarmonics(const HarmonicSet& h, double tau_s);

// Delay of `test` relative to `ref` in seconds within +-max_delay_s: the
// peak of the cross-correlation of the two band-limited resyntheses, which
// for harmonic sets is sum_k a_k a'_k cos(phi'_k - phi_k + 2 pi k f0 tau).
double EstimateDelay(const HarmonicSet& ref, const HarmonicSet& test,
                     double max_delay_s);

// 10 log10(|y - y'|^2 / |y|^2). Throws UndefinedMetricError for a silent
// reference and ArgumentError for mismatched lengths.
double Esr(std::span<const double> y_bl, std::span<const double> y_bl_prime);

// 10 log10(sum (a_k - a'_k)^2 / sum a_k^2) over the harmonics of `h`
// (missing entries of `h_prime` count as zero).
double Mesr(const HarmonicSet& h, const HarmonicSet& h_prime);

// Energy of the windowed residual (frame minus windowed resynthesis of h,
// DC included) relative to the windowed resynthesis.
double Asr(const Spectrum& spectrum, const HarmonicSet& h);

// Simplified noise-to-mask ratio, see the implementation for the model.
double Nmr(const Spectrum& spectrum, const HarmonicSet& h);

// Bark value (Zwicker and Terhardt) and threshold in quiet (Terhardt, dB
// SPL) used by Nmr.
double Bark(double hz);
double ThresholdInQuietDb(double hz);
// Level of a full-scale (amplitude 1) sine in dB SPL.
inline constexpr double kFullScaleSineDbSpl = 92.0;

struct MetricsReport {
  double esr_db = kFloorDb;
  double mesr_db = kFloorDb;
  double asr_db = kFloorDb;
  double nmr_db = kFloorDb;
};

}  // namespace mrafx

#endif  // MRAFX_ANALYSIS_H_
