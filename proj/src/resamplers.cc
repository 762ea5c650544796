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

#include "mrafx/resamplers.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "mrafx/errors.h"
#include "mrafx/fft.h"

namespace mrafx {
namespace {

bool IsPowerOfTwo(long long v) { return v >= 1 && (v & (v - 1)) == 0; }

int Log2(long long v) {
  int k = 0;
  while ((1LL << k) < v) ++k;
  return k;
}

FirFilter UnitImpulse() {
  FirFilter f;
  f.coeffs = {1.0};
  return f;
}

}  // namespace

double IdealCutoff(long long l, long long m) {
  if (l < 1 || m < 1) throw ArgumentError("ideal_cutoff: l and m must be >= 1");
  return 1.0 / (2.0 * static_cast<double>(std::max(l, m)));
}

Ratio RateRatio(double from_rate_hz, double to_rate_hz) {
  if (!(from_rate_hz > 0.0) || !(to_rate_hz > 0.0)) {
    throw ArgumentError("sample rates must be positive");
  }
  // Rates in the project are integer Hz or simple decimals; scale to
  // millihertz before reducing.
  const long long a = std::llround(to_rate_hz * 1000.0);
  const long long b = std::llround(from_rate_hz * 1000.0);
  if (std::abs(a - to_rate_hz * 1000.0) > 1e-6 ||
      std::abs(b - from_rate_hz * 1000.0) > 1e-6) {
    throw ArgumentError("sample rates must be multiples of 1 mHz");
  }
  const long long g = std::gcd(a, b);
  return {a / g, b / g};
}

// --- RationalResampler -----------------------------------------------------

RationalResampler::RationalResampler(const FirFilter& filter, int l, int m)
    : l_(l), m_(m), order_(filter.order()) {
  if (l < 1 || m < 1) throw ArgumentError("resampler: l and m must be >= 1");
  if (std::gcd(l, m) != 1) throw ArgumentError("resampler: l and m not coprime");
  if (filter.coeffs.empty()) throw ArgumentError("resampler: empty filter");
  const int n_taps = static_cast<int>(filter.coeffs.size());
  taps_per_phase_ = (n_taps + l - 1) / l;
  bank_.assign(static_cast<std::size_t>(l) * taps_per_phase_, 0.0);
  for (int p = 0; p < l; ++p) {
    for (int j = 0; j < taps_per_phase_; ++j) {
      const int k = p + l * j;
      if (k < n_taps) bank_[p * taps_per_phase_ + j] = l * filter.coeffs[k];
    }
  }
  history_.assign(2 * static_cast<std::size_t>(taps_per_phase_), 0.0);
}

// Output n corresponds to index n*m of the l-fold zero-stuffed stream, whose
// filtered value is sum_j h[p + l j] x[i - j] with i = floor(n m / l) and
// p = n m mod l. Every input therefore emits the outputs whose phase falls
// in [0, l), stepping the phase by m. The history is stored twice so the
// newest taps_per_phase samples are always contiguous.
void RationalResampler::Process(std::span<const double> in,
                                std::vector<double>& out) {
  const int t = taps_per_phase_;
  out.reserve(out.size() + in.size() * l_ / m_ + 1);
  for (double x : in) {
    pos_ = (pos_ == 0 ? t : pos_) - 1;
    history_[pos_] = x;
    history_[pos_ + t] = x;
    const double* hist = history_.data() + pos_;
    while (phase_ < l_) {
      const double* taps = bank_.data() + static_cast<std::size_t>(phase_) * t;
      double acc = 0.0;
      for (int j = 0; j < t; ++j) acc += taps[j] * hist[j];
      out.push_back(acc);
      phase_ += m_;
    }
    phase_ -= l_;
  }
}

void RationalResampler::Reset() {
  std::fill(history_.begin(), history_.end(), 0.0);
  pos_ = 0;
  phase_ = 0;
}

double RationalResampler::latency_input_samples() const {
  return 0.5 * order_ / l_;
}

CostReport RationalResampler::Cost(double input_rate_hz,
                                   double reference_rate_hz) const {
  return FirCost(order_, l_, m_, reference_rate_hz, input_rate_hz);
}

std::unique_ptr<Resampler> RationalResampler::Clone() const {
  return std::make_unique<RationalResampler>(*this);
}

// --- HalfBandIirStage ------------------------------------------------------

double HalfBandIirStage::Chain::Step(double x) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double y = a[i] * (x - y1[i]) + x1[i];
    x1[i] = x;
    y1[i] = y;
    x = y;
  }
  return x;
}

void HalfBandIirStage::Chain::Reset() {
  std::fill(x1.begin(), x1.end(), 0.0);
  std::fill(y1.begin(), y1.end(), 0.0);
}

HalfBandIirStage::HalfBandIirStage(const HalfBandIir& filter,
                                   Direction direction)
    : direction_(direction) {
  branch0_.a = filter.branch0;
  branch1_.a = filter.branch1;
  for (Chain* c : {&branch0_, &branch1_}) {
    c->x1.assign(c->a.size(), 0.0);
    c->y1.assign(c->a.size(), 0.0);
  }
}

void HalfBandIirStage::Process(std::span<const double> in,
                               std::vector<double>& out) {
  if (direction_ == Direction::kInterpolate) {
    out.reserve(out.size() + 2 * in.size());
    for (double x : in) {
      out.push_back(branch0_.Step(x));
      out.push_back(branch1_.Step(x));
    }
    return;
  }
  out.reserve(out.size() + in.size() / 2 + 1);
  for (double x : in) {
    if (count_ % 2 == 0) {
      out.push_back(0.5 * (branch0_.Step(x) + pending_odd_));
    } else {
      pending_odd_ = branch1_.Step(x);
    }
    ++count_;
  }
}

void HalfBandIirStage::Reset() {
  branch0_.Reset();
  branch1_.Reset();
  pending_odd_ = 0.0;
  count_ = 0;
}

Ratio HalfBandIirStage::ratio() const {
  return direction_ == Direction::kInterpolate ? Ratio{2, 1} : Ratio{1, 2};
}

CostReport HalfBandIirStage::Cost(double input_rate_hz,
                                  double reference_rate_hz) const {
  const double low =
      direction_ == Direction::kInterpolate ? input_rate_hz : 0.5 * input_rate_hz;
  return HalfBandIirCost(static_cast<int>(branch0_.a.size() + branch1_.a.size()),
                         low, reference_rate_hz);
}

std::unique_ptr<Resampler> HalfBandIirStage::Clone() const {
  return std::make_unique<HalfBandIirStage>(*this);
}

// --- HalfBandFirStage ------------------------------------------------------

namespace {

int UniqueOffCentreTaps(const FirFilter& filter) {
  const int n = static_cast<int>(filter.coeffs.size());
  int nonzero = 0;
  for (int i = 0; i < n; ++i) {
    if (2 * i == n - 1) continue;
    if (filter.coeffs[i] != 0.0) ++nonzero;
  }
  return filter.linear_phase ? (nonzero + 1) / 2 : nonzero;
}

}  // namespace

HalfBandFirStage::HalfBandFirStage(const FirFilter& filter, Direction direction)
    : direction_(direction),
      order_(filter.order()),
      unique_taps_(UniqueOffCentreTaps(filter)),
      inner_(filter, direction == Direction::kInterpolate ? 2 : 1,
             direction == Direction::kInterpolate ? 1 : 2) {}

void HalfBandFirStage::Process(std::span<const double> in,
                               std::vector<double>& out) {
  inner_.Process(in, out);
}

CostReport HalfBandFirStage::Cost(double input_rate_hz,
                                  double reference_rate_hz) const {
  const double low =
      direction_ == Direction::kInterpolate ? input_rate_hz : 0.5 * input_rate_hz;
  return HalfBandFirCost(unique_taps_, order_, low, reference_rate_hz);
}

std::unique_ptr<Resampler> HalfBandFirStage::Clone() const {
  return std::make_unique<HalfBandFirStage>(*this);
}

// --- CascadeResampler ------------------------------------------------------

CascadeResampler::CascadeResampler(
    std::vector<std::unique_ptr<Resampler>> stages)
    : stages_(std::move(stages)) {
  if (stages_.empty()) throw ArgumentError("cascade: no stages");
  for (const auto& s : stages_) {
    if (!s) throw ArgumentError("cascade: null stage");
  }
  scratch_.resize(stages_.size());
}

void CascadeResampler::Process(std::span<const double> in,
                               std::vector<double>& out) {
  std::span<const double> cur = in;
  for (std::size_t i = 0; i + 1 < stages_.size(); ++i) {
    scratch_[i].clear();
    stages_[i]->Process(cur, scratch_[i]);
    cur = scratch_[i];
  }
  stages_.back()->Process(cur, out);
}

void CascadeResampler::Reset() {
  for (auto& s : stages_) s->Reset();
}

Ratio CascadeResampler::ratio() const {
  long long l = 1, m = 1;
  for (const auto& s : stages_) {
    const Ratio r = s->ratio();
    l *= r.l;
    m *= r.m;
    const long long g = std::gcd(l, m);
    l /= g;
    m /= g;
  }
  return {l, m};
}

double CascadeResampler::latency_input_samples() const {
  double total = 0.0;
  double rate = 1.0;  // stage input rate relative to the cascade input
  for (const auto& s : stages_) {
    total += s->latency_input_samples() / rate;
    rate *= s->ratio().value();
  }
  return total;
}

CostReport CascadeResampler::Cost(double input_rate_hz,
                                  double reference_rate_hz) const {
  CostReport total;
  total.reference_rate_hz = reference_rate_hz;
  total.latency_rate_hz = 1000.0;
  double rate = input_rate_hz;
  for (const auto& s : stages_) {
    total = total + s->Cost(rate, reference_rate_hz);
    rate *= s->ratio().value();
  }
  return total;
}

std::unique_ptr<Resampler> CascadeResampler::Clone() const {
  std::vector<std::unique_ptr<Resampler>> copies;
  copies.reserve(stages_.size());
  for (const auto& s : stages_) copies.push_back(s->Clone());
  return std::make_unique<CascadeResampler>(std::move(copies));
}

// --- EqLinterp -------------------------------------------------------------

EqLinterp::EqLinterp(int m) : m_(m) {
  if (m < 2) throw ArgumentError("eq-linterp: m must be >= 2");
}

void EqLinterp::Process(std::span<const double> in, std::vector<double>& out) {
  out.reserve(out.size() + in.size() * m_);
  for (double x : in) {
    const double s = shelf_.Step(x);
    for (int j = 0; j < m_; ++j) {
      out.push_back(prev_ + (static_cast<double>(j) / m_) * (s - prev_));
    }
    prev_ = s;
  }
}

void EqLinterp::Reset() {
  shelf_ = HighShelf{};
  prev_ = 0.0;
}

CostReport EqLinterp::Cost(double input_rate_hz,
                           double reference_rate_hz) const {
  return EqLinterpCost(m_, input_rate_hz, reference_rate_hz);
}

std::unique_ptr<Resampler> EqLinterp::Clone() const {
  return std::make_unique<EqLinterp>(*this);
}

// --- CIC -------------------------------------------------------------------

FirFilter CicFilter(int m, int stages, double rate_hz) {
  if (m < 1 || stages < 1) throw ArgumentError("cic: bad m or stages");
  std::vector<double> h = {1.0};
  for (int s = 0; s < stages; ++s) {
    std::vector<double> next(h.size() + m - 1, 0.0);
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (int j = 0; j < m; ++j) next[i + j] += h[i] / m;
    }
    h = std::move(next);
  }
  FirFilter f;
  f.coeffs = std::move(h);
  f.rate_hz = rate_hz;
  return f;
}

CicDecimator::CicDecimator(int m, int stages)
    : m_(m), stages_(stages), fir_(CicFilter(m, stages), 1, m) {
  if (m < 2) throw ArgumentError("cic: m must be >= 2");
}

void CicDecimator::Process(std::span<const double> in,
                           std::vector<double>& out) {
  scratch_.clear();
  fir_.Process(in, scratch_);
  out.reserve(out.size() + scratch_.size());
  for (double v : scratch_) out.push_back(shelf_.Step(v));
}

void CicDecimator::Reset() {
  fir_.Reset();
  shelf_ = HighShelf{};
}

double CicDecimator::latency_input_samples() const {
  return 0.5 * stages_ * (m_ - 1.0);
}

CostReport CicDecimator::Cost(double input_rate_hz,
                              double reference_rate_hz) const {
  return CicCost(m_, stages_, input_rate_hz / m_, reference_rate_hz);
}

std::unique_ptr<Resampler> CicDecimator::Clone() const {
  return std::make_unique<CicDecimator>(*this);
}

// --- FFT resampling --------------------------------------------------------

std::vector<double> FftResample(std::span<const double> x, long long l,
                                long long m) {
  if (l < 1 || m < 1) throw ArgumentError("fft_resample: l and m must be >= 1");
  const long long g = std::gcd(l, m);
  l /= g;
  m /= g;
  if (x.empty()) return {};
  if (l == 1 && m == 1) return {x.begin(), x.end()};

  const std::size_t n =
      (x.size() + static_cast<std::size_t>(m) - 1) / m * static_cast<std::size_t>(m);
  const std::size_t n_new = n / m * l;
  std::vector<double> padded(n, 0.0);
  std::copy(x.begin(), x.end(), padded.begin());
  const auto spec = Rfft(padded);

  std::vector<std::complex<double>> out_spec(n_new / 2 + 1);
  const std::size_t shared = std::min(n, n_new);
  const std::size_t keep = shared / 2 + 1;
  for (std::size_t k = 0; k < keep; ++k) out_spec[k] = spec[k];
  if (shared % 2 == 0) {
    // The Nyquist bin of the shorter length holds both the positive and
    // negative frequency contributions.
    if (n_new < n) {
      out_spec[shared / 2] = 2.0 * spec[shared / 2].real();
    } else if (n_new > n) {
      out_spec[shared / 2] *= 0.5;
    }
  }
  auto y = Irfft(out_spec, n_new);
  const double scale = static_cast<double>(n_new) / static_cast<double>(n);
  for (double& v : y) v *= scale;
  return y;
}

// --- Factories ---------------------------------------------------------------

std::unique_ptr<Resampler> MakeSingleStage(const FirFilter& filter,
                                           Direction direction) {
  if (direction == Direction::kInterpolate) {
    return std::make_unique<RationalResampler>(filter, 160, 147);
  }
  return std::make_unique<RationalResampler>(filter, 147, 160);
}

std::unique_ptr<Resampler> MakeTwoStage(const HalfBandIir& hb,
                                        const FirFilter& wb,
                                        Direction direction) {
  std::vector<std::unique_ptr<Resampler>> stages;
  if (direction == Direction::kInterpolate) {
    stages.push_back(std::make_unique<HalfBandIirStage>(hb, direction));
    stages.push_back(std::make_unique<RationalResampler>(wb, 80, 147));
  } else {
    stages.push_back(std::make_unique<RationalResampler>(wb, 147, 80));
    stages.push_back(std::make_unique<HalfBandIirStage>(hb, direction));
  }
  return std::make_unique<CascadeResampler>(std::move(stages));
}

BatchMagnitude TwoStageMagnitude(const HalfBandIir& hb, const FirFilter& wb) {
  return [hb, wb](std::span<const double> freqs_hz) {
    std::vector<double> f_hb(freqs_hz.size()), f_wb(freqs_hz.size());
    for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
      f_hb[i] = freqs_hz[i] / designs::kHalfBandRateHz;
      f_wb[i] = freqs_hz[i] / designs::kNbFilterRateHz;
    }
    auto a = MagnitudeResponse(hb, f_hb);
    const auto b = MagnitudeResponse(wb, f_wb);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    return a;
  };
}

std::unique_ptr<CascadeResampler> MakeHalfBandCascade(int m,
                                                      Direction direction,
                                                      HalfBandKind kind) {
  if (m < 2 || !IsPowerOfTwo(m)) {
    throw ArgumentError("half-band cascade: m must be a power of two >= 2");
  }
  std::vector<std::unique_ptr<Resampler>> stages;
  for (int i = 0; i < Log2(m); ++i) {
    if (kind == HalfBandKind::kIir) {
      stages.push_back(
          std::make_unique<HalfBandIirStage>(designs::HbIir(), direction));
    } else {
      stages.push_back(
          std::make_unique<HalfBandFirStage>(designs::HbFir(), direction));
    }
  }
  return std::make_unique<CascadeResampler>(std::move(stages));
}

Converter StreamConverter(const Resampler& prototype) {
  Converter c;
  c.ratio = prototype.ratio();
  c.latency_output_samples =
      prototype.latency_input_samples() * c.ratio.value();
  std::shared_ptr<const Resampler> proto = prototype.Clone();
  c.run = [proto](std::span<const double> x) {
    auto r = proto->Clone();
    return r->Process(x);
  };
  return c;
}

Converter FftConverter(long long l, long long m) {
  const long long g = std::gcd(l, m);
  Converter c;
  c.ratio = {l / g, m / g};
  c.run = [l, m](std::span<const double> x) { return FftResample(x, l, m); };
  return c;
}

Converter IdentityConverter() {
  Converter c;
  c.run = [](std::span<const double> x) {
    return std::vector<double>(x.begin(), x.end());
  };
  return c;
}

std::unique_ptr<Resampler> MakeNamedResampler(const std::string& method,
                                              double from_rate_hz,
                                              double to_rate_hz) {
  const Ratio r = RateRatio(from_rate_hz, to_rate_hz);
  if (r.l == 1 && r.m == 1) {
    return std::make_unique<RationalResampler>(UnitImpulse(), 1, 1);
  }
  const bool up = r.l > r.m;
  const Direction dir = up ? Direction::kInterpolate : Direction::kDecimate;
  const bool is_44_48 = (r == Ratio{160, 147}) || (r == Ratio{147, 160});
  const long long factor = up ? r.l : r.m;
  const bool is_pow2 = (up ? r.m == 1 : r.l == 1) && IsPowerOfTwo(factor);

  if (method == "nb-kaiser" || method == "nb-remez") {
    if (!is_44_48) throw ArgumentError(method + " supports 44.1 <-> 48 kHz only");
    return MakeSingleStage(
        method == "nb-kaiser" ? designs::NbKaiser() : designs::NbRemez(), dir);
  }
  if (method == "hb-wb-kaiser" || method == "hb-wb-remez") {
    if (!is_44_48) throw ArgumentError(method + " supports 44.1 <-> 48 kHz only");
    return MakeTwoStage(
        designs::HbIir(),
        method == "hb-wb-kaiser" ? designs::WbKaiser() : designs::WbRemez(),
        dir);
  }
  if (method == "c-hb-iir" || method == "c-hb-fir") {
    if (!is_pow2) throw ArgumentError(method + " needs a power-of-two ratio");
    return MakeHalfBandCascade(
        static_cast<int>(factor), dir,
        method == "c-hb-iir" ? HalfBandKind::kIir : HalfBandKind::kFir);
  }
  if (method == "eq-linterp") {
    if (!up || r.m != 1) {
      throw ArgumentError("eq-linterp needs an integer upsampling ratio");
    }
    return std::make_unique<EqLinterp>(static_cast<int>(r.l));
  }
  if (method == "cic") {
    if (up || r.l != 1) {
      throw ArgumentError("cic needs an integer downsampling ratio");
    }
    return std::make_unique<CicDecimator>(static_cast<int>(r.m));
  }
  throw ArgumentError("unknown resampling method '" + method + "'");
}

Converter MakeNamedConverter(const std::string& method, double from_rate_hz,
                             double to_rate_hz) {
  if (method == "fft") {
    const Ratio r = RateRatio(from_rate_hz, to_rate_hz);
    return FftConverter(r.l, r.m);
  }
  return StreamConverter(*MakeNamedResampler(method, from_rate_hz, to_rate_hz));
}

}  // namespace mrafx
