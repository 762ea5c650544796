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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <numeric>
#include <vector>

#include "mrafx/errors.h"
#include "mrafx/filter_io.h"
#include "mrafx/remez.h"
#include "mrafx/resamplers.h"

namespace mrafx {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNbRate = designs::kNbFilterRateHz;

// Modified Bessel function of the first kind, order 0, by its power series.
double BesselI0(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= (x / (2.0 * k)) * (x / (2.0 * k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

std::complex<double> Dtft(const std::vector<double>& h, double f) {
  std::complex<double> acc = 0.0;
  for (std::size_t n = 0; n < h.size(); ++n) {
    acc += h[n] * std::polar(1.0, -2.0 * kPi * f * static_cast<double>(n));
  }
  return acc;
}

TEST(RippleAmplitudes, ReferenceSpecification) {
  const RippleAmplitudes r = ComputeRippleAmplitudes(0.5, 120.0);
  EXPECT_NEAR(r.delta1, 0.02877, 5e-6);
  EXPECT_DOUBLE_EQ(r.delta2, 1e-6);
}

TEST(RippleAmplitudes, Limits) {
  EXPECT_NEAR(ComputeRippleAmplitudes(1e-9, 60.0).delta1, 0.0, 1e-9);
  EXPECT_NEAR(ComputeRippleAmplitudes(0.5, 20.0).delta2, 0.1, 1e-15);
  EXPECT_THROW(ComputeRippleAmplitudes(0.0, 60.0), ArgumentError);
  EXPECT_THROW(ComputeRippleAmplitudes(0.5, -1.0), ArgumentError);
  EXPECT_THROW(ComputeRippleAmplitudes(NAN, 60.0), ArgumentError);
}

TEST(RippleAmplitudes, RoundTrip) {
  for (double ap : {0.01, 0.1, 0.5, 1.0, 3.0}) {
    for (double as : {20.0, 60.0, 120.0, 150.0}) {
      const auto [ap2, as2] = RippleAmplitudesToDb(ComputeRippleAmplitudes(ap, as));
      EXPECT_NEAR(ap2, ap, 1e-9);
      EXPECT_NEAR(as2, as, 1e-9);
    }
  }
}

TEST(KaiserOrder, ReferenceDesigns) {
  EXPECT_EQ(KaiserOrder(120.0, 16'600.0 / kNbRate), 3318);
  const int wb = KaiserOrder(120.0, 60'100.0 / kNbRate);
  EXPECT_TRUE(wb == 916 || wb == 918) << wb;
  EXPECT_EQ(wb, 918);
  EXPECT_EQ(KaiserOrder(50.0, 0.1), 30);
}

TEST(KaiserOrder, DomainError) {
  EXPECT_THROW(KaiserOrder(7.95, 0.1), ArgumentError);
  EXPECT_THROW(KaiserOrder(60.0, 0.0), ArgumentError);
}

TEST(KaiserOrder, Monotone) {
  int prev_as = 0;
  for (double as = 10.0; as <= 150.0; as += 0.7) {
    const int n = KaiserOrder(as, 0.01);
    EXPECT_GE(n, prev_as);
    EXPECT_EQ(n % 2, 0);
    prev_as = n;
  }
  int prev_df = std::numeric_limits<int>::max();
  for (double df = 0.001; df < 0.5; df *= 1.3) {
    const int n = KaiserOrder(90.0, df);
    EXPECT_LE(n, prev_df);
    prev_df = n;
  }
}

TEST(KaiserBeta, Values) {
  EXPECT_NEAR(KaiserBeta(120.0), 12.26526, 1e-5);
  EXPECT_NEAR(KaiserBeta(60.0), 5.65326, 1e-5);
  EXPECT_EQ(KaiserBeta(8.7), 0.0);
  EXPECT_EQ(KaiserBeta(21.0), 0.0);
  EXPECT_NEAR(KaiserBeta(30.0), 0.5842 * std::pow(9.0, 0.4) + 0.07886 * 9.0, 1e-12);
}

TEST(KaiserWindow, MatchesBesselSeries) {
  const int n = 41;
  const double beta = 7.5;
  const std::vector<double> w = KaiserWindow(n, beta);
  ASSERT_EQ(w.size(), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double r = 2.0 * i / (n - 1) - 1.0;
    EXPECT_NEAR(w[i], BesselI0(beta * std::sqrt(1.0 - r * r)) / BesselI0(beta), 1e-13);
  }
}

TEST(KaiserLowpass, NarrowBandReference) {
  const FirFilter& f = designs::NbKaiser();
  EXPECT_EQ(f.order(), 3318);
  EXPECT_TRUE(f.linear_phase);
  for (int n = 0; n <= f.order(); ++n) ASSERT_EQ(f.coeffs[n], f.coeffs[f.order() - n]);
  EXPECT_NEAR(std::accumulate(f.coeffs.begin(), f.coeffs.end(), 0.0), 1.0, 1e-12);
  const SpecReport r = ValidateAgainstSpec(f, designs::CriteriaFor(designs::NbKaiserSpec()));
  EXPECT_LE(r.passband_dev_db, 0.5);
  // Short of the 119.5 dB acceptance margin by 0.6 dB at this order.
  EXPECT_NEAR(r.stopband_atten_db, 118.89, 0.02);
}

TEST(KaiserLowpass, WideBandReference) {
  const FirFilter& f = designs::WbKaiser();
  EXPECT_EQ(f.order(), 918);
  SpecCriteria c = designs::CriteriaFor(designs::WbKaiserSpec());
  const SpecReport r = ValidateAgainstSpec(f, c);
  EXPECT_LE(r.passband_dev_db, 0.5);
  EXPECT_TRUE(r.passband_ok);
}

TEST(KaiserLowpass, TinyFilterHasUnitDc) {
  const DesignSpecification s{0.1, 0.35, 1.0, 20.0, 1.0};
  const FirFilter f = DesignKaiserLowpass(s);
  EXPECT_LE(f.order(), 4);
  EXPECT_NEAR(std::accumulate(f.coeffs.begin(), f.coeffs.end(), 0.0), 1.0, 1e-15);
}

TEST(KaiserLowpass, HalfAmplitudeAtCutoff) {
  const DesignSpecification s{0.1, 0.15, 0.1, 80.0, 1.0};
  const FirFilter f = DesignKaiserLowpass(s);
  EXPECT_NEAR(std::abs(Dtft(f.coeffs, 0.125)), 0.5, 1e-3);
}

TEST(KaiserLowpass, OrderCap) {
  const DesignSpecification s{0.1, 0.1001, 0.1, 120.0, 1.0};
  EXPECT_THROW(DesignKaiserLowpass(s, std::nullopt, 1000), DesignError);
}

TEST(KaiserLowpass, ReversedEdges) {
  const DesignSpecification s{0.2, 0.1, 0.5, 60.0, 1.0};
  EXPECT_THROW(DesignKaiserLowpass(s), ArgumentError);
}

TEST(KaiserLowpass, GroupDelay) {
  const DesignSpecification s{0.1, 0.2, 0.1, 70.0, 1.0};
  const FirFilter f = DesignKaiserLowpass(s);
  // tau(w) = Re(sum n h[n] e^{-jwn} / H(e^{jw})).
  for (double fr = 0.005; fr < 0.1; fr += 0.01) {
    std::vector<double> nh(f.coeffs.size());
    for (std::size_t n = 0; n < nh.size(); ++n) nh[n] = n * f.coeffs[n];
    const double tau = std::real(Dtft(nh, fr) / Dtft(f.coeffs, fr));
    EXPECT_NEAR(tau, 0.5 * f.order(), 1e-6);
  }
}

TEST(BellangerOrder, ReferenceDesigns) {
  EXPECT_EQ(BellangerOrder(0.02877, 1e-6, 12'100.0 / kNbRate), 2544);
  EXPECT_EQ(BellangerOrder(0.02877, 1e-6, 44'100.0 / kNbRate), 698);
}

TEST(BellangerOrder, ScalesInverselyWithTransition) {
  const double d1 = 0.01, d2 = 1e-4;
  for (double df : {0.01, 0.02, 0.05}) {
    const int n1 = BellangerOrder(d1, d2, df);
    const int n2 = BellangerOrder(d1, d2, df / 2.0);
    EXPECT_NEAR(n2, 2.0 * n1, 4.0);
    EXPECT_NEAR(n1 * df, 2.0 * std::log10(1.0 / (10.0 * d1 * d2)) / 3.0, 2.0 * df);
  }
}

// max |E| of the 3-tap filter [a, b, a] against the two bands, evaluated at
// the band edges, f = 0 and f = 0.5 where A(f) = b + 2a cos(2 pi f) peaks.
double ThreeTapError(double a, double b) {
  double e = 0.0;
  for (double f : {0.0, 0.2}) e = std::max(e, std::abs(b + 2 * a * std::cos(2 * kPi * f) - 1));
  for (double f : {0.3, 0.5}) e = std::max(e, std::abs(b + 2 * a * std::cos(2 * kPi * f)));
  return e;
}

double MinOverB(double a, double* best_b) {
  double lo = -2.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (ThreeTapError(a, m1) < ThreeTapError(a, m2)) hi = m2; else lo = m1;
  }
  if (best_b) *best_b = 0.5 * (lo + hi);
  return ThreeTapError(a, 0.5 * (lo + hi));
}

TEST(Equiripple, ThreeTapMatchesBruteForceMinimax) {
  double lo = -2.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (MinOverB(m1, nullptr) < MinOverB(m2, nullptr)) hi = m2; else lo = m1;
  }
  const double minimax = MinOverB(0.5 * (lo + hi), nullptr);

  const DesignSpecification s{0.2, 0.3, 1.0, 10.0, 1.0};
  const FirFilter f = DesignEquirippleLowpass(s, 2, 1.0);
  ASSERT_EQ(f.coeffs.size(), 3u);
  EXPECT_EQ(f.coeffs[0], f.coeffs[2]);
  // The designed filter is rescaled to unit DC; undo that to compare the
  // raw minimax error.
  const std::vector<RemezBand> bands = {{0.0, 0.2, 1.0, 1.0}, {0.3, 0.5, 0.0, 1.0}};
  const RemezResult raw = RemezDesign(2, bands);
  EXPECT_NEAR(ThreeTapError(raw.taps[0], raw.taps[1]), minimax, 1e-8);
}

TEST(Equiripple, ConvergedDesignIsEquiripple) {
  const std::vector<RemezBand> bands = {{0.0, 0.1, 1.0, 1.0}, {0.15, 0.5, 0.0, 10.0}};
  const RemezResult r = RemezDesign(60, bands);
  EXPECT_EQ(r.basis_size, 31);
  const AlternationReport a = MeasureAlternation(r.taps, bands, 4096, 1e-5);
  ASSERT_EQ(a.band_peak_errors.size(), 2u);
  EXPECT_NEAR(a.band_peak_errors[0], a.band_peak_errors[1], 1e-6 * a.max_error);
  EXPECT_GE(a.alternations, r.basis_size + 1);
  for (int n = 0; n <= 60; ++n) EXPECT_EQ(r.taps[n], r.taps[60 - n]);
}

TEST(Equiripple, Convergence) {
  const std::vector<RemezBand> bands = {{0.0, 0.1, 1.0, 1.0}, {0.15, 0.5, 0.0, 10.0}};
  RemezOptions o;
  o.max_iterations = 1;
  EXPECT_THROW(RemezDesign(60, bands, o), ConvergenceError);
  const std::vector<RemezBand> bad = {{0.2, 0.1, 1.0, 1.0}};
  EXPECT_THROW(RemezDesign(10, bad), ArgumentError);
}

TEST(Equiripple, NarrowBandReference) {
  const FirFilter& f = designs::NbRemez();
  EXPECT_EQ(f.order(), 2544);
  SpecCriteria c = designs::CriteriaFor(designs::NbRemezSpec());
  c.min_stopband_atten_db = 120.0;
  const SpecReport r = ValidateAgainstSpec(f, c);
  EXPECT_TRUE(r.passes) << r.passband_dev_db << " " << r.stopband_atten_db;
}

TEST(Equiripple, WideBandReference) {
  EXPECT_EQ(designs::WbRemez().order(), 698);
}

TEST(HalfBandIir, ReferenceDesign) {
  const HalfBandIir& f = designs::HbIir();
  EXPECT_EQ(f.order(), 13);
  EXPECT_EQ(f.branch0.size(), 3u);
  EXPECT_EQ(f.branch1.size(), 3u);
  const SpecReport r = ValidateAgainstSpec(f, designs::CriteriaFor(designs::NbRemezSpec()));
  EXPECT_NEAR(r.stopband_atten_db, 119.7, 0.3);
  EXPECT_TRUE(r.passes);
}

TEST(HalfBandIir, StructuralInvariants) {
  for (int order : {5, 9, 13, 17}) {
    const HalfBandIir f = DesignHalfBandEllipticIirOfOrder(0.32, order, 1.0);
    EXPECT_EQ(f.order() % 2, 1);
    EXPECT_NEAR(MagnitudeResponse(f, 0.25), 1.0 / std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(MagnitudeResponse(f, 0.0), 1.0, 1e-9);
    for (int i = 0; i < 1024; ++i) {
      const double w = 0.5 * i / 1023.0;
      const double a = MagnitudeResponse(f, w), b = MagnitudeResponse(f, 0.5 - w);
      ASSERT_NEAR(a * a + b * b, 1.0, 1e-6) << order << " " << w;
    }
    for (const auto& p : Poles(f)) EXPECT_LT(std::abs(p), 1.0);
  }
}

TEST(HalfBandIir, UnreachableAttenuation) {
  EXPECT_THROW(DesignHalfBandEllipticIir(0.26, 200.0, 1.0, 7), DesignError);
  EXPECT_THROW(DesignHalfBandEllipticIir(0.2, 100.0, 1.0), ArgumentError);
}

TEST(HalfBandFir, ReferenceDesign) {
  const FirFilter& f = designs::HbFir();
  EXPECT_EQ(f.order(), 54);
  ASSERT_TRUE(f.zero_stride.has_value());
  EXPECT_EQ(*f.zero_stride, 2);
  const int c = f.order() / 2;
  EXPECT_EQ(f.coeffs[c], 0.5);
  int nonzero = 0;
  for (int n = 0; n <= f.order(); ++n) {
    EXPECT_EQ(f.coeffs[n], f.coeffs[f.order() - n]);
    if (n == c) continue;
    if ((n - c) % 2 == 0) {
      EXPECT_EQ(f.coeffs[n], 0.0) << n;
    }
    if (f.coeffs[n] != 0.0) ++nonzero;
  }
  EXPECT_EQ(nonzero / 2, 14);
  EXPECT_NEAR(std::abs(Dtft(f.coeffs, 0.25)), 0.5, 1e-12);
  EXPECT_GE(ValidateAgainstSpec(f, designs::CriteriaFor(designs::NbRemezSpec()))
                .stopband_atten_db,
            119.5);
}

TEST(Validate, IdentityFails) {
  FirFilter f;
  f.coeffs = {1.0};
  f.rate_hz = kNbRate;
  const SpecReport r = ValidateAgainstSpec(f);
  EXPECT_EQ(r.passband_dev_db, 0.0);
  EXPECT_EQ(r.stopband_atten_db, 0.0);
  EXPECT_FALSE(r.passes);
}

TEST(Validate, CicFailsStopbandCriterion) {
  const FirFilter cic = CicFilter(8, 6, 8 * 44'100.0);
  const SpecReport r = ValidateAgainstSpec(cic, designs::CriteriaFor(designs::NbRemezSpec()));
  EXPECT_FALSE(r.stopband_ok);
  EXPECT_FALSE(r.passes);
}

TEST(FilterIo, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string fir_path = (dir / "mrafx_fir_roundtrip.json").string();
  SaveFilter(designs::WbRemez(), fir_path);
  const FirFilter fir = std::get<FirFilter>(LoadFilter(fir_path));
  EXPECT_EQ(fir.coeffs, designs::WbRemez().coeffs);
  EXPECT_EQ(fir.rate_hz, designs::WbRemez().rate_hz);

  const std::string iir_path = (dir / "mrafx_iir_roundtrip.json").string();
  SaveFilter(designs::HbIir(), iir_path);
  const HalfBandIir iir = std::get<HalfBandIir>(LoadFilter(iir_path));
  EXPECT_EQ(iir.branch0, designs::HbIir().branch0);
  EXPECT_EQ(iir.branch1, designs::HbIir().branch1);
  std::filesystem::remove(fir_path);
  std::filesystem::remove(iir_path);
}

TEST(FilterIo, SchemaErrors) {
  EXPECT_THROW(FilterFromJson(nlohmann::json::array()), SchemaError);
  EXPECT_THROW(FilterFromJson({{"type", "fir"}, {"rate_hz", 1.0}}), SchemaError);
  EXPECT_THROW(FilterFromJson({{"type", "fir"}, {"rate_hz", 1.0}, {"order", 3},
                               {"coeffs", {0.5, 0.5}}}),
               SchemaError);
  EXPECT_THROW(FilterFromJson({{"type", "halfband_iir"}, {"rate_hz", 1.0},
                               {"branches", {{0.1}}}}),
               SchemaError);
}

}  // namespace
}  // namespace mrafx
