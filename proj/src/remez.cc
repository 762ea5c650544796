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

#include "mrafx/remez.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mrafx/errors.h"
#include "mrafx/kernels.h"

namespace mrafx {
namespace {

constexpr double kPi = std::numbers::pi;

struct Grid {
  std::vector<double> f;
  std::vector<double> desired;  // transformed by 1/Q
  std::vector<double> weight;   // transformed by Q
  std::vector<int> band;
};

void CheckBands(std::span<const RemezBand> bands) {
  if (bands.empty()) throw ArgumentError("remez: no bands");
  double prev = -1.0;
  for (const RemezBand& b : bands) {
    if (!(b.lo >= 0.0) || !(b.hi <= 0.5) || !(b.lo <= b.hi) || b.lo < prev) {
      throw ArgumentError("remez: bands must be ordered within [0, 0.5]");
    }
    if (!(b.weight > 0.0) || !std::isfinite(b.desired)) {
      throw ArgumentError("remez: band weight must be positive");
    }
    prev = b.hi;
  }
}

Grid BuildGrid(std::span<const RemezBand> bands, int basis, int density,
               bool odd_order) {
  Grid g;
  const double spacing = 0.5 / (static_cast<double>(density) * basis);
  for (std::size_t bi = 0; bi < bands.size(); ++bi) {
    double lo = bands[bi].lo;
    double hi = bands[bi].hi;
    // cos(pi f) vanishes at Nyquist for odd orders.
    if (odd_order) hi = std::min(hi, 0.5 - spacing);
    if (hi < lo) continue;
    const int n = std::max(
        2, static_cast<int>(std::ceil((hi - lo) / spacing)) + 1);
    for (int i = 0; i < n; ++i) {
      const double f = (hi == lo) ? lo : lo + (hi - lo) * i / (n - 1);
      const double q = odd_order ? std::cos(kPi * f) : 1.0;
      g.f.push_back(f);
      g.desired.push_back(bands[bi].desired / q);
      g.weight.push_back(bands[bi].weight * q);
      g.band.push_back(static_cast<int>(bi));
      if (hi == lo) break;
    }
  }
  return g;
}

// Barycentric weights 1 / prod_{j != k} (x_k - x_j), scaled so the largest
// magnitude is 1. The scaling cancels in every ratio they are used in.
std::vector<double> BarycentricWeights(std::span<const double> nodes) {
  const std::size_t n = nodes.size();
  std::vector<kernels::CosAbscissa> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = kernels::MakeCosAbscissa(nodes[k]);
  std::vector<double> log_mag(n, 0.0);
  std::vector<int> negative(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    int neg = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      const double d = kernels::CosDifference(x[k], x[j]);
      s += std::log(std::abs(d));
      if (d < 0.0) ++neg;
    }
    log_mag[k] = -s;
    negative[k] = neg & 1;
  }
  const double peak = *std::max_element(log_mag.begin(), log_mag.end());
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = std::exp(log_mag[k] - peak) * (negative[k] ? -1.0 : 1.0);
  }
  return w;
}

// Local extrema of E inside each band (band edges included), then sign
// alternation is enforced and the set is trimmed to `want` points.
std::vector<int> FindExtrema(const Grid& g, const std::vector<double>& e,
                             double delta, std::size_t want) {
  const int n = static_cast<int>(e.size());
  std::vector<int> cand;
  for (int i = 0; i < n; ++i) {
    const bool has_left = i > 0 && g.band[i - 1] == g.band[i];
    const bool has_right = i + 1 < n && g.band[i + 1] == g.band[i];
    const double v = e[i];
    if (v >= 0.0) {
      if ((!has_left || v >= e[i - 1]) && (!has_right || v > e[i + 1])) {
        cand.push_back(i);
      }
    } else {
      if ((!has_left || v <= e[i - 1]) && (!has_right || v < e[i + 1])) {
        cand.push_back(i);
      }
    }
  }

  auto alternate = [&](const std::vector<int>& in) {
    std::vector<int> out;
    for (int i : in) {
      if (!out.empty() && std::signbit(e[out.back()]) == std::signbit(e[i])) {
        if (std::abs(e[i]) > std::abs(e[out.back()])) out.back() = i;
      } else {
        out.push_back(i);
      }
    }
    return out;
  };

  // Prefer extrema that reach the current level; fall back to all of them.
  std::vector<int> strong;
  const double floor = std::abs(delta) * (1.0 - 1e-9);
  for (int i : cand) {
    if (std::abs(e[i]) >= floor) strong.push_back(i);
  }
  std::vector<int> ext = alternate(strong);
  if (ext.size() < want) ext = alternate(cand);
  if (ext.size() < want) {
    // Too few alternations for the leveled system (typical of a poor initial
    // set): pad with the largest remaining errors, then uniform grid points.
    std::vector<char> used(n, 0);
    for (int i : ext) used[i] = 1;
    std::vector<int> rest;
    for (int i : cand) {
      if (!used[i]) rest.push_back(i);
    }
    std::sort(rest.begin(), rest.end(), [&](int a, int b) {
      return std::abs(e[a]) > std::abs(e[b]);
    });
    for (std::size_t k = 0; k < rest.size() && ext.size() < want; ++k) {
      ext.push_back(rest[k]);
      used[rest[k]] = 1;
    }
    for (int i = 0; i < n && ext.size() < want;
         i += std::max<int>(1, n / static_cast<int>(want))) {
      if (!used[i]) {
        ext.push_back(i);
        used[i] = 1;
      }
    }
    std::sort(ext.begin(), ext.end());
    return ext;
  }

  while (ext.size() > want) {
    if (std::abs(e[ext.front()]) < std::abs(e[ext.back()])) {
      ext.erase(ext.begin());
    } else {
      ext.pop_back();
    }
  }
  return ext;
}

// Pointwise desired response and weight with the odd-order transform.
struct PointEval {
  double desired, weight;
};
PointEval EvalAt(const RemezBand& b, double f, bool odd_order) {
  const double q = odd_order ? std::cos(kPi * f) : 1.0;
  return {b.desired / q, b.weight * q};
}

// Golden-section refinement of interior extrema on the continuous error
// curve, all extrema advanced in lockstep so each step is one batch call.
std::vector<double> RefineExtrema(const Grid& g, std::span<const RemezBand> bands,
                                  bool odd_order, const std::vector<int>& ext,
                                  const std::vector<double>& err,
                                  std::span<const double> inodes,
                                  std::span<const double> iweights,
                                  std::span<const double> ivalues) {
  constexpr double kInvPhi = 0.6180339887498949;
  constexpr int kSteps = 40;
  const std::size_t n = ext.size();
  const int n_grid = static_cast<int>(g.f.size());
  std::vector<double> out(n), lo(n), hi(n), c(n), d(n), sign(n);
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < n; ++k) {
    const int i = ext[k];
    out[k] = g.f[i];
    const bool interior = i > 0 && i + 1 < n_grid &&
                          g.band[i - 1] == g.band[i] &&
                          g.band[i + 1] == g.band[i];
    if (!interior) continue;
    lo[k] = g.f[i - 1];
    hi[k] = g.f[i + 1];
    sign[k] = err[i] >= 0.0 ? 1.0 : -1.0;
    active.push_back(k);
  }
  if (active.empty()) return out;

  std::vector<double> xs(2 * active.size()), amp(2 * active.size());
  auto signed_error = [&](std::size_t k, double f, double a) {
    const PointEval p = EvalAt(bands[g.band[ext[k]]], f, odd_order);
    return sign[k] * p.weight * (p.desired - a);
  };
  for (std::size_t k : active) {
    c[k] = hi[k] - kInvPhi * (hi[k] - lo[k]);
    d[k] = lo[k] + kInvPhi * (hi[k] - lo[k]);
  }
  for (int step = 0; step < kSteps; ++step) {
    for (std::size_t j = 0; j < active.size(); ++j) {
      const std::size_t k = active[j];
      xs[2 * j] = c[k];
      xs[2 * j + 1] = d[k];
    }
    kernels::BarycentricEvaluate(inodes, iweights, ivalues, xs, amp);
    for (std::size_t j = 0; j < active.size(); ++j) {
      const std::size_t k = active[j];
      if (signed_error(k, c[k], amp[2 * j]) >
          signed_error(k, d[k], amp[2 * j + 1])) {
        hi[k] = d[k];
      } else {
        lo[k] = c[k];
      }
      c[k] = hi[k] - kInvPhi * (hi[k] - lo[k]);
      d[k] = lo[k] + kInvPhi * (hi[k] - lo[k]);
    }
  }
  for (std::size_t k : active) out[k] = 0.5 * (lo[k] + hi[k]);
  return out;
}

// Initial extremal set for a large problem from the converged extremal
// frequencies of a smaller one: each band keeps its share of the points and
// their positions are resampled by linear interpolation.
std::vector<int> ScaleReference(const Grid& g, std::span<const RemezBand> bands,
                                const std::vector<double>& small_f,
                                std::size_t want) {
  const std::size_t n_bands = bands.size();
  std::vector<std::vector<double>> per_band(n_bands);
  for (double f : small_f) {
    for (std::size_t b = 0; b < n_bands; ++b) {
      if (f >= bands[b].lo - 1e-12 && f <= bands[b].hi + 1e-12) {
        per_band[b].push_back(f);
        break;
      }
    }
  }
  std::vector<std::size_t> counts(n_bands);
  std::size_t total = 0;
  for (std::size_t b = 0; b < n_bands; ++b) {
    counts[b] = static_cast<std::size_t>(std::llround(
        static_cast<double>(per_band[b].size()) * want / small_f.size()));
    total += counts[b];
  }
  const std::size_t biggest = static_cast<std::size_t>(
      std::max_element(counts.begin(), counts.end()) - counts.begin());
  counts[biggest] += want - total;

  std::vector<int> ext;
  int last = -1;
  for (std::size_t b = 0; b < n_bands; ++b) {
    const std::vector<double>& src = per_band[b];
    for (std::size_t j = 0; j < counts[b]; ++j) {
      double f = src.empty() ? bands[b].lo : src.front();
      if (src.size() > 1 && counts[b] > 1) {
        const double t = static_cast<double>(j) * (src.size() - 1) /
                         static_cast<double>(counts[b] - 1);
        const std::size_t i0 = std::min(static_cast<std::size_t>(t),
                                        src.size() - 2);
        f = src[i0] + (t - i0) * (src[i0 + 1] - src[i0]);
      }
      int idx = static_cast<int>(
          std::lower_bound(g.f.begin(), g.f.end(), f) - g.f.begin());
      idx = std::clamp(idx, last + 1, static_cast<int>(g.f.size()) - 1);
      ext.push_back(idx);
      last = idx;
    }
  }
  // Collisions pushed indices past the end: walk back from the top.
  int top = static_cast<int>(g.f.size());
  for (std::size_t k = ext.size(); k-- > 0;) {
    ext[k] = std::min(ext[k], top - 1);
    top = ext[k];
  }
  return ext;
}

RemezResult RemezCore(int order, std::span<const RemezBand> bands,
                      const RemezOptions& options,
                      const std::vector<double>* reference) {
  const bool odd_order = (order % 2) == 1;
  const int basis = odd_order ? (order + 1) / 2 : order / 2 + 1;
  const std::size_t n_ext = static_cast<std::size_t>(basis) + 1;

  const Grid g = BuildGrid(bands, basis, options.grid_density, odd_order);
  const std::size_t n_grid = g.f.size();
  if (n_grid < n_ext) {
    throw ArgumentError("remez: design grid smaller than the extremal set");
  }

  std::vector<int> ext(n_ext);
  if (reference != nullptr) {
    ext = ScaleReference(g, bands, *reference, n_ext);
  } else {
    for (std::size_t k = 0; k < n_ext; ++k) {
      ext[k] = static_cast<int>(std::llround(
          static_cast<double>(k) * static_cast<double>(n_grid - 1) /
          static_cast<double>(n_ext - 1)));
    }
  }

  std::vector<double> ext_f(n_ext);
  for (std::size_t k = 0; k < n_ext; ++k) ext_f[k] = g.f[ext[k]];
  std::vector<double> nodes(n_ext), node_desired(n_ext), node_weight(n_ext);
  std::vector<double> values(n_ext), err(n_grid), approx(n_grid);
  std::vector<double> interp_weights, inodes, ivalues;
  double delta = 0.0;
  double max_err = 0.0;
  double prev_max_err = std::numeric_limits<double>::infinity();
  bool polishing = false;
  int iter = 0;
  bool converged = false;
  for (iter = 1; iter <= options.max_iterations; ++iter) {
    for (std::size_t k = 0; k < n_ext; ++k) {
      const PointEval p = EvalAt(bands[g.band[ext[k]]], ext_f[k], odd_order);
      nodes[k] = ext_f[k];
      node_desired[k] = p.desired;
      node_weight[k] = p.weight;
    }
    const std::vector<double> b = BarycentricWeights(nodes);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < n_ext; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      num += b[k] * node_desired[k];
      den += b[k] * sign / node_weight[k];
    }
    delta = num / den;
    for (std::size_t k = 0; k < n_ext; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      values[k] = node_desired[k] - sign * delta / node_weight[k];
    }

    // Degree L-1 interpolant through L of the nodes. The one left out is
    // interior so that evaluation never extrapolates past an end node.
    inodes.assign(nodes.begin(), nodes.end());
    ivalues.assign(values.begin(), values.end());
    inodes.erase(inodes.begin() + n_ext / 2);
    ivalues.erase(ivalues.begin() + n_ext / 2);
    interp_weights = BarycentricWeights(inodes);
    kernels::BarycentricEvaluate(inodes, interp_weights, ivalues, g.f, approx);
    max_err = 0.0;
    for (std::size_t i = 0; i < n_grid; ++i) {
      err[i] = g.weight[i] * (g.desired[i] - approx[i]);
      max_err = std::max(max_err, std::abs(err[i]));
    }

    std::vector<int> next = FindExtrema(g, err, delta, n_ext);
    if (next.size() < n_ext) {
      // Keeps the last polished interpolant; a grid-phase failure is fatal.
      converged = polishing;
      break;
    }
    if (polishing &&
        std::any_of(next.begin() + 1, next.end(), [&](const int& i) {
          return std::signbit(err[i]) == std::signbit(err[(&i)[-1]]);
        })) {
      converged = true;
      break;
    }
    std::vector<double> next_f(n_ext);
    if (polishing) {
      next_f = RefineExtrema(g, bands, odd_order, next, err, inodes,
                             interp_weights, ivalues);
    } else {
      for (std::size_t k = 0; k < n_ext; ++k) next_f[k] = g.f[next[k]];
    }
    if (polishing) {
      std::vector<double> xs(n_ext), a(n_ext);
      for (std::size_t k = 0; k < n_ext; ++k) {
        xs[k] = next_f[k];
      }
      kernels::BarycentricEvaluate(inodes, interp_weights, ivalues, xs, a);
      for (std::size_t k = 0; k < n_ext; ++k) {
        const PointEval p = EvalAt(bands[g.band[next[k]]], next_f[k], odd_order);
        max_err = std::max(max_err, std::abs(p.weight * (p.desired - a[k])));
      }
    }

    const bool settled =
        max_err - std::abs(delta) <= options.tolerance * std::abs(delta) ||
        std::abs(max_err - prev_max_err) <= options.tolerance * max_err ||
        (!polishing && next == ext);
    prev_max_err = max_err;
    if (settled) {
      if (polishing) {
        converged = true;
        break;
      }
      // The grid exchange has settled; continue on the continuous error
      // curve so peaks between grid points are captured.
      polishing = true;
      next_f = RefineExtrema(g, bands, odd_order, next, err, inodes,
                             interp_weights, ivalues);
    }
    ext = std::move(next);
    ext_f = next_f;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "remez: no convergence after " << std::min(iter, options.max_iterations)
        << " iterations (order " << order << ", last delta " << delta
        << ", peak error " << max_err << ")";
    throw ConvergenceError(msg.str(), delta, std::min(iter, options.max_iterations));
  }

  // Frequency-sample the amplitude and invert. A(w) is real with
  // A(2 pi - w) matching the linear-phase symmetry for both parities.
  const int n_taps = order + 1;
  std::vector<double> xs(basis), amp(basis);
  for (int i = 0; i < basis; ++i) xs[i] = static_cast<double>(i) / n_taps;
  kernels::BarycentricEvaluate(inodes, interp_weights, ivalues, xs, amp);
  if (odd_order) {
    for (int i = 0; i < basis; ++i) {
      amp[i] *= std::cos(kPi * static_cast<double>(i) / n_taps);
    }
  }
  std::vector<double> taps(n_taps);
  const double center = 0.5 * order;
  for (int n = 0; n <= order / 2; ++n) {
    double acc = amp[0];
    for (int i = 1; i < basis; ++i) {
      acc += 2.0 * amp[i] *
             std::cos(2.0 * kPi * i * (static_cast<double>(n) - center) /
                      n_taps);
    }
    taps[n] = acc / n_taps;
    taps[order - n] = taps[n];
  }

  RemezResult result;
  result.taps = std::move(taps);
  result.delta = std::abs(delta);
  result.max_error = max_err;
  result.iterations = iter;
  result.basis_size = basis;
  result.extremal_freqs = ext_f;
  return result;
}

}  // namespace

RemezResult RemezDesign(int order, std::span<const RemezBand> bands,
                        const RemezOptions& options) {
  if (order < 1) throw ArgumentError("remez: order must be >= 1");
  CheckBands(bands);
  // Large problems start from the scaled solution of a half-size one.
  constexpr int kDirectBasis = 128;
  std::vector<int> chain{order};
  while (chain.back() / 2 > 2 * kDirectBasis) {
    int smaller = chain.back() / 2;
    if ((smaller % 2) != (order % 2)) ++smaller;
    chain.push_back(smaller);
  }
  std::vector<double> reference;
  RemezResult result;
  for (std::size_t k = chain.size(); k-- > 0;) {
    result = RemezCore(chain[k], bands, options,
                       reference.empty() ? nullptr : &reference);
    reference = result.extremal_freqs;
  }
  return result;
}

AlternationReport MeasureAlternation(std::span<const double> taps,
                                     std::span<const RemezBand> bands,
                                     int points_per_tap, double rel_threshold) {
  CheckBands(bands);
  double total = 0.0;
  for (const RemezBand& b : bands) total += b.hi - b.lo;
  const double per_hz = static_cast<double>(points_per_tap) * taps.size() /
                        std::max(total, 1e-12);
  std::vector<double> f;
  std::vector<int> band;
  for (std::size_t bi = 0; bi < bands.size(); ++bi) {
    const int n = std::max(
        2, static_cast<int>(std::ceil((bands[bi].hi - bands[bi].lo) * per_hz)));
    for (int i = 0; i < n; ++i) {
      f.push_back(bands[bi].lo + (bands[bi].hi - bands[bi].lo) * i / (n - 1));
      band.push_back(static_cast<int>(bi));
    }
  }
  std::vector<double> a(f.size());
  kernels::SymmetricFirAmplitude(taps, f, a);

  AlternationReport report;
  report.band_peak_errors.assign(bands.size(), 0.0);
  std::vector<double> e(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const RemezBand& b = bands[band[i]];
    e[i] = b.weight * (b.desired - a[i]);
    report.max_error = std::max(report.max_error, std::abs(e[i]));
    report.band_peak_errors[band[i]] =
        std::max(report.band_peak_errors[band[i]], std::abs(e[i]));
  }
  // Extremal points: local maxima of |E| within each band reaching the peak.
  const double level = report.max_error * (1.0 - rel_threshold);
  int count = 0;
  int last_sign = 0;
  const int n = static_cast<int>(e.size());
  for (int i = 0; i < n; ++i) {
    const double m = std::abs(e[i]);
    if (m < level) continue;
    const bool left_ok = i == 0 || band[i - 1] != band[i] ||
                         m >= std::abs(e[i - 1]);
    const bool right_ok = i + 1 == n || band[i + 1] != band[i] ||
                          m >= std::abs(e[i + 1]);
    if (!left_ok || !right_ok) continue;
    const int sign = e[i] >= 0.0 ? 1 : -1;
    if (sign != last_sign) {
      ++count;
      last_sign = sign;
    }
  }
  report.alternations = count;
  return report;
}

}  // namespace mrafx
