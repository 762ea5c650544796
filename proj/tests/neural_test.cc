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

#include "mrafx/neural.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "mrafx/errors.h"

namespace mrafx {
namespace {

using nlohmann::json;

std::vector<double> Noise(std::size_t n, double scale, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

// Value at d of the Lagrange basis polynomial that is 1 at node j and 0 at
// the other nodes 0..k, by Neville's scheme.
double NevilleBasis(int k, int j, double d) {
  std::vector<double> p(k + 1, 0.0);
  p[j] = 1.0;
  for (int level = 1; level <= k; ++level) {
    for (int i = 0; i + level <= k; ++i) {
      p[i] = ((d - (i + level)) * p[i] + (i - d) * p[i + 1]) / (i - (i + level));
    }
  }
  return p[0];
}

TEST(LagrangeCoeffs, MatchNevilleEvaluation) {
  for (int k : {1, 2, 3, 5}) {
    for (double d : {13.0 / 147.0, -13.0 / 160.0, 0.37, 2.5}) {
      const auto c = LagrangeCoeffs(k, d);
      ASSERT_EQ(c.size(), static_cast<std::size_t>(k + 1));
      for (int j = 0; j <= k; ++j) EXPECT_NEAR(c[j], NevilleBasis(k, j, d), 1e-13);
    }
  }
}

TEST(LagrangeCoeffs, TabulatedDelays) {
  const auto lidl = LagrangeCoeffs(1, 13.0 / 147.0);
  EXPECT_NEAR(lidl[0], 0.91156, 5e-6);
  EXPECT_NEAR(lidl[1], 0.08844, 5e-6);
  // Listed to five decimals; the exact products differ from the listing by
  // up to 3e-5.
  const auto cidl = LagrangeCoeffs(3, 13.0 / 147.0);
  const double listed[] = {0.84555, 0.24611, -0.11736, 0.02569};
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(cidl[j], listed[j], 5e-5) << j;
  const auto ledl = LagrangeCoeffs(1, -13.0 / 160.0);
  EXPECT_NEAR(ledl[0], 1.08125, 1e-14);
  EXPECT_NEAR(ledl[1], -0.08125, 1e-14);
  const auto zero = LagrangeCoeffs(3, 0.0);
  EXPECT_EQ(zero, (std::vector<double>{1.0, 0.0, 0.0, 0.0}));
}

TEST(LagrangeCoeffs, SumToOne) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.9, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 4;
    const auto c = LagrangeCoeffs(k, u(rng));
    double s = 0.0;
    for (double v : c) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(SrirnnConfig, MakeAndErrors) {
  const SrirnnConfig c = SrirnnConfig::Make(160, 147, 3);
  EXPECT_NEAR(c.delta, 13.0 / 147.0, 1e-15);
  EXPECT_EQ(c.coeffs.size(), 4u);
  EXPECT_THROW(SrirnnConfig::Make(4, 2, 1), ArgumentError);
  EXPECT_THROW(SrirnnConfig::Make(0, 1, 1), ArgumentError);
  EXPECT_THROW(SrirnnConfig::Make(1, 1, -1), ArgumentError);
}

// Written from the gate equations with separate named vectors.
double ReferenceStep(const RnnModel& m, std::vector<double>& hs,
                     std::vector<double>& cs, double x) {
  const int h = m.hidden_size;
  auto gate = [&](int block, int u) {
    const int r = block * h + u;
    double z = m.bias[r] + m.w_input[r] * x;
    for (int j = 0; j < h; ++j) z += m.w_recurrent[r * h + j] * hs[j];
    return z;
  };
  std::vector<double> h_new(h), c_new(h);
  for (int u = 0; u < h; ++u) {
    const double in = 1.0 / (1.0 + std::exp(-gate(0, u)));
    const double fo = 1.0 / (1.0 + std::exp(-gate(1, u)));
    const double ca = std::tanh(gate(2, u));
    const double ou = 1.0 / (1.0 + std::exp(-gate(3, u)));
    c_new[u] = fo * cs[u] + in * ca;
    h_new[u] = ou * std::tanh(c_new[u]);
  }
  hs = h_new;
  cs = c_new;
  double y = m.dense_bias + m.dense_input[0] * x;
  for (int u = 0; u < h; ++u) y += m.dense_hidden[u] * hs[u];
  return y;
}

TEST(LstmStep, MatchesScalarReference) {
  RnnModel m = SeededModel(8, 77);
  m.dense_input = {0.3};
  const auto x = Noise(16, 0.1, 2);
  std::vector<double> hs(8, 0.0), cs(8, 0.0);
  RnnState state(8);
  for (double v : x) {
    const double expected = ReferenceStep(m, hs, cs, v);
    const double y = LstmStep(m, state, std::span(&v, 1));
    EXPECT_NEAR(y, expected, 1e-12);
    for (int u = 0; u < 8; ++u) {
      EXPECT_NEAR(state.hidden()[u], hs[u], 1e-12);
      EXPECT_NEAR(state.cell()[u], cs[u], 1e-12);
    }
  }
}

RnnModel ZeroModel(int h) {
  RnnModel m;
  m.hidden_size = h;
  m.w_input.assign(4 * h, 0.0);
  m.w_recurrent.assign(4 * h * h, 0.0);
  m.bias.assign(4 * h, 0.0);
  m.dense_hidden.assign(h, 0.0);
  m.dense_input = {0.0};
  return m;
}

TEST(LstmStep, ZeroWeights) {
  const RnnModel m = ZeroModel(4);
  const auto y = ProcessPlain(m, Noise(64, 1.0, 3));
  for (double v : y) EXPECT_EQ(v, 0.0);
}

TEST(LstmStep, ZeroInputKeepsZeroState) {
  RnnModel m = SeededModel(8, 9);
  std::fill(m.bias.begin(), m.bias.end(), 0.0);
  m.dense_bias = 0.25;
  RnnState state(8);
  const double zero = 0.0;
  for (int n = 0; n < 10; ++n) {
    EXPECT_EQ(LstmStep(m, state, std::span(&zero, 1)), 0.25);
  }
  for (double v : state.values) EXPECT_EQ(v, 0.0);
}

TEST(LstmStep, HiddenStaysInsideUnitInterval) {
  const RnnModel m = SeededModel(16, 4);
  const auto x = Noise(4000, 1.0, 4);
  RnnState state(16);
  for (double v : x) {
    LstmStep(m, state, std::span(&v, 1));
    for (double hv : state.hidden()) {
      ASSERT_GT(hv, -1.0);
      ASSERT_LT(hv, 1.0);
    }
    for (double c : state.cell()) ASSERT_TRUE(std::isfinite(c));
  }
}

TEST(SrirnnProcess, UnitRatioIsPlainProcessing) {
  for (const auto& name : BundledModelNames()) {
    const RnnModel m = LoadModel(name);
    const auto x = Noise(2000, 0.3, 6);
    const auto plain = ProcessPlain(m, x);
    for (int k : {0, 1, 3}) {
      EXPECT_EQ(SrirnnProcess(m, SrirnnConfig::Make(1, 1, k), x), plain) << name;
    }
  }
}

// A constant input drives the state to a fixed point that no interpolation
// of a constant history can move.
TEST(SrirnnProcess, ConstantInputSteadyStateAcrossRates) {
  for (const auto& name : BundledModelNames()) {
    const RnnModel m = LoadModel(name);
    const std::vector<double> at_train(4410, 0.1);
    const std::vector<double> at_48k(4800, 0.1);
    const double reference = ProcessPlain(m, at_train).back();
    for (int k : {1, 3}) {
      const double y = SrirnnProcess(m, SrirnnConfig::Make(160, 147, k), at_48k).back();
      EXPECT_NEAR(y, reference, 1e-6) << name << " k=" << k;
    }
    const std::vector<double> at_40k(4000, 0.1);
    const double y = SrirnnProcess(m, SrirnnConfig::Make(147, 160, 3), at_40k).back();
    EXPECT_NEAR(y, reference, 1e-6) << name;
  }
}

TEST(SrirnnProcess, DivergenceIsFlagged) {
  // Forget and input gates pinned open, so the cell integrates a constant
  // candidate; extrapolating far ahead makes that integration explode.
  RnnModel m = ZeroModel(2);
  m.name = "integrator";
  for (int u = 0; u < 2; ++u) {
    m.bias[u] = 30.0;
    m.bias[2 + u] = 30.0;
    m.bias[4 + u] = 0.5;
  }
  const std::vector<double> x(400, 0.0);
  EXPECT_NO_THROW(ProcessPlain(m, x));
  RunOptions options;
  options.sample_offset = 1000;
  try {
    SrirnnProcess(m, SrirnnConfig::Make(7, 1, 3), x, options);
    FAIL() << "expected an instability fault";
  } catch (const InstabilityFault& f) {
    EXPECT_GT(f.sample_index(), 1000u);
    EXPECT_NE(std::string(f.what()).find("integrator"), std::string::npos);
  }
}

TEST(ProcessPlain, NonFiniteInputIsFlagged) {
  const RnnModel m = SeededModel(8, 1);
  std::vector<double> x(32, 0.1);
  x[20] = std::nan("");
  try {
    ProcessPlain(m, x);
    FAIL();
  } catch (const InstabilityFault& f) {
    EXPECT_EQ(f.sample_index(), 20u);
  }
}

TEST(ProcessPlain, Deterministic) {
  const RnnModel m = LoadModel("builtin:seeded-16");
  const auto x = Noise(3000, 0.2, 8);
  EXPECT_EQ(ProcessPlain(m, x), ProcessPlain(m, x));
  const auto cfg = SrirnnConfig::Make(160, 147, 3);
  EXPECT_EQ(SrirnnProcess(m, cfg, x), SrirnnProcess(m, cfg, x));
}

TEST(ProcessPlain, ConditioningHeldConstant) {
  RnnModel m = SeededModel(4, 2);
  m.input_dim = 2;
  const std::vector<double> audio = m.w_input;
  m.w_input.assign(32, 0.5);
  for (int r = 0; r < 16; ++r) m.w_input[2 * r] = audio[r];
  m.dense_input = {0.0, 0.0};
  const auto x = Noise(100, 0.1, 1);
  std::vector<double> y1, y2;
  ASSERT_NO_THROW(y1 = ProcessPlain(m, x, {.conditioning = {0.0}}));
  ASSERT_NO_THROW(y2 = ProcessPlain(m, x, {.conditioning = {1.0}}));
  EXPECT_NE(y1, y2);
  EXPECT_EQ(ProcessPlain(m, x), y1);
  EXPECT_THROW(ProcessPlain(m, x, {.conditioning = {1.0, 2.0}}), ArgumentError);
}

TEST(OversampledProcess, UnitFactorIsPlainProcessing) {
  const RnnModel m = LoadModel("builtin:seeded-8");
  const auto x = Noise(1000, 0.1, 10);
  const auto out = OversampledProcess(m, 1, IdentityConverter(), IdentityConverter(), x);
  EXPECT_EQ(out.signal, ProcessPlain(m, x));
  EXPECT_EQ(out.latency_s, 0.0);
  EXPECT_THROW(OversampledProcess(m, 0, IdentityConverter(), IdentityConverter(), x),
               ArgumentError);
  EXPECT_THROW(OversampledProcess(m, 2, FftConverter(4, 1), FftConverter(1, 4), x),
               ArgumentError);
}

// With an M-step state delay, phase r of the upsampled stream runs through
// its own copy of the model. Holding each input M times and keeping every
// M-th output therefore reproduces plain processing.
TEST(OversampledProcess, StateDelaySeparatesPhases) {
  const RnnModel m = SeededModel(8, 12);
  const auto x = Noise(300, 0.1, 11);
  const int factor = 4;
  const Converter hold{{factor, 1}, 0.0, [](std::span<const double> s) {
                         std::vector<double> y;
                         for (double v : s) y.insert(y.end(), factor, v);
                         return y;
                       }};
  const Converter pick{{1, factor}, 0.0, [](std::span<const double> s) {
                         std::vector<double> y;
                         for (std::size_t n = 0; n < s.size(); n += factor) y.push_back(s[n]);
                         return y;
                       }};
  EXPECT_EQ(OversampledProcess(m, factor, hold, pick, x).signal, ProcessPlain(m, x));
}

TEST(ResampledProcess, IdentityIsPlainProcessing) {
  const RnnModel m = LoadModel("builtin:seeded-16");
  const auto x = Noise(500, 0.1, 12);
  const auto out = ResampledProcess(m, IdentityConverter(), IdentityConverter(), x);
  EXPECT_EQ(out.signal, ProcessPlain(m, x));
  EXPECT_THROW(ResampledProcess(m, FftConverter(2, 1), IdentityConverter(), x),
               ArgumentError);
}

TEST(ResampledProcess, TwoStageLatency) {
  const RnnModel m = LoadModel("builtin:seeded-8");
  const Converter up = MakeNamedConverter("hb-wb-kaiser", 48'000.0, 44'100.0);
  const Converter down = MakeNamedConverter("hb-wb-kaiser", 44'100.0, 48'000.0);
  const auto out = ResampledProcess(m, up, down, Noise(4800, 0.1, 13));
  EXPECT_NEAR(out.latency_s * 1e3, 0.13, 0.005);
  EXPECT_EQ(out.signal.size(), 4800u);
}

TEST(Models, SeededShapes) {
  const RnnModel m8 = LoadModel("builtin:seeded-8");
  const RnnModel m16 = LoadModel("builtin:seeded-16");
  EXPECT_EQ(m8.state_size(), 16);
  EXPECT_EQ(m16.state_size(), 32);
  EXPECT_EQ(m8.train_rate_hz, 44'100.0);
  EXPECT_TRUE(IsBundledModelName("builtin:seeded-8"));
  EXPECT_FALSE(IsBundledModelName("seeded-8"));
  EXPECT_EQ(SeededModel(8, 3).w_recurrent, SeededModel(8, 3).w_recurrent);
}

TEST(Models, CanonicalRoundTrip) {
  RnnModel m = SeededModel(40, 21);
  m.dense_input = {0.125};
  const auto path = std::filesystem::temp_directory_path() / "mrafx_model_rt.json";
  SaveModel(m, path.string());
  const RnnModel back = LoadModel(path.string());
  std::filesystem::remove(path);
  EXPECT_EQ(back.state_size(), 80);
  EXPECT_EQ(back.name, m.name);
  EXPECT_EQ(back.w_input, m.w_input);
  EXPECT_EQ(back.w_recurrent, m.w_recurrent);
  EXPECT_EQ(back.bias, m.bias);
  EXPECT_EQ(back.dense_hidden, m.dense_hidden);
  EXPECT_EQ(back.dense_input, m.dense_input);
  EXPECT_EQ(back.dense_bias, m.dense_bias);
  EXPECT_EQ(back.train_rate_hz, m.train_rate_hz);
}

std::string SchemaField(const json& doc) {
  try {
    ModelFromJson(doc);
  } catch (const SchemaError& e) {
    return e.field();
  }
  return "";
}

TEST(Models, SchemaErrorsNameTheField) {
  const json good = ModelToJson(SeededModel(6, 1));
  json bad = good;
  bad["lstm"]["w_recurrent"].erase(0);
  EXPECT_EQ(SchemaField(bad), "lstm.w_recurrent");
  bad = good;
  bad["lstm"]["w_input"][3] = json::array({1.0, 2.0});
  EXPECT_EQ(SchemaField(bad), "lstm.w_input");
  bad = good;
  bad["dense"]["w_hidden"].push_back(0.0);
  EXPECT_EQ(SchemaField(bad), "dense.w_hidden");
  bad = good;
  bad["dense"].erase("bias");
  EXPECT_EQ(SchemaField(bad), "dense.bias");
  bad = good;
  bad["hidden_size"] = 0;
  EXPECT_EQ(SchemaField(bad), "hidden_size");
  EXPECT_EQ(SchemaField(json{{"weights", 1}}), "(root)");
  EXPECT_EQ(SchemaField(json::array()), "(root)");
}

// Row-major 4H x D as nested arrays; `transpose` gives D x 4H.
json Nested(const std::vector<double>& v, std::size_t rows, std::size_t cols,
            bool transpose) {
  json out = json::array();
  const std::size_t r_out = transpose ? cols : rows;
  const std::size_t c_out = transpose ? rows : cols;
  for (std::size_t r = 0; r < r_out; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < c_out; ++c) {
      row.push_back(transpose ? v[c * cols + r] : v[r * cols + c]);
    }
    out.push_back(row);
  }
  return out;
}

TEST(Models, GuitarMlLayout) {
  const RnnModel m = SeededModel(8, 31);
  std::vector<double> half(m.bias.size());
  for (std::size_t i = 0; i < half.size(); ++i) half[i] = 0.25 * m.bias[i];
  std::vector<double> rest(m.bias.size());
  for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = m.bias[i] - half[i];
  json doc;
  doc["model_data"] = {{"unit_type", "LSTM"}, {"num_layers", 1}, {"hidden_size", 8},
                       {"input_size", 1}, {"skip", 1}};
  doc["state_dict"]["rec.weight_ih_l0"] = Nested(m.w_input, 32, 1, false);
  doc["state_dict"]["rec.weight_hh_l0"] = Nested(m.w_recurrent, 32, 8, false);
  doc["state_dict"]["rec.bias_ih_l0"] = half;
  doc["state_dict"]["rec.bias_hh_l0"] = rest;
  doc["state_dict"]["lin.weight"] = Nested(m.dense_hidden, 1, 8, false);
  doc["state_dict"]["lin.bias"] = {m.dense_bias};
  const RnnModel g = ModelFromJson(doc);
  EXPECT_EQ(g.train_rate_hz, 44'100.0);
  EXPECT_EQ(g.dense_input, std::vector<double>{1.0});
  const auto x = Noise(200, 0.1, 14);
  RnnModel expected = m;
  expected.dense_input = {1.0};
  const auto a = ProcessPlain(g, x);
  const auto b = ProcessPlain(expected, x);
  for (std::size_t n = 0; n < x.size(); ++n) EXPECT_NEAR(a[n], b[n], 1e-13);

  json wrong = doc;
  wrong["model_data"]["unit_type"] = "GRU";
  EXPECT_EQ(SchemaField(wrong), "model_data.unit_type");
  wrong = doc;
  wrong["state_dict"]["rec.bias_hh_l0"].erase(0);
  EXPECT_EQ(SchemaField(wrong), "state_dict.rec.bias_hh_l0");
}

TEST(Models, AidaXLayout) {
  const RnnModel m = SeededModel(6, 41);
  json doc;
  doc["in_skip"] = 0;
  doc["layers"] = json::array();
  doc["layers"].push_back({{"type", "lstm"},
                           {"weights", json::array({Nested(m.w_input, 24, 1, true),
                                                    Nested(m.w_recurrent, 24, 6, true),
                                                    m.bias})}});
  doc["layers"].push_back({{"type", "dense"},
                           {"weights", json::array({Nested(m.dense_hidden, 1, 6, true),
                                                    json::array({m.dense_bias})})}});
  const RnnModel a = ModelFromJson(doc);
  EXPECT_EQ(a.train_rate_hz, 48'000.0);
  EXPECT_EQ(a.w_input, m.w_input);
  EXPECT_EQ(a.w_recurrent, m.w_recurrent);
  EXPECT_EQ(a.dense_hidden, m.dense_hidden);
  doc["samplerate"] = 44'100.0;
  EXPECT_EQ(ModelFromJson(doc).train_rate_hz, 44'100.0);

  json wrong = doc;
  wrong["layers"][0]["weights"].erase(2);
  EXPECT_EQ(SchemaField(wrong), "layers[lstm].weights");
  wrong = doc;
  wrong["layers"][1]["type"] = "conv1d";
  EXPECT_EQ(SchemaField(wrong), "layers");
}

TEST(Models, LoadErrors) {
  EXPECT_THROW(LoadModel("/nonexistent/model.json"), ArgumentError);
  const auto path = std::filesystem::temp_directory_path() / "mrafx_model_bad.json";
  {
    std::ofstream(path.string()) << "{ not json";
  }
  EXPECT_THROW(LoadModel(path.string()), SchemaError);
  std::filesystem::remove(path);
}

TEST(SrirnnModelCost, CountsBothStates) {
  const RnnModel m = SeededModel(40, 1);
  EXPECT_NEAR(SrirnnModelCost(m, 1, 160, 147).total_ops, 261.2245, 1e-4);
  EXPECT_NEAR(SrirnnModelCost(m, 3, 160, 147).total_ops, 609.5238, 1e-4);
}

}  // namespace
}  // namespace mrafx
