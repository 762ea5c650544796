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

#include "mrafx/filter_io.h"

#include <cmath>
#include <fstream>

#include "mrafx/errors.h"

namespace mrafx {
namespace {

using nlohmann::json;

std::vector<double> ReadVector(const json& doc, const std::string& field) {
  if (!doc.is_array()) throw SchemaError(field, "expected an array");
  std::vector<double> out;
  out.reserve(doc.size());
  for (const json& v : doc) {
    if (!v.is_number()) throw SchemaError(field, "expected numbers");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw SchemaError(field, "non-finite value");
    out.push_back(d);
  }
  return out;
}

double ReadRate(const json& doc) {
  if (!doc.contains("rate_hz")) return 0.0;
  if (!doc["rate_hz"].is_number()) throw SchemaError("rate_hz", "not a number");
  return doc["rate_hz"].get<double>();
}

}  // namespace

json FilterToJson(const FirFilter& filter) {
  json doc;
  doc["type"] = "fir";
  doc["rate_hz"] = filter.rate_hz;
  doc["order"] = filter.order();
  doc["linear_phase"] = filter.linear_phase;
  if (filter.zero_stride) doc["zero_stride"] = *filter.zero_stride;
  doc["coeffs"] = filter.coeffs;
  return doc;
}

json FilterToJson(const HalfBandIir& filter) {
  json doc;
  doc["type"] = "halfband_iir";
  doc["rate_hz"] = filter.rate_hz;
  doc["order"] = filter.order();
  doc["branches"] = json::array({filter.branch0, filter.branch1});
  doc["predicted_attenuation_db"] = filter.predicted_attenuation_db;
  return doc;
}

json FilterToJson(const AnyFilter& filter) {
  return std::visit([](const auto& f) { return FilterToJson(f); }, filter);
}

AnyFilter FilterFromJson(const json& doc) {
  if (!doc.is_object()) throw SchemaError("(root)", "expected an object");
  if (!doc.contains("type") || !doc["type"].is_string()) {
    throw SchemaError("type", "missing filter type");
  }
  const std::string type = doc["type"].get<std::string>();
  if (type == "fir") {
    if (!doc.contains("coeffs")) throw SchemaError("coeffs", "missing");
    FirFilter f;
    f.coeffs = ReadVector(doc["coeffs"], "coeffs");
    if (f.coeffs.empty()) throw SchemaError("coeffs", "empty");
    f.rate_hz = ReadRate(doc);
    f.linear_phase = doc.value("linear_phase", true);
    if (doc.contains("zero_stride")) f.zero_stride = doc["zero_stride"].get<int>();
    if (doc.contains("order") && doc["order"].get<int>() != f.order()) {
      throw SchemaError("order", "does not match coefficient count");
    }
    return f;
  }
  if (type == "halfband_iir") {
    if (!doc.contains("branches") || !doc["branches"].is_array() ||
        doc["branches"].size() != 2) {
      throw SchemaError("branches", "expected two coefficient arrays");
    }
    HalfBandIir f;
    f.branch0 = ReadVector(doc["branches"][0], "branches[0]");
    f.branch1 = ReadVector(doc["branches"][1], "branches[1]");
    f.rate_hz = ReadRate(doc);
    f.predicted_attenuation_db = doc.value("predicted_attenuation_db", 0.0);
    if (doc.contains("order") && doc["order"].get<int>() != f.order()) {
      throw SchemaError("order", "does not match branch sizes");
    }
    return f;
  }
  throw SchemaError("type", "unknown filter type '" + type + "'");
}

void SaveFilter(const AnyFilter& filter, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  out << FilterToJson(filter).dump(2) << "\n";
}

AnyFilter LoadFilter(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SchemaError("(document)", e.what());
  }
  return FilterFromJson(doc);
}

}  // namespace mrafx
