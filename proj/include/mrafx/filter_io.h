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

// JSON documents for designed filters:
//   {"type": "fir", "rate_hz": R, "order": N, "coeffs": [...]}
//   {"type": "halfband_iir", "rate_hz": R, "order": N,
//    "branches": [[a0...], [a1...]]}
// Doubles are written with round-trip precision.

#ifndef MRAFX_FILTER_IO_H_
#define MRAFX_FILTER_IO_H_

#include <string>
#include <variant>

#include "json.hpp"
#include "mrafx/filter_design.h"

namespace mrafx {

using AnyFilter = std::variant<FirFilter, HalfBandIir>;

nlohmann::json FilterToJson(const FirFilter& filter);
nlohmann::json FilterToJson(const HalfBandIir& filter);
nlohmann::json FilterToJson(const AnyFilter& filter);

// Throws SchemaError naming the offending field.
AnyFilter FilterFromJson(const nlohmann::json& doc);

void SaveFilter(const AnyFilter& filter, const std::string& path);
AnyFilter LoadFilter(const std::string& path);

}  // namespace mrafx

#endif  // MRAFX_FILTER_IO_H_
