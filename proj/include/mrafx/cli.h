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

// The `mrafx` command line: design, resample, process, run and cost.
//
// Exit codes: 0 success, 1 failed validation or processing, 2 usage error,
// 3 a batch run that completed with skipped models or errored cells.

#ifndef MRAFX_CLI_H_
#define MRAFX_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrafx/cost.h"
#include "mrafx/filter_design.h"

namespace mrafx {

nlohmann::json CostReportToJson(const CostReport& report);
nlohmann::json SpecReportToJson(const SpecReport& report);

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace mrafx

#endif  // MRAFX_CLI_H_
