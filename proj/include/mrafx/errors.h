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

#ifndef MRAFX_ERRORS_H_
#define MRAFX_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mrafx {

// Invalid caller-supplied argument (out of domain, reversed band edges, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A filter could not be synthesized within the configured limits.
class DesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The Remez exchange did not settle. Carries the last weighted error.
class ConvergenceError : public DesignError {
 public:
  ConvergenceError(const std::string& what, double last_delta, int iterations)
      : DesignError(what), last_delta_(last_delta), iterations_(iterations) {}
  double last_delta() const { return last_delta_; }
  int iterations() const { return iterations_; }

 private:
  double last_delta_;
  int iterations_;
};

// A model or filter document does not match any recognized layout.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Recurrent state left the finite / bounded regime.
class InstabilityFault : public std::runtime_error {
 public:
  InstabilityFault(const std::string& what, std::size_t sample_index)
      : std::runtime_error(what), sample_index_(sample_index) {}
  std::size_t sample_index() const { return sample_index_; }

 private:
  std::size_t sample_index_;
};

// A metric is undefined (zero-energy reference).
class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace mrafx

#endif  // MRAFX_ERRORS_H_
