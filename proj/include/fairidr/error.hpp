// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRIDR_ERROR_HPP_
#define FAIRIDR_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fairidr {

/// Base of every error raised by the library. `name()` is the short
/// module-level error name the CLI prints on exit code 1.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define FAIRIDR_DEFINE_ERROR(Type, label)                                   \
  class Type : public Error {                                               \
   public:                                                                  \
    explicit Type(const std::string& what) : Error(label, what) {}          \
  }

// dataset
FAIRIDR_DEFINE_ERROR(SchemaError, "schema-error");
FAIRIDR_DEFINE_ERROR(ParseError, "parse-error");
FAIRIDR_DEFINE_ERROR(ValidationError, "validation-error");
FAIRIDR_DEFINE_ERROR(SizingError, "sizing-error");
// cate
FAIRIDR_DEFINE_ERROR(NumericalError, "numerical-error");
FAIRIDR_DEFINE_ERROR(DivergenceError, "divergence-error");
FAIRIDR_DEFINE_ERROR(ArmMissingError, "arm-missing-error");
FAIRIDR_DEFINE_ERROR(ShapeError, "shape-error");
// fairness
FAIRIDR_DEFINE_ERROR(DegenerateGroupError, "degenerate-group-error");
FAIRIDR_DEFINE_ERROR(UnknownGroupError, "unknown-group-error");
FAIRIDR_DEFINE_ERROR(NoRootError, "no-root-error");
FAIRIDR_DEFINE_ERROR(MonotonicityError, "monotonicity-violation-error");
// policy
FAIRIDR_DEFINE_ERROR(UndefinedMetricError, "undefined-metric-error");
// io / config
FAIRIDR_DEFINE_ERROR(ConfigError, "config-error");
FAIRIDR_DEFINE_ERROR(IoError, "io-error");

#undef FAIRIDR_DEFINE_ERROR

}  // namespace fairidr

#endif  // FAIRIDR_ERROR_HPP_
