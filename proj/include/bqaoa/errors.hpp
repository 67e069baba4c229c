// Copyright 2026 The bqaoa Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace bqaoa {

/// Root of every error thrown by the library. The CLI maps subclasses onto
/// exit codes (see tools/bqaoa.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define BQAOA_DEFINE_ERROR(Name, Base) \
  class Name : public Base {           \
   public:                             \
    using Base::Base;                  \
  }

// Input files and configuration.
BQAOA_DEFINE_ERROR(ParseError, Error);
BQAOA_DEFINE_ERROR(ValidationError, Error);
BQAOA_DEFINE_ERROR(ConfigError, Error);

// Shape / range violations.
BQAOA_DEFINE_ERROR(IndexError, Error);
BQAOA_DEFINE_ERROR(DimensionError, Error);
BQAOA_DEFINE_ERROR(LengthError, Error);
BQAOA_DEFINE_ERROR(TooLargeError, Error);

BQAOA_DEFINE_ERROR(EmptyDeviceError, Error);
BQAOA_DEFINE_ERROR(MeasureInUnitaryError, Error);

// Mapping onto hardware.
BQAOA_DEFINE_ERROR(UnmappedEdgeError, Error);
BQAOA_DEFINE_ERROR(NonAdjacentGateError, Error);
BQAOA_DEFINE_ERROR(MissingEdgeError, Error);

// Infeasible requests; exit code 3 in the CLI.
BQAOA_DEFINE_ERROR(InfeasibleError, Error);
BQAOA_DEFINE_ERROR(NoChainError, InfeasibleError);
BQAOA_DEFINE_ERROR(NoFeasibleOutcomeError, InfeasibleError);

BQAOA_DEFINE_ERROR(ZeroOptimumError, Error);
BQAOA_DEFINE_ERROR(SingularConfusionError, Error);

#undef BQAOA_DEFINE_ERROR

}  // namespace bqaoa
