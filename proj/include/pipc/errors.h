// Copyright 2026 The PIPC Authors
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

#ifndef PIPC_ERRORS_H_
#define PIPC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace pipc {

// Numerical breakdown: non-finite values, ill-conditioned covariances,
// failed matrix exponentials.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A banded system that is not positive definite. Recoverable by the
// optimizer (raise damping and retry).
class RankDeficientError : public NumericalError {
 public:
  explicit RankDeficientError(const std::string& what) : NumericalError(what) {}
};

// Invalid user-supplied configuration (bad hyperparameters, goal equal to
// start, malformed scenario files).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Query of a field or horizon outside of its valid domain.
class DomainError : public std::out_of_range {
 public:
  explicit DomainError(const std::string& what) : std::out_of_range(what) {}
};

}  // namespace pipc

#endif  // PIPC_ERRORS_H_
