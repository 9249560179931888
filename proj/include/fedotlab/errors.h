// Copyright 2026 The fedotlab Authors.
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

#ifndef FEDOTLAB_ERRORS_H_
#define FEDOTLAB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fedotlab {

// Bad arguments to an operation (shape mismatch, out-of-range scalar).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data that violates a domain invariant (weights, labels, config).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A feasibility constraint (zero-sum ties, marginal feasibility) is broken.
class ConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured size cap would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative method hit its iteration cap. Carries the last residual.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

// A non-finite value appeared during a computation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fedotlab

#endif  // FEDOTLAB_ERRORS_H_
