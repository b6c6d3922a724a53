// Copyright 2026 The brwalk Authors.
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

#ifndef BRWALK_ERRORS_H_
#define BRWALK_ERRORS_H_

#include <stdexcept>
#include <string>

namespace brwalk {

// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a type invariant or an operation precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A computational budget was exhausted: brute-force enumeration, iteration
// ceilings, rational scaling bounds.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Adversarial tie enumeration ran past its state cap. The bounds bracket the
// minimum final welfare over all tie resolutions; `upper_bound` is the best
// terminal welfare actually reached before the cap hit.
class EnumerationCapError : public BudgetError {
 public:
  EnumerationCapError(const std::string& what, double lower_bound,
                      double upper_bound)
      : BudgetError(what), lower_bound_(lower_bound), upper_bound_(upper_bound) {}

  double lower_bound() const { return lower_bound_; }
  double upper_bound() const { return upper_bound_; }

 private:
  double lower_bound_;
  double upper_bound_;
};

// The linear program solver did not reach a certified optimum.
class SolverError : public Error {
 public:
  using Error::Error;
};

// File system failures; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace brwalk

#endif  // BRWALK_ERRORS_H_
