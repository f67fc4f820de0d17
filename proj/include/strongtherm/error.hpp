// Copyright 2026 The strongtherm Authors
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

namespace strongtherm {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension or length mismatch between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to converge or lost the accuracy it promises.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// exp() argument outside the representable range.
class RangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A matrix that must be positive definite has an eigenvalue at or below the
/// admissible floor.
class NotPositiveDefiniteError : public NumericalError {
 public:
  NotPositiveDefiniteError(const std::string& what, double min_eigenvalue)
      : NumericalError(what), min_eigenvalue_(min_eigenvalue) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Map inversion refused because the map is singular or too ill-conditioned.
class InversionError : public NumericalError {
 public:
  InversionError(const std::string& what, double condition)
      : NumericalError(what), condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Invalid user-supplied configuration or input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Model configuration outside the range an analytic construction supports.
class UnsupportedConfigurationError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace strongtherm
