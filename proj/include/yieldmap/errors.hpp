// Copyright (c) 2026 The yieldmap authors.
//
// This software is licensed under the Apache License, Version 2.0 (the "License").
// You may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace yieldmap {

// Process exit codes, one per error family.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfigError = 2,
    kExitDataError = 3,
    kExitNumericError = 4,
};

class Error : public std::runtime_error {
  public:
    Error(std::string msg, int exit_code)
        : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

  private:
    int exit_code_;
};

// Bad options, bad schema, impossible resolutions.
class ConfigError : public Error {
  public:
    explicit ConfigError(std::string msg) : Error(std::move(msg), kExitConfigError) {}
};

// Malformed or insufficient input data.
class DataError : public Error {
  public:
    explicit DataError(std::string msg) : Error(std::move(msg), kExitDataError) {}
};

// Geometry predicates or overlay operations that could not be completed.
class GeometryError : public Error {
  public:
    explicit GeometryError(std::string msg) : Error(std::move(msg), kExitDataError) {}
};

// Factorization failures, non-convergence, invalid covariance parameters.
class NumericError : public Error {
  public:
    explicit NumericError(std::string msg) : Error(std::move(msg), kExitNumericError) {}
};

} // namespace yieldmap
