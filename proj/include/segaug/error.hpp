/**
 * Copyright 2026 The segaug Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace segaug {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A strategy, search or CLI configuration is invalid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Dataset files are missing, inconsistent or undecodable.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(what), issues_{what} {}
  explicit DataError(std::vector<std::string> issues);

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// A trial ledger could not be read or is malformed.
class LedgerError : public Error {
 public:
  using Error::Error;
};

/// A trial evaluator failed; carries captured diagnostics.
class EvaluatorError : public Error {
 public:
  explicit EvaluatorError(const std::string& what, std::string diagnostics = {})
      : Error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

#define SEGAUG_EXPECT(cond, msg)                 \
  do {                                           \
    if (!(cond)) throw ::segaug::ContractError(msg); \
  } while (0)

}  // namespace segaug
