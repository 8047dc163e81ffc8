/*
 * Copyright 2026 The Procurisk Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
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

namespace procurisk {

// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or unusable input data. Maps to exit status 1.
class DataError : public Error {
 public:
  using Error::Error;
};

// Bad configuration: unreadable paths, invalid flags, malformed config
// files. Maps to exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A statistical routine was called outside its domain (empty sample,
// zero-size group, too few observations).
class DomainError : public DataError {
 public:
  using DataError::DataError;
};

class SingularDesignError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Broken internal invariant, e.g. a contract whose relation key is missing
// from the aggregated table.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Collects non-fatal warnings (omitted years, list conflicts, empty lists)
// so callers decide where they go.
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

}  // namespace procurisk
