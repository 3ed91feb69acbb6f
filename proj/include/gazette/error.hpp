// Copyright 2026 The Gazette Authors.
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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gazette {

// Base class of every error raised by the library. Callers that only care
// about success/failure catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data does not follow the expected format (dump, CoNLL, lexicon
// JSON, lemma table, ...).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Reading a stream failed. `position` is the 1-based line number reached
// when the failure was detected.
class IoError : public Error {
 public:
  IoError(const std::string& what, std::uint64_t position)
      : Error(what + " (at line " + std::to_string(position) + ")"),
        position_(position) {}

  std::uint64_t position() const { return position_; }

 private:
  std::uint64_t position_;
};

// An AnnotationConfig invariant is violated. `field` names the offending
// configuration field.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A matcher was used with a configuration other than the one it was
// compiled from.
class StaleMatcherError : public Error {
 public:
  using Error::Error;
};

}  // namespace gazette
