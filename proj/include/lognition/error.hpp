// Copyright 2026 The Lognition Authors
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
#include <utility>

namespace lognition {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text did not have the expected syntax.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A syntactically valid value fell outside its permitted range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied argument violates an operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// ArgumentError tied to one named request field.
class FieldError : public ArgumentError {
 public:
  FieldError(std::string field, const std::string& message)
      : ArgumentError(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class UnknownTypeError : public Error {
 public:
  explicit UnknownTypeError(const std::string& type_id)
      : Error("unknown event type '" + type_id + "'"), type_id_(type_id) {}
  const std::string& type_id() const noexcept { return type_id_; }

 private:
  std::string type_id_;
};

/// A catalog pattern matched a line but a required capture did not parse.
class MalformedCaptureError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class StorageError : public Error {
 public:
  using Error::Error;
};

/// Transport failure talking to a message bus; consumers retry on it.
class BusError : public Error {
 public:
  using Error::Error;
};

}  // namespace lognition
