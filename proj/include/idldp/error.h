// Copyright 2026 The idldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IDLDP_ERROR_H_
#define IDLDP_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace idldp {

// Precondition violations use std::invalid_argument and std::out_of_range.
// The types below cover the remaining failure classes; the C API maps each
// one onto a distinct status code.

// The optimizer could not produce a profile that passes its own audit.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exact enumeration would exceed the configured outcome cap.
class EnumerationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  // 1-based; 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace idldp

#endif  // IDLDP_ERROR_H_
