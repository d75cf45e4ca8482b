/* Copyright 2026 The Echotrain Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <stdexcept>
#include <string>

namespace echotrain::seq {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, int col, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                           ": " + what),
        line(line),
        col(col) {}
  int line;
  int col;
};

// Phase outside {x, y, -x, -y, numeric degrees}.
class UnknownPhaseError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

// Structurally valid program that breaks timeline rules (negative
// durations, overlapping events, bad repetition counts).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownBuiltin : public std::runtime_error {
 public:
  explicit UnknownBuiltin(const std::string& name)
      : std::runtime_error("unknown builtin sequence '" + name + "'") {}
};

}  // namespace echotrain::seq
