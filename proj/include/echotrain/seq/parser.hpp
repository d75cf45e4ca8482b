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

#include <string>

#include "echotrain/seq/program.hpp"

namespace echotrain::seq {

// Grammar (whitespace separates tokens, '#' comments to end of line):
//
//   program   := { statement }
//   statement := pulse | delay | acquire | block
//   pulse     := "p" "(" angle "," phasespec ")"        angle in degrees
//   delay     := "d" "(" duration ")"
//   acquire   := "acq" "(" [ duration "," duration ] ")"  window, dwell
//   block     := "[" { statement } "]" "*" count
//   phasespec := phase | "{" phase { "," phase } "}"
//   phase     := "x" | "y" | "-x" | "-y" | degrees
//   duration  := number unit,  unit in { "us", "ms", "s" }
//
// A phase list cycles with the iteration index of the innermost enclosing
// block; CPMG2 is "[ p(180,{y,-y}) ... ]*n".  Blocks expand at parse time
// into the flat event list.
//
// Throws SyntaxError / UnknownPhaseError with 1-based line:col positions,
// and ValidationError for timeline violations (e.g. negative durations).
PulseProgram parse_program(const std::string& text);

}  // namespace echotrain::seq
