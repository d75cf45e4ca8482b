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
#include <vector>

#include "echotrain/seq/program.hpp"

namespace echotrain::seq {

// Named sequences:
//   he        (pi/2)x - tau - (pi)x - tau - echo
//   ste       (pi/2)x - tau - (pi/2)y - t1 - (pi/2)y - tau - echo
//   cp1       (pi/2)x - [ tau - (pi)x  - tau - echo ]*n
//   cp2       like cp1 with pi phases x,-x
//   cpmg1     like cp1 with pi phase  y
//   cpmg2     like cp1 with pi phases y,-y
//   cpmg4     like cp1 with pi phases y,y,-y,-y
//   ste_cpmg1 ste geometry with (pi)y,(pi)y   refocusing pulses
//   ste_cpmg2 ste geometry with (pi)y,(pi)-y
//
// n counts phase cycles, so a train emits n * cycle_length pi pulses and
// as many echoes.  Acquisition defaults to one complex sample at each echo
// top; set window > 0 (with dwell) to record a window centered on the top.
// In windowed ste/ste_cpmg* the window starts at the last pulse so that
// both the stimulated echo (tau later) and the refocused primary echo
// (t1 - 2 tau later still) fall inside it.
struct BuiltinParams {
  double tau = 0.0;     // s, half echo spacing, > 0
  double t1 = 0.0;      // s, storage interval (ste family), >= 0
  int n = 1;            // phase-cycle repetitions, >= 1
  double window = 0.0;  // s, acquisition window; 0 = point sample
  double dwell = 0.0;   // s, > 0 when window > 0
};

// Throws UnknownBuiltin for an unrecognized name (case-insensitive) and
// std::invalid_argument for out-of-range parameters.
PulseProgram make_builtin(const std::string& name, const BuiltinParams& params);

const std::vector<std::string>& builtin_names();

}  // namespace echotrain::seq
