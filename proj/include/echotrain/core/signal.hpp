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

#include <complex>
#include <string>
#include <vector>

namespace echotrain::core {

// Detected complex transverse signal, normalized so that an ideal pi/2
// pulse on equilibrium gives s = -i at t = 0+.
struct SignalTrace {
  std::vector<double> t;                     // s, absolute program time
  std::vector<std::complex<double>> s;       // dimensionless, |s| <= 1

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : s) m = std::max(m, std::abs(v));
    return m;
  }
};

// One echo-top sample per refocusing cycle, raw complex amplitude.
struct EchoEntry {
  int index = 0;                // 1-based echo number
  double t = 0.0;               // s
  std::complex<double> amp{0.0, 0.0};
};

struct EchoTrain {
  std::vector<EchoEntry> entries;
  double tau = 0.0;             // s, interpulse half spacing (0 if unknown)
  std::string sequence;         // builtin name when applicable

  std::size_t size() const { return entries.size(); }
};

}  // namespace echotrain::core
