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
#include <utility>
#include <vector>

#include "echotrain/core/signal.hpp"
#include "echotrain/seq/program.hpp"

namespace echotrain::analysis {

// Binds a trace back to its program's acquisition windows: one entry per
// acquire event, sampled at the window center. Engine-agnostic (the trace
// may come from either engine, which share the sample layout).
core::EchoTrain echoes_from_trace(const seq::PulseProgram& program,
                                  const core::SignalTrace& trace);

class EchoWindowsOverlap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// monotone=false flags a non-monotone decay; the value then comes from the
// suffix-maximum envelope instead of the raw points.
struct DecayMeasure {
  double value = 0.0;  // s
  bool monotone = true;
};

// 1/e time of |s(t)| relative to the first sample (log-interpolated
// between the bracketing samples).
DecayMeasure measure_t2star(const core::SignalTrace& trace);

// Single-exponential time from a Hahn-echo sweep of (2*tau, amplitude)
// points via log-linear regression.
DecayMeasure measure_t2he(const std::vector<std::pair<double, double>>& points);

// d_eff = d^2 * tau (rad/s): the echo-train-narrowed dipolar strength used
// to index sweep reports.
double effective_dipolar(double d, double tau);

struct SteHeResult {
  double ste_amp = 0.0;
  double he_amp = 0.0;
  double ratio = 0.0;   // ste_amp / he_amp
  int phase_sign = 0;   // sign of Re(s_ste * conj(s_he))
  double ste_t = 0.0;   // s, location of the found peaks
  double he_t = 0.0;
};

// For a three-pulse program (pulses at 0, tau, tau+t1) the echoes after
// the last pulse sit at tau (stimulated) and t1-tau (refocused primary),
// i.e. at absolute 2*tau+t1 and 2*t1. Peaks of |s| are searched within
// +-window/2 of each; window <= 0 defaults to the echo separation
// |t1 - 2*tau|, making the two search regions just touch. Throws
// EchoWindowsOverlap when the echoes sit closer than the window.
SteHeResult ste_he_ratio(const core::SignalTrace& trace, double tau, double t1,
                         double window = 0.0);

}  // namespace echotrain::analysis
