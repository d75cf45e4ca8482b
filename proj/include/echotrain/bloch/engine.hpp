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

#include "echotrain/bloch/ensemble.hpp"
#include "echotrain/core/signal.hpp"
#include "echotrain/seq/program.hpp"

namespace echotrain::bloch {

class NoAcquisition : public std::runtime_error {
 public:
  NoAcquisition() : std::runtime_error("program has no acquire events") {}
};

struct EngineOptions {
  int n_workers = 1;  // signal is bit-identical for any worker count
};

// Evolves every isochromat independently through the program timeline:
// rf pulses rotate by b1_scale * nominal angle about (cos phase, sin phase,
// 0); delays precess at delta_omega + gamma*G*z with T1/T2 relaxation;
// acquire events record s(t) = sum_j w_j (mx_j + i my_j) on the dwell grid.
// Normalization anchor: an ideal pi/2 about x on equilibrium gives s = -i.
core::SignalTrace run(const seq::PulseProgram& program, const Ensemble& ensemble,
                      const core::GradientSpec& gradient,
                      const EngineOptions& options = {});

// One entry per acquire event: the sample at the window center (the echo
// top for builtin trains, where tops sit at 2*tau*k after the first pulse).
// Throws NoAcquisition when the program never acquires.
core::EchoTrain echo_amplitudes(const seq::PulseProgram& program,
                                const Ensemble& ensemble,
                                const core::GradientSpec& gradient,
                                const EngineOptions& options = {});

// pi/2 about x followed by one acquisition window; the emergent T2* is the
// 1/e time of |s|.
core::SignalTrace fid(const Ensemble& ensemble,
                      const core::GradientSpec& gradient, double duration,
                      double dwell, const EngineOptions& options = {});

}  // namespace echotrain::bloch
