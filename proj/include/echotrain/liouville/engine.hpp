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
#include <map>
#include <utility>

#include "echotrain/core/signal.hpp"
#include "echotrain/liouville/spin_system.hpp"
#include "echotrain/seq/program.hpp"

namespace echotrain::liouville {

// H = sum_j dw_j I_j^z + sum_{j<k} d_jk [2 I_j^z I_k^z
//                                        - 1/2 (I_j^+ I_k^- + I_j^- I_k^+)].
// Real symmetric in the computational basis.
Eigen::MatrixXd hamiltonian(const SpinSystem& system);

// U = exp(-i angle sum_j flip_scales_j I_j^phi): tensor product of 2x2
// single-spin rotations. Same handedness as the vector engine: a pi/2
// pulse about x takes I^z to -I^y.
Eigen::MatrixXcd pulse_operator(const SpinSystem& system, double angle,
                                double phase);

DensityState pulse(const DensityState& state, const SpinSystem& system,
                   double angle, double phase);

// Closed-system evolution under hamiltonian(system) for time t >= 0.
DensityState evolve(const DensityState& state, const SpinSystem& system,
                    double t);

// s = Tr[rho sum_j I_j^+] / (beta n 2^(n-2)): a full pi/2 coherence has
// |s| = 1, matching the vector engine's normalization.
std::complex<double> signal(const DensityState& state,
                            const SpinSystem& system);

// Tr[rho I_j^z] / (beta 2^(n-2)): +1 at full up polarization of spin j.
double polarization(const DensityState& state, int spin);

// Exact program runner with the Hamiltonian eigendecomposition done once
// and propagators cached per distinct duration and pulse. Not internally
// thread-safe; use one engine per thread.
class ExactEngine {
 public:
  explicit ExactEngine(SpinSystem system);

  const SpinSystem& system() const { return system_; }

  DensityState apply_pulse(const DensityState& state, double angle,
                           double phase) const;
  DensityState apply_evolution(const DensityState& state, double t) const;

  // Unitary evolution from the given state (equilibrium by default),
  // sampling sum_j I_j^+ at acquire events. No relaxation channels.
  core::SignalTrace run_program(const seq::PulseProgram& program) const;
  core::SignalTrace run_program(const seq::PulseProgram& program,
                                const DensityState& initial) const;

 private:
  const Eigen::MatrixXcd& propagator(double t) const;

  SpinSystem system_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd values_;
  mutable std::map<double, Eigen::MatrixXcd> u_cache_;
  mutable std::map<std::pair<double, double>, Eigen::MatrixXcd> pulse_cache_;
};

}  // namespace echotrain::liouville
