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
#include "echotrain/liouville/engine.hpp"

#include <cmath>

namespace echotrain::liouville {

namespace {

using Complex = std::complex<double>;

double sz_of(int basis, int spin) {
  return ((basis >> spin) & 1) ? -0.5 : 0.5;
}

Eigen::MatrixXcd kron_with_2x2(const Eigen::MatrixXcd& a,
                               const Eigen::Matrix2cd& b) {
  Eigen::MatrixXcd out(a.rows() * 2, a.cols() * 2);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

double observable_norm(int n) {
  // Tr[(I^y)^2] = 2^(n-2) per spin in a 2^n space.
  return static_cast<double>(n) * std::ldexp(1.0, n - 2);
}

}  // namespace

Eigen::MatrixXd hamiltonian(const SpinSystem& system) {
  system.validate();
  const int n = system.n;
  const int dim = system.dim();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) diag += system.offsets[j] * sz_of(b, j);
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        diag += system.couplings(j, k) * 2.0 * sz_of(b, j) * sz_of(b, k);
    h(b, b) = diag;
    // Flip-flop: couples states with opposite (j, k) spin pair.
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        if (system.couplings(j, k) == 0.0) continue;
        if (((b >> j) & 1) == ((b >> k) & 1)) continue;
        const int b2 = b ^ (1 << j) ^ (1 << k);
        if (b2 > b) h(b, b2) = h(b2, b) = -0.5 * system.couplings(j, k);
      }
  }
  return h;
}

Eigen::MatrixXcd pulse_operator(const SpinSystem& system, double angle,
                                double phase) {
  system.validate();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
  const Complex mi(0.0, -1.0);
  for (int j = system.n - 1; j >= 0; --j) {
    const double half = 0.5 * angle * system.flip_scales[j];
    const double c = std::cos(half);
    const double s = std::sin(half);
    Eigen::Matrix2cd uj;
    uj << c, mi * s * std::exp(Complex(0.0, -phase)),
        mi * s * std::exp(Complex(0.0, phase)), c;
    u = kron_with_2x2(u, uj);
  }
  return u;
}

DensityState pulse(const DensityState& state, const SpinSystem& system,
                   double angle, double phase) {
  const Eigen::MatrixXcd u = pulse_operator(system, angle, phase);
  DensityState out = state;
  out.rho = u * state.rho * u.adjoint();
  return out;
}

DensityState evolve(const DensityState& state, const SpinSystem& system,
                    double t) {
  if (t < 0.0) throw std::invalid_argument("evolution time must be >= 0");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian(system));
  const Eigen::MatrixXcd u =
      es.eigenvectors().cast<Complex>() *
      (Complex(0.0, -t) * es.eigenvalues().array().cast<Complex>())
          .exp()
          .matrix()
          .asDiagonal() *
      es.eigenvectors().transpose().cast<Complex>();
  DensityState out = state;
  out.rho = u * state.rho * u.adjoint();
  return out;
}

std::complex<double> signal(const DensityState& state,
                            const SpinSystem& system) {
  const int n = system.n;
  if (state.rho.rows() != system.dim())
    throw std::invalid_argument("state dimension does not match system");
  // Tr[rho I_j^+] collects rho(b, b with spin j raised) over b with j down.
  Complex s(0.0, 0.0);
  const int dim = system.dim();
  for (int j = 0; j < n; ++j)
    for (int b = 0; b < dim; ++b)
      if ((b >> j) & 1) s += state.rho(b, b ^ (1 << j));
  return s / (state.beta * observable_norm(n));
}

double polarization(const DensityState& state, int spin) {
  const int n = state.n_spins();
  if (spin < 0 || spin >= n) throw std::invalid_argument("spin out of range");
  Complex acc(0.0, 0.0);
  for (int b = 0; b < (1 << n); ++b)
    acc += state.rho(b, b) * sz_of(b, spin);
  return acc.real() / (state.beta * std::ldexp(1.0, n - 2));
}

ExactEngine::ExactEngine(SpinSystem system) : system_(std::move(system)) {
  system_.validate();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian(system_));
  vectors_ = es.eigenvectors();
  values_ = es.eigenvalues();
}

const Eigen::MatrixXcd& ExactEngine::propagator(double t) const {
  auto it = u_cache_.find(t);
  if (it != u_cache_.end()) return it->second;
  const Eigen::MatrixXcd u =
      vectors_.cast<Complex>() *
      (Complex(0.0, -t) * values_.array().cast<Complex>())
          .exp()
          .matrix()
          .asDiagonal() *
      vectors_.transpose().cast<Complex>();
  return u_cache_.emplace(t, u).first->second;
}

DensityState ExactEngine::apply_pulse(const DensityState& state, double angle,
                                      double phase) const {
  auto key = std::make_pair(angle, phase);
  auto it = pulse_cache_.find(key);
  if (it == pulse_cache_.end())
    it = pulse_cache_.emplace(key, pulse_operator(system_, angle, phase)).first;
  DensityState out = state;
  out.rho = it->second * state.rho * it->second.adjoint();
  return out;
}

DensityState ExactEngine::apply_evolution(const DensityState& state,
                                          double t) const {
  if (t < 0.0) throw std::invalid_argument("evolution time must be >= 0");
  const Eigen::MatrixXcd& u = propagator(t);
  DensityState out = state;
  out.rho = u * state.rho * u.adjoint();
  return out;
}

core::SignalTrace ExactEngine::run_program(
    const seq::PulseProgram& program) const {
  return run_program(program, DensityState::equilibrium(system_.n));
}

core::SignalTrace ExactEngine::run_program(const seq::PulseProgram& program,
                                           const DensityState& initial) const {
  program.validate();
  if (initial.rho.rows() != system_.dim())
    throw std::invalid_argument("initial state dimension mismatch");
  core::SignalTrace trace;
  DensityState state = initial;
  const std::vector<seq::AcquireWindow> windows = seq::acquire_windows(program);
  std::size_t next_window = 0;
  for (const seq::PulseEvent& e : program.events) {
    switch (e.kind) {
      case seq::EventKind::RfPulse:
        state = apply_pulse(state, e.angle_rad(), e.phase_rad());
        break;
      case seq::EventKind::Delay:
        if (e.duration > 0.0) state = apply_evolution(state, e.duration);
        break;
      case seq::EventKind::Acquire: {
        const seq::AcquireWindow& w = windows[next_window++];
        for (int i = 0; i < w.n_samples; ++i) {
          trace.t.push_back(w.t_start + i * w.dwell);
          trace.s.push_back(signal(state, system_));
          if (i + 1 < w.n_samples) state = apply_evolution(state, w.dwell);
        }
        if (w.remainder > 0.0) state = apply_evolution(state, w.remainder);
        break;
      }
    }
  }
  return trace;
}

}  // namespace echotrain::liouville
