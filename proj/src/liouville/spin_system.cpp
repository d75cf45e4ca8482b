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
#include "echotrain/liouville/spin_system.hpp"

#include <cmath>

namespace echotrain::liouville {

SpinSystem SpinSystem::make(int n) {
  SpinSystem sys;
  sys.n = n;
  sys.offsets = Eigen::VectorXd::Zero(n);
  sys.couplings = Eigen::MatrixXd::Zero(n, n);
  sys.flip_scales = Eigen::VectorXd::Ones(n);
  return sys;
}

void SpinSystem::validate() const {
  if (n < 1) throw std::invalid_argument("spin system needs n >= 1");
  if (n > kMaxSpins) throw DimensionTooLarge(n);
  if (offsets.size() != n || flip_scales.size() != n ||
      couplings.rows() != n || couplings.cols() != n)
    throw std::invalid_argument("spin system field sizes do not match n");
  if (!offsets.allFinite() || !couplings.allFinite() ||
      !flip_scales.allFinite())
    throw std::invalid_argument("spin system has non-finite entries");
  for (int j = 0; j < n; ++j) {
    if (couplings(j, j) != 0.0)
      throw std::invalid_argument("couplings must have a zero diagonal");
    for (int k = 0; k < j; ++k)
      if (couplings(j, k) != couplings(k, j))
        throw std::invalid_argument("couplings must be symmetric");
  }
}

int DensityState::n_spins() const {
  int n = 0;
  while ((1 << n) < rho.rows()) ++n;
  return n;
}

void DensityState::validate() const {
  if (rho.rows() != rho.cols() || rho.rows() < 2 ||
      (rho.rows() & (rho.rows() - 1)) != 0)
    throw std::invalid_argument("rho must be square with power-of-two size");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("rho is not hermitian");
  if (std::abs(rho.trace() - std::complex<double>(1.0, 0.0)) > 1e-12)
    throw std::invalid_argument("rho trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho,
                                                     Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("rho is not positive semidefinite");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
}

DensityState DensityState::equilibrium(int n) {
  return from_polarization(Eigen::VectorXd::Ones(n));
}

DensityState DensityState::from_polarization(const Eigen::VectorXd& pz) {
  const int n = static_cast<int>(pz.size());
  if (n < 1) throw std::invalid_argument("need at least one spin");
  if (n > kMaxSpins) throw DimensionTooLarge(n);
  const int dim = 1 << n;
  // Largest |eigenvalue| of sum_j pz_j I_j^z is sum|pz|/2; half the
  // identity weight keeps rho strictly positive.
  const double span = std::max(1.0, pz.cwiseAbs().sum());
  DensityState state;
  state.beta = 1.0 / (span * dim);
  state.rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) {
    double dev = 0.0;
    for (int j = 0; j < n; ++j)
      dev += pz[j] * (((b >> j) & 1) ? -0.5 : 0.5);
    state.rho(b, b) = 1.0 / dim + state.beta * dev;
  }
  return state;
}

}  // namespace echotrain::liouville
