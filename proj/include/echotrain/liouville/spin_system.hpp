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

#include <Eigen/Dense>
#include <stdexcept>

namespace echotrain::liouville {

// 2^n x 2^n dense matrices; the ceiling keeps a state under ~32 MB.
constexpr int kMaxSpins = 10;

class DimensionTooLarge : public std::runtime_error {
 public:
  explicit DimensionTooLarge(int n)
      : std::runtime_error("spin system with n=" + std::to_string(n) +
                           " exceeds the supported maximum of " +
                           std::to_string(kMaxSpins)) {}
};

// Spin-1/2 cluster with offsets and secular dipolar couplings.  Basis
// convention: computational index bit j (bit 0 least significant) is spin
// j, cleared = up (m = +1/2).
struct SpinSystem {
  int n = 2;
  Eigen::VectorXd offsets;      // rad/s per spin
  Eigen::MatrixXd couplings;    // rad/s, symmetric, zero diagonal
  Eigen::VectorXd flip_scales;  // per-spin flip-angle multiplier

  static SpinSystem make(int n);

  int dim() const { return 1 << n; }

  // Throws DimensionTooLarge or std::invalid_argument (asymmetric or
  // non-finite couplings, size mismatches).
  void validate() const;
};

// Full density matrix in the linear-response regime:
//   rho = 1/2^n + beta * (deviation),  deviation a sum of I_j^z at prep.
// beta is the stored deviation amplitude; observables divide it back out,
// so its magnitude only matters for keeping rho positive semidefinite.
struct DensityState {
  Eigen::MatrixXcd rho;
  double beta = 1.0;

  int n_spins() const;

  // Hermitian to 1e-12, unit trace to 1e-12, eigenvalues >= -1e-10.
  void validate() const;

  // rho = 1/2^n + beta * sum_j I_j^z with beta = 1/(n 2^n): strictly
  // positive and normalized so a perfect pi/2 about x reads out s = -i.
  static DensityState equilibrium(int n);

  // rho = 1/2^n + beta * sum_j pz_j I_j^z, beta chosen PSD-safe.
  static DensityState from_polarization(const Eigen::VectorXd& pz);
};

}  // namespace echotrain::liouville
