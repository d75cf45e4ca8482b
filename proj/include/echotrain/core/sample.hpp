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

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "echotrain/core/magnetization.hpp"

namespace echotrain::core {

constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

// Gyromagnetic ratio of 1H in rad/(s*G).
constexpr double kGammaProton = 26752.218744;

// One spin packet: position, intrinsic offset, flip-angle multiplier and
// its share of the total magnetization. The total offset under a gradient
// is delta_omega + gamma*G*z, computed at run time and never stored.
struct Isochromat {
  double z = 0.0;            // cm
  double delta_omega = 0.0;  // rad/s
  double b1_scale = 1.0;     // nominal flip angle theta becomes b1_scale*theta
  double weight = 1.0;       // ensemble weights sum to 1
  Magnetization m = Magnetization::equilibrium();
};

enum class OffsetKind { Delta, Uniform, Gaussian, Lorentzian };

// Intrinsic line shape. Parameter meaning per kind:
//   Delta      omega0 (rad/s), every isochromat at the same offset
//   Uniform    half width (rad/s), offsets uniform in [-p, p]
//   Gaussian   standard deviation (rad/s)
//   Lorentzian half width at half maximum (rad/s)
struct OffsetDistribution {
  OffsetKind kind = OffsetKind::Delta;
  double param = 0.0;

  static OffsetDistribution delta(double omega0) {
    return {OffsetKind::Delta, omega0};
  }
  static OffsetDistribution uniform(double half_width) {
    return {OffsetKind::Uniform, half_width};
  }
  static OffsetDistribution gaussian(double sigma) {
    return {OffsetKind::Gaussian, sigma};
  }
  static OffsetDistribution lorentzian(double hwhm) {
    return {OffsetKind::Lorentzian, hwhm};
  }
};

struct SampleSpec {
  std::size_t n_isochromats = 1;
  OffsetDistribution offsets;
  double z_min = 0.0;  // cm, uniform position density over [z_min, z_max]
  double z_max = 0.0;
  std::vector<double> b1_profile = {1.0};  // polynomial in z for epsilon(z)
  double b1_sigma = 0.0;  // iid Gaussian spread added to epsilon(z)
  double t1 = kInfiniteTime;  // s; infinity = no relaxation
  double t2 = kInfiniteTime;  // s
  double gamma = kGammaProton;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  double b1_at(double z) const {
    double eps = 0.0;
    for (auto it = b1_profile.rbegin(); it != b1_profile.rend(); ++it)
      eps = eps * z + *it;
    return eps;
  }
};

// Static field gradient along z, G/cm. Direction is absorbed into the sign
// of z, so g >= 0. The induced offset is omega_G(z) = gamma*g*z.
struct GradientSpec {
  double g = 0.0;

  void validate() const {
    if (!(g >= 0.0)) throw std::invalid_argument("gradient.g must be >= 0");
  }
};

}  // namespace echotrain::core
