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

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "echotrain/core/signal.hpp"

namespace echotrain::analysis {

class FitDidNotConverge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateDesign : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Double-exponential decomposition of an echo decay,
//   y(t) = a_s exp(-t/t_short) + a_l exp(-t/t_l),
// with t_short held fixed. tail_absent marks decays whose fitted a_l sits
// below the noise floor (5x the residual RMS of a pure single-exponential
// fit); it is a result state, not an error. a_l_tail/t_l_tail come from an
// independent single-exponential re-fit restricted to t > 3 t_short.
struct FitResult {
  double a_s = 0.0;
  double a_l = 0.0;
  double t_short = 0.0;  // s, fixed input
  double t_l = 0.0;      // s
  double a_l_tail = 0.0;
  double t_l_tail = 0.0;       // s
  double residual_rms = 0.0;
  double noise_floor = 0.0;
  bool tail_absent = false;
  int iterations = 0;
  std::size_t n_points = 0;
  std::array<double, 3> std_error{};  // a_s, a_l, t_l

  double tail_fraction() const { return a_s > 0.0 ? a_l / a_s : 0.0; }
};

// Gauss-Newton with analytic Jacobian and Armijo backtracking on
// (|amplitude|, t) pairs. Residuals are relative (scaled by the data, with
// a 1e-3 y_max floor) so a weak slow tail is resolved instead of being
// drowned by the first echoes. Requires >= 6 echoes and t_short_fixed > 0;
// throws std::invalid_argument on malformed input. When the solver cannot
// converge, or lands on t_l < 2 t_short (no resolvable second component),
// the result collapses to the fixed-rate single exponential with
// tail_absent = true rather than failing the whole sweep.
FitResult fit_double_exponential(const core::EchoTrain& train,
                                 double t_short_fixed);
FitResult fit_double_exponential(const std::vector<double>& t,
                                 const std::vector<double>& y,
                                 double t_short_fixed);

struct QuadraticFit {
  double a = 0.0;  // curvature, x^-2 units of the abscissa
  double b = 0.0;  // intercept
  double r_squared = 1.0;
};

// Least squares of ratio = a G^2 + b over (G, ratio) points. Throws
// DegenerateDesign for < 4 points or < 3 distinct G.
QuadraticFit fit_quadratic_gradient(
    const std::vector<std::pair<double, double>>& points);

// Schema documented in docs/fit-result-schema.md; schema_version 1.
std::string fit_result_to_json(const FitResult& fit);

}  // namespace echotrain::analysis
