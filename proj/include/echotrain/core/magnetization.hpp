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

#include <cmath>

namespace echotrain::core {

// Dimensionless magnetization vector, thermal equilibrium normalized to
// M0 = 1 along +z. The transverse part (mx, my) carries the coherence.
struct Magnetization {
  double mx = 0.0;
  double my = 0.0;
  double mz = 1.0;

  static Magnetization equilibrium() { return {0.0, 0.0, 1.0}; }
  double norm() const { return std::sqrt(mx * mx + my * my + mz * mz); }
  double transverse_norm() const { return std::sqrt(mx * mx + my * my); }
};

// RF pulse: active right-handed rotation by `angle` about the unit axis
// (cos phase, sin phase, 0). Sign convention anchor: a pi/2 pulse of
// phase 0 (x axis) takes equilibrium (0,0,1) to (0,-1,0).
inline Magnetization rotate(const Magnetization& m, double axis_phase,
                            double angle) {
  const double nx = std::cos(axis_phase);
  const double ny = std::sin(axis_phase);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  // Rodrigues with n = (nx, ny, 0):
  //   m' = m c + (n x m) s + n (n.m) (1 - c)
  const double ndotm = nx * m.mx + ny * m.my;
  const double omc = 1.0 - c;
  return {m.mx * c + ny * m.mz * s + nx * ndotm * omc,
          m.my * c - nx * m.mz * s + ny * ndotm * omc,
          m.mz * c + (nx * m.my - ny * m.mx) * s};
}

// Same rotation given precomputed cos/sin of angle and axis phase; the
// ensemble engine calls this with per-isochromat cached trig tables.
inline Magnetization rotate_cs(const Magnetization& m, double nx, double ny,
                               double c, double s) {
  const double ndotm = nx * m.mx + ny * m.my;
  const double omc = 1.0 - c;
  return {m.mx * c + ny * m.mz * s + nx * ndotm * omc,
          m.my * c - nx * m.mz * s + ny * ndotm * omc,
          m.mz * c + (nx * m.my - ny * m.mx) * s};
}

// Free evolution for time t under total offset omega_total (rad/s) with
// phenomenological relaxation. The transverse part precesses right-handed
// about +z (starting from -y, evolution yields mx = sin(wt), my = -cos(wt)),
// decays with T2; mz recovers toward 1 with T1. Pass +infinity to disable
// either relaxation channel.
inline Magnetization free_evolve(const Magnetization& m, double omega_total,
                                 double t, double t1, double t2) {
  const double c = std::cos(omega_total * t);
  const double s = std::sin(omega_total * t);
  const double e2 = std::exp(-t / t2);
  const double e1 = std::exp(-t / t1);
  return {e2 * (m.mx * c - m.my * s), e2 * (m.mx * s + m.my * c),
          1.0 + (m.mz - 1.0) * e1};
}

// Precomputed-coefficient form used by the engine hot loop.
inline Magnetization free_evolve_cs(const Magnetization& m, double c, double s,
                                    double e1, double e2) {
  return {e2 * (m.mx * c - m.my * s), e2 * (m.mx * s + m.my * c),
          1.0 + (m.mz - 1.0) * e1};
}

}  // namespace echotrain::core
