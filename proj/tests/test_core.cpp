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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "echotrain/core/magnetization.hpp"
#include "echotrain/core/rng.hpp"
#include "echotrain/core/sample.hpp"

using echotrain::core::free_evolve;
using echotrain::core::kInfiniteTime;
using echotrain::core::Magnetization;
using echotrain::core::OffsetDistribution;
using echotrain::core::Rng;
using echotrain::core::rotate;
using echotrain::core::SampleSpec;

namespace {

void check_close(const Magnetization& m, double x, double y, double z,
                 double tol) {
  CHECK(std::abs(m.mx - x) <= tol);
  CHECK(std::abs(m.my - y) <= tol);
  CHECK(std::abs(m.mz - z) <= tol);
}

// Independent Rodrigues oracle: full 3x3 matrix for axis (cos p, sin p, 0).
std::array<double, 9> rotation_matrix(double phase, double angle) {
  const double nx = std::cos(phase), ny = std::sin(phase);
  const double c = std::cos(angle), s = std::sin(angle);
  const double omc = 1.0 - c;
  return {c + nx * nx * omc, nx * ny * omc,     ny * s,
          nx * ny * omc,     c + ny * ny * omc, -nx * s,
          -ny * s,           nx * s,            c};
}

Magnetization apply_matrix(const std::array<double, 9>& r,
                           const Magnetization& m) {
  return {r[0] * m.mx + r[1] * m.my + r[2] * m.mz,
          r[3] * m.mx + r[4] * m.my + r[5] * m.mz,
          r[6] * m.mx + r[7] * m.my + r[8] * m.mz};
}

Magnetization random_unit(Rng& rng) {
  Magnetization m{rng.normal(), rng.normal(), rng.normal()};
  const double n = m.norm();
  return {m.mx / n, m.my / n, m.mz / n};
}

}  // namespace

TEST_CASE("rotate: convention anchors") {
  const Magnetization eq = Magnetization::equilibrium();
  CHECK(eq.mx == 0.0);
  CHECK(eq.my == 0.0);
  CHECK(eq.mz == 1.0);

  // (pi/2)_x takes equilibrium to -y; this sign fixes every other phase.
  check_close(rotate(eq, 0.0, M_PI_2), 0.0, -1.0, 0.0, 1e-15);
  // (pi)_x inverts.
  check_close(rotate(eq, 0.0, M_PI), 0.0, 0.0, -1.0, 1e-15);
  // (pi/2)_y takes z to +x in the same handedness.
  check_close(rotate(eq, M_PI_2, M_PI_2), 1.0, 0.0, 0.0, 1e-15);
}

TEST_CASE("rotate: pi about y fixes the y component") {
  // R_y(pi) = diag(-1, 1, -1): (0,-1,0) is on the axis and is untouched.
  const Magnetization m{0.0, -1.0, 0.0};
  const Magnetization out = rotate(m, M_PI_2, M_PI);
  check_close(out, 0.0, -1.0, 0.0, 1e-15);
  CHECK(std::abs(out.mz) <= 1e-16);

  const auto oracle = apply_matrix(rotation_matrix(M_PI_2, M_PI), m);
  check_close(out, oracle.mx, oracle.my, oracle.mz, 1e-15);

  // An off-axis probe distinguishes R_y(pi) from a sign flip of y.
  const Magnetization probe = rotate({1.0, 0.0, 0.5}, M_PI_2, M_PI);
  check_close(probe, -1.0, 0.0, -0.5, 1e-15);

  // Two quarter turns compose to the half turn.
  const Magnetization twice =
      rotate(rotate(m, M_PI_2, M_PI_2), M_PI_2, M_PI_2);
  check_close(twice, out.mx, out.my, out.mz, 1e-15);
}

TEST_CASE("rotate matches the explicit rotation-matrix oracle") {
  Rng rng(421);
  for (int i = 0; i < 2000; ++i) {
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    const double angle = rng.uniform(-2.0 * M_PI, 2.0 * M_PI);
    const Magnetization m = random_unit(rng);
    const Magnetization got = rotate(m, phase, angle);
    const Magnetization want = apply_matrix(rotation_matrix(phase, angle), m);
    CHECK(std::abs(got.mx - want.mx) <= 1e-14);
    CHECK(std::abs(got.my - want.my) <= 1e-14);
    CHECK(std::abs(got.mz - want.mz) <= 1e-14);
  }
}

TEST_CASE("rotate preserves the norm") {
  Rng rng(7);
  double worst = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const Magnetization m = random_unit(rng);
    const double n = rotate(m, rng.uniform(0.0, 2.0 * M_PI),
                            rng.uniform(-8.0, 8.0))
                         .norm();
    worst = std::max(worst, std::abs(n - m.norm()));
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("rotate: a pi rotation is an involution") {
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    const Magnetization m = random_unit(rng);
    const Magnetization back = rotate(rotate(m, phase, M_PI), phase, M_PI);
    CHECK(std::abs(back.mx - m.mx) <= 1e-13);
    CHECK(std::abs(back.my - m.my) <= 1e-13);
    CHECK(std::abs(back.mz - m.mz) <= 1e-13);
  }
}

TEST_CASE("free_evolve: quarter-turn handedness") {
  // Right-handed about +z: +x rotates into +y after a quarter turn.
  const Magnetization m{1.0, 0.0, 0.0};
  const Magnetization out =
      free_evolve(m, M_PI_2 * 1e3, 1e-3, kInfiniteTime, kInfiniteTime);
  check_close(out, 0.0, 1.0, 0.0, 1e-12);
}

TEST_CASE("free_evolve: pure relaxation limits") {
  const double t2 = 1.8e-3;
  const Magnetization decayed =
      free_evolve({0.0, -1.0, 0.0}, 0.0, t2, kInfiniteTime, t2);
  check_close(decayed, 0.0, -std::exp(-1.0), 0.0, 1e-15);

  const double t1 = 0.2;
  const Magnetization recovered =
      free_evolve({0.0, 0.0, 0.0}, 12345.6, t1, t1, 1e-3);
  CHECK(recovered.mz == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(recovered.mx == 0.0);
  CHECK(recovered.my == 0.0);
}

TEST_CASE("free_evolve without relaxation preserves norm and mz") {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const Magnetization m = random_unit(rng);
    const Magnetization out = free_evolve(m, rng.uniform(-1e5, 1e5),
                                          rng.uniform(0.0, 1e-2),
                                          kInfiniteTime, kInfiniteTime);
    // 1 + (mz - 1): two roundings of magnitude <= ulp(2)/2 each.
    CHECK(std::abs(out.mz - m.mz) <= 5e-16);
    CHECK(std::abs(out.norm() - m.norm()) <= 1e-15);
  }
}

TEST_CASE("free_evolve composes over time") {
  Rng rng(23);
  for (int i = 0; i < 2000; ++i) {
    const Magnetization m = random_unit(rng);
    const double w = rng.uniform(-5e4, 5e4);
    const double ta = rng.uniform(0.0, 5e-3);
    const double tb = rng.uniform(0.0, 5e-3);
    const double t1 = rng.uniform(1e-3, 1.0);
    const double t2 = rng.uniform(1e-4, 2.0 * t1);
    const Magnetization whole = free_evolve(m, w, ta + tb, t1, t2);
    const Magnetization split =
        free_evolve(free_evolve(m, w, ta, t1, t2), w, tb, t1, t2);
    CHECK(std::abs(whole.mx - split.mx) <= 1e-13);
    CHECK(std::abs(whole.my - split.my) <= 1e-13);
    CHECK(std::abs(whole.mz - split.mz) <= 1e-13);
  }
}

TEST_CASE("SampleSpec validation enforces the physical regime") {
  SampleSpec spec;
  spec.n_isochromats = 10;
  spec.offsets = OffsetDistribution::lorentzian(1111.0);
  spec.t1 = 0.2;
  spec.t2 = 1.8e-3;
  CHECK_NOTHROW(spec.validate());

  SUBCASE("t2 > 2 t1 would let |M| exceed M0") {
    spec.t1 = 1e-3;
    spec.t2 = 3e-3;
    CHECK_THROWS_WITH_AS(spec.validate(), "sample.t1 must be >= t2/2",
                         std::invalid_argument);
  }
  SUBCASE("infinite relaxation is the no-relaxation encoding") {
    spec.t1 = kInfiniteTime;
    spec.t2 = kInfiniteTime;
    CHECK_NOTHROW(spec.validate());
  }
  SUBCASE("width parameters must be positive") {
    spec.offsets = OffsetDistribution::gaussian(0.0);
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  }
  SUBCASE("a delta line at zero offset is fine") {
    spec.offsets = OffsetDistribution::delta(0.0);
    CHECK_NOTHROW(spec.validate());
  }
  SUBCASE("inverted spatial extent") {
    spec.z_min = 0.5;
    spec.z_max = -0.5;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  }
  SUBCASE("flip-angle profile must stay positive over the sample") {
    spec.z_min = -0.5;
    spec.z_max = 0.5;
    spec.b1_profile = {0.1, 0.0, -1.0};  // negative at the edges
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  }
  SUBCASE("empty profile") {
    spec.b1_profile = {};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  }
  SUBCASE("zero isochromats") {
    spec.n_isochromats = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  }
}

TEST_CASE("b1_at evaluates the profile polynomial in z") {
  SampleSpec spec;
  spec.b1_profile = {1.0, 0.0, -0.2};  // 1 - 0.2 z^2
  CHECK(spec.b1_at(0.0) == doctest::Approx(1.0));
  CHECK(spec.b1_at(0.5) == doctest::Approx(1.0 - 0.2 * 0.25));
  CHECK(spec.b1_at(-0.5) == doctest::Approx(1.0 - 0.2 * 0.25));

  spec.b1_profile = {0.5, 0.9};  // 0.5 + 0.9 z
  CHECK(spec.b1_at(0.25) == doctest::Approx(0.725));
}

TEST_CASE("GradientSpec rejects negative strength") {
  echotrain::core::GradientSpec g;
  g.g = 2.0;
  CHECK_NOTHROW(g.validate());
  g.g = -1.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("Rng: determinism and variate ranges") {
  Rng a(20260825), b(20260825);
  for (int i = 0; i < 1000; ++i) CHECK(a.uniform() == b.uniform());

  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.uniform(-2.0, 3.0);
    CHECK(v >= -2.0);
    CHECK(v < 3.0);
    CHECK(rng.integer(7) < 7);
  }
}

TEST_CASE("Rng: normal quantile round-trips against erfc") {
  CHECK(std::abs(Rng::normal_quantile(0.5)) <= 1e-15);
  for (double p : {1e-6, 1e-3, 0.02425, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99,
                   1.0 - 1e-6}) {
    const double x = Rng::normal_quantile(p);
    const double cdf = 0.5 * std::erfc(-x / M_SQRT2);
    CHECK(std::abs(cdf - p) <= 1e-13);
  }
  // Antisymmetry away from the upper tail, where Phi(x) = 1 - O(eps)
  // caps the attainable quantile accuracy at ~1e-16/pdf(x).
  for (double p : {1e-3, 0.1, 0.25, 0.4}) {
    CHECK(std::abs(Rng::normal_quantile(p) + Rng::normal_quantile(1.0 - p)) <=
          1e-12);
  }
}
