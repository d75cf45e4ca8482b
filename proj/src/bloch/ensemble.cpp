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
#include "echotrain/bloch/ensemble.hpp"

#include <cmath>

#include "echotrain/core/rng.hpp"

namespace echotrain::bloch {

namespace {
constexpr double kPi = 3.14159265358979323846;

// p strictly inside stratum i of n: (i + u)/n with u in (0,1).
double stratum_p(std::size_t i, std::size_t n, core::Rng& rng) {
  return (static_cast<double>(i) + rng.uniform_open()) / static_cast<double>(n);
}

void shuffle(std::vector<double>& v, core::Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng.integer(i)]);
}
}  // namespace

Ensemble build_ensemble(const core::SampleSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t n = spec.n_isochromats;
  core::Rng rng(seed);

  std::vector<double> offsets(n);
  const core::OffsetDistribution& od = spec.offsets;
  for (std::size_t i = 0; i < n; ++i) {
    switch (od.kind) {
      case core::OffsetKind::Delta:
        offsets[i] = od.param;
        break;
      case core::OffsetKind::Uniform:
        offsets[i] = od.param * (2.0 * stratum_p(i, n, rng) - 1.0);
        break;
      case core::OffsetKind::Gaussian:
        offsets[i] = od.param * core::Rng::normal_quantile(stratum_p(i, n, rng));
        break;
      case core::OffsetKind::Lorentzian:
        offsets[i] = od.param * std::tan(kPi * (stratum_p(i, n, rng) - 0.5));
        break;
    }
  }

  std::vector<double> zs(n);
  const double z_span = spec.z_max - spec.z_min;
  for (std::size_t i = 0; i < n; ++i)
    zs[i] = spec.z_min + z_span * stratum_p(i, n, rng);
  shuffle(zs, rng);

  std::vector<double> b1_noise;
  if (spec.b1_sigma > 0.0) {
    b1_noise.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      b1_noise[i] = core::Rng::normal_quantile(stratum_p(i, n, rng));
    shuffle(b1_noise, rng);
  }

  Ensemble ens;
  ens.sample = spec;
  ens.rng_seed = seed;
  ens.isochromats.resize(n);
  const double w = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    core::Isochromat& iso = ens.isochromats[i];
    iso.z = zs[i];
    iso.delta_omega = offsets[i];
    iso.b1_scale = spec.b1_at(iso.z);
    if (!b1_noise.empty()) iso.b1_scale += spec.b1_sigma * b1_noise[i];
    iso.weight = w;
    iso.m = core::Magnetization::equilibrium();
  }
  return ens;
}

}  // namespace echotrain::bloch
