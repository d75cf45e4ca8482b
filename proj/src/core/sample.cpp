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
#include "echotrain/core/sample.hpp"

#include <cmath>

namespace echotrain::core {

void SampleSpec::validate() const {
  if (n_isochromats < 1)
    throw std::invalid_argument("sample.n_isochromats must be >= 1");
  if (!(t2 > 0.0)) throw std::invalid_argument("sample.t2 must be > 0");
  if (!(t1 > 0.0)) throw std::invalid_argument("sample.t1 must be > 0");
  // Physical regime |M| <= M0 requires T2 <= 2*T1.
  if (!(t1 >= 0.5 * t2))
    throw std::invalid_argument("sample.t1 must be >= t2/2");
  if (!(z_max >= z_min))
    throw std::invalid_argument("sample.spatial_extent: z_max < z_min");
  if (b1_profile.empty())
    throw std::invalid_argument("sample.b1_profile must not be empty");
  if (!(b1_sigma >= 0.0))
    throw std::invalid_argument("sample.b1_sigma must be >= 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("sample.gamma must be > 0");
  switch (offsets.kind) {
    case OffsetKind::Delta:
      if (!std::isfinite(offsets.param))
        throw std::invalid_argument("sample.offsets: omega0 must be finite");
      break;
    case OffsetKind::Uniform:
    case OffsetKind::Gaussian:
    case OffsetKind::Lorentzian:
      if (!(offsets.param > 0.0))
        throw std::invalid_argument(
            "sample.offsets: width parameter must be > 0");
      break;
  }
  // The flip-angle multiplier must stay positive over the sample.
  const int kProbe = 33;
  for (int i = 0; i < kProbe; ++i) {
    const double z =
        z_min + (z_max - z_min) * (kProbe == 1 ? 0.0 : double(i) / (kProbe - 1));
    if (!(b1_at(z) > 0.0))
      throw std::invalid_argument("sample.b1_profile: epsilon(z) must be > 0");
  }
}

}  // namespace echotrain::core
