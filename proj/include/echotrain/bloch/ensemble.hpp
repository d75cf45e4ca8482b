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

#include <cstdint>
#include <vector>

#include "echotrain/core/sample.hpp"

namespace echotrain::bloch {

struct Ensemble {
  std::vector<core::Isochromat> isochromats;
  core::SampleSpec sample;
  std::uint64_t rng_seed = 0;
};

// Deterministic: the same (spec, seed) always yields the same ensemble.
// Offsets, positions and the b1 jitter are drawn by stratified inversion
// (one jittered stratum per isochromat, strata decorrelated by seeded
// shuffles), which tightens ensemble averages well below the iid
// 1/sqrt(n) floor without biasing them.
Ensemble build_ensemble(const core::SampleSpec& spec, std::uint64_t seed);

}  // namespace echotrain::bloch
