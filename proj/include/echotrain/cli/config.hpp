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
#include <stdexcept>
#include <string>
#include <vector>

#include "echotrain/core/sample.hpp"
#include "echotrain/liouville/spin_system.hpp"
#include "echotrain/seq/program.hpp"

namespace echotrain::cli {

// Config problems carry the JSON field path ("sample.t2: ...").
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SequenceConfig {
  std::string builtin;  // one of the named sequences, or empty when inline
  std::string source;   // inline pulse-program text
  double tau = 0.0;     // s
  double t1 = 0.0;      // s
  int n = 1;
  double window = 0.0;  // s
  double dwell = 0.0;   // s
};

struct SweepAxes {
  std::vector<double> tau;       // s
  std::vector<double> g;         // G/cm
  std::vector<double> t1;        // s
  std::vector<double> b1_sigma;
  std::vector<int> n;

  bool empty() const {
    return tau.empty() && g.empty() && t1.empty() && b1_sigma.empty() &&
           n.empty();
  }
};

struct FitConfig {
  bool requested = false;
  double t_short = 0.0;  // s
};

struct OutputConfig {
  std::string dir = "out";
  bool csv = true;
  bool json = true;
  bool svg = false;
};

// One resolved sweep grid point. The grid is the cartesian product in
// row-major axis order tau, g, t1, b1_sigma, n; absent axes pin the base
// config value.
struct SweepPoint {
  std::size_t index = 0;
  double tau = 0.0;
  double g = 0.0;
  double t1 = 0.0;
  double b1_sigma = 0.0;
  int n = 1;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string engine = "bloch";  // or "liouville"
  int workers = 1;
  core::SampleSpec sample;
  core::GradientSpec gradient;
  SequenceConfig sequence;
  bool has_spin_system = false;
  liouville::SpinSystem spin_system;
  SweepAxes sweep;
  FitConfig fit;
  OutputConfig output;
  // FNV-1a of the canonical config text; guards sweep resumption.
  std::string fingerprint;

  seq::PulseProgram make_program() const;
  seq::PulseProgram make_program(const SweepPoint& point) const;
  SweepPoint base_point() const;
};

std::vector<SweepPoint> sweep_grid(const ExperimentConfig& config);

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace echotrain::cli
