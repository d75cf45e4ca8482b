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

#include <ostream>
#include <string>

#include "echotrain/cli/config.hpp"
#include "echotrain/core/signal.hpp"

namespace echotrain::cli {

struct RunOverrides {
  std::string out_dir;  // overrides config.output.dir when non-empty
  int workers = 0;      // overrides config.workers when > 0
  long limit = -1;      // sweep: stop after this many total rows (< 0 = all)
};

// Single run of the configured program: writes traces.csv and echoes.csv,
// fits.json when a fit is configured, optional SVG decay plot, and a
// run_meta.json sidecar (the only file carrying a timestamp).
void run_experiment(const ExperimentConfig& config, const RunOverrides& ov,
                    std::ostream& log);

// Grid sweep with a worker pool. Rows are committed to sweep_summary.csv
// strictly in grid order and flushed one by one; sweep_state.json records
// progress so an interrupted sweep resumes to a byte-identical summary.
// Columns depend on the sequence family: echo trains get double-exponential
// tail columns, the stimulated family gets STE/HE ratio columns.
void run_sweep(const ExperimentConfig& config, const RunOverrides& ov,
               std::ostream& log);

// `fit` subcommand: echoes.csv -> fit JSON text.
std::string fit_echoes_file(const std::string& echoes_csv, double t_short);

// `plot` subcommand: picks the plot type from the CSV header (trace,
// echoes, tail sweep or ratio sweep) and writes an SVG.
void plot_csv_file(const std::string& csv_path, const std::string& svg_path);

}  // namespace echotrain::cli
