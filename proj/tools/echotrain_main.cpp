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
// echotrain -- spin-echo train simulation and analysis.
//
// Exit codes: 0 success, 1 invalid config/arguments, 2 runtime failure,
// 3 fit did not converge.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "echotrain/analysis/fitting.hpp"
#include "echotrain/cli/config.hpp"
#include "echotrain/cli/experiment.hpp"
#include "echotrain/seq/builtins.hpp"
#include "echotrain/seq/errors.hpp"
#include "echotrain/seq/parser.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kRuntime = 2;
constexpr int kNoConverge = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const echotrain::analysis::FitDidNotConverge& e) {
    std::cerr << "echotrain: fit did not converge: " << e.what() << "\n";
    return kNoConverge;
  } catch (const echotrain::cli::ConfigError& e) {
    std::cerr << "echotrain: config error: " << e.what() << "\n";
    return kBadInput;
  } catch (const echotrain::seq::SyntaxError& e) {
    std::cerr << "echotrain: syntax error: " << e.what() << "\n";
    return kBadInput;
  } catch (const echotrain::seq::ValidationError& e) {
    std::cerr << "echotrain: invalid program: " << e.what() << "\n";
    return kBadInput;
  } catch (const echotrain::seq::UnknownBuiltin& e) {
    std::cerr << "echotrain: " << e.what() << "\n";
    return kBadInput;
  } catch (const echotrain::analysis::DegenerateDesign& e) {
    std::cerr << "echotrain: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "echotrain: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "echotrain: " << e.what() << "\n";
    return kRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-echo train simulation and analysis"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int workers = 0;
  long long limit = -1;
  std::string echoes_csv;
  double t_short = 0.0;
  std::string csv_path;
  std::string svg_path;
  std::string program_path;
  std::string builtin_name;
  double tau = 0.0, t1_delay = 0.0, window = 0.0, dwell = 0.0;
  int n_cycles = 1;

  CLI::App* run = app.add_subcommand("run", "Simulate one pulse program");
  run->add_option("config", config_path, "experiment config (JSON)")
      ->required();
  run->add_option("-o,--out", out_dir, "output directory override");
  run->add_option("-w,--workers", workers, "worker thread override");

  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("config", config_path, "experiment config (JSON)")
      ->required();
  sweep->add_option("-o,--out", out_dir, "output directory override");
  sweep->add_option("-w,--workers", workers, "worker thread override");
  sweep->add_option("--limit", limit,
                    "stop after the summary holds this many rows");

  CLI::App* fit = app.add_subcommand("fit", "Fit a double exponential "
                                            "to an echo CSV");
  fit->add_option("echoes", echoes_csv, "echoes.csv from a run")->required();
  fit->add_option("--t-short", t_short, "fixed fast time constant (s)")
      ->required();

  CLI::App* plot = app.add_subcommand("plot", "Render a CSV as an SVG plot");
  plot->add_option("csv", csv_path, "input CSV")->required();
  plot->add_option("svg", svg_path, "output SVG")->required();

  CLI::App* parse = app.add_subcommand(
      "parse", "Parse a pulse program or expand a builtin, print canonically");
  parse->add_option("program", program_path, "pulse-program text file");
  parse->add_option("--builtin", builtin_name,
                    "builtin sequence name (he, cp1, cp2, cpmg1, cpmg2, "
                    "cpmg4, ste, ste_cpmg1, ste_cpmg2)");
  parse->add_option("--tau", tau, "half echo spacing (s)");
  parse->add_option("--t1-delay", t1_delay, "second interpulse delay (s)");
  parse->add_option("--n", n_cycles, "number of phase cycles");
  parse->add_option("--window", window, "acquisition window (s)");
  parse->add_option("--dwell", dwell, "acquisition dwell (s)");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed())
    return run_guarded([&] {
      const auto config = echotrain::cli::load_config(config_path);
      echotrain::cli::RunOverrides ov;
      ov.out_dir = out_dir;
      ov.workers = workers;
      echotrain::cli::run_experiment(config, ov, std::cout);
    });
  if (sweep->parsed())
    return run_guarded([&] {
      const auto config = echotrain::cli::load_config(config_path);
      echotrain::cli::RunOverrides ov;
      ov.out_dir = out_dir;
      ov.workers = workers;
      ov.limit = limit;
      echotrain::cli::run_sweep(config, ov, std::cout);
    });
  if (fit->parsed())
    return run_guarded([&] {
      std::cout << echotrain::cli::fit_echoes_file(echoes_csv, t_short);
    });
  if (plot->parsed())
    return run_guarded([&] {
      echotrain::cli::plot_csv_file(csv_path, svg_path);
      std::cout << "wrote " << svg_path << "\n";
    });
  if (parse->parsed())
    return run_guarded([&] {
      echotrain::seq::PulseProgram program;
      if (!builtin_name.empty()) {
        echotrain::seq::BuiltinParams params;
        params.tau = tau;
        params.t1 = t1_delay;
        params.n = n_cycles;
        params.window = window;
        params.dwell = dwell;
        program = echotrain::seq::make_builtin(builtin_name, params);
      } else if (!program_path.empty()) {
        program = echotrain::seq::parse_program(read_file(program_path));
      } else {
        throw std::invalid_argument(
            "parse: give a program file or --builtin NAME");
      }
      std::cout << program.to_text();
    });
  return kBadInput;
}
