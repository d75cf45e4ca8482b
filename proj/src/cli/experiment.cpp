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
#include "echotrain/cli/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "echotrain/analysis/fitting.hpp"
#include "echotrain/analysis/measures.hpp"
#include "echotrain/bloch/engine.hpp"
#include "echotrain/cli/csvio.hpp"
#include "echotrain/cli/svg.hpp"
#include "echotrain/liouville/engine.hpp"

namespace echotrain::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

void write_meta(const fs::path& path, const ExperimentConfig& config,
                const std::string& command) {
  json j;
  j["schema_version"] = 1;
  j["command"] = command;
  j["config_fingerprint"] = config.fingerprint;
  j["created"] = timestamp_utc();
  write_text(path, j.dump(2) + "\n");
}

bool is_ste_family(const ExperimentConfig& config) {
  const std::string& b = config.sequence.builtin;
  return b == "ste" || b == "ste_cpmg1" || b == "ste_cpmg2";
}

core::SampleSpec point_sample(const ExperimentConfig& config,
                              const SweepPoint& pt) {
  core::SampleSpec sample = config.sample;
  sample.b1_sigma = pt.b1_sigma;
  return sample;
}

core::SignalTrace compute_trace(const ExperimentConfig& config,
                                const SweepPoint& pt,
                                const seq::PulseProgram& program,
                                int workers) {
  if (config.engine == "liouville") {
    liouville::ExactEngine engine(config.spin_system);
    return engine.run_program(program);
  }
  const bloch::Ensemble ensemble =
      bloch::build_ensemble(point_sample(config, pt), config.seed);
  bloch::EngineOptions options;
  options.n_workers = workers;
  return bloch::run(program, ensemble, core::GradientSpec{pt.g}, options);
}

std::string traces_csv_text(const core::SignalTrace& trace) {
  std::string out = csv_line({"t", "s_re", "s_im", "s_mag"});
  for (std::size_t i = 0; i < trace.size(); ++i)
    out += csv_line({csv_number(trace.t[i]), csv_number(trace.s[i].real()),
                     csv_number(trace.s[i].imag()),
                     csv_number(std::abs(trace.s[i]))});
  return out;
}

std::string echoes_csv_text(const core::EchoTrain& train) {
  std::string out = csv_line({"echo_index", "t", "amp", "phase"});
  for (const core::EchoEntry& e : train.entries)
    out += csv_line({std::to_string(e.index), csv_number(e.t),
                     csv_number(std::abs(e.amp)),
                     csv_number(std::arg(e.amp))});
  return out;
}

std::vector<std::string> point_prefix(const SweepPoint& pt) {
  return {std::to_string(pt.index), csv_number(pt.tau), csv_number(pt.g),
          csv_number(pt.t1),        csv_number(pt.b1_sigma),
          std::to_string(pt.n)};
}

// One summary row; what it holds depends on the sweep mode.
std::string sweep_row(const ExperimentConfig& config, const SweepPoint& pt,
                      bool ratio_mode) {
  const seq::PulseProgram program = config.make_program(pt);
  const core::SignalTrace trace = compute_trace(config, pt, program, 1);
  std::vector<std::string> fields = point_prefix(pt);
  if (ratio_mode) {
    const analysis::SteHeResult r = analysis::ste_he_ratio(trace, pt.tau, pt.t1);
    fields.push_back(csv_number(r.ste_amp));
    fields.push_back(csv_number(r.he_amp));
    fields.push_back(csv_number(r.ratio));
    fields.push_back(std::to_string(r.phase_sign));
  } else {
    const core::EchoTrain echoes = analysis::echoes_from_trace(program, trace);
    const analysis::FitResult fit =
        analysis::fit_double_exponential(echoes, config.fit.t_short);
    fields.push_back(csv_number(fit.a_s));
    fields.push_back(csv_number(fit.a_l));
    fields.push_back(csv_number(fit.t_l));
    fields.push_back(csv_number(100.0 * fit.tail_fraction()));
    fields.push_back(fit.tail_absent ? "1" : "0");
  }
  return csv_line(fields);
}

std::string point_context(const SweepPoint& pt) {
  std::ostringstream s;
  s << "grid point " << pt.index << " (tau=" << pt.tau << " s, g=" << pt.g
    << " G/cm, t1=" << pt.t1 << " s, b1_sigma=" << pt.b1_sigma
    << ", n=" << pt.n << "): ";
  return s.str();
}

[[noreturn]] void rethrow_with_context(const SweepPoint& pt) {
  const std::string ctx = point_context(pt);
  try {
    throw;
  } catch (const analysis::FitDidNotConverge& e) {
    throw analysis::FitDidNotConverge(ctx + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(ctx + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(ctx + e.what());
  }
}

struct SweepState {
  std::size_t rows_done = 0;
  std::size_t grid_size = 0;
  std::string fingerprint;
};

void save_state(const fs::path& path, const SweepState& st) {
  json j;
  j["schema_version"] = 1;
  j["rows_done"] = st.rows_done;
  j["grid_size"] = st.grid_size;
  j["config_fingerprint"] = st.fingerprint;
  write_text(path, j.dump(2) + "\n");
}

SweepState load_state(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read '" + path.string() + "'");
  json j = json::parse(in, nullptr, true);
  SweepState st;
  st.rows_done = j.at("rows_done").get<std::size_t>();
  st.grid_size = j.at("grid_size").get<std::size_t>();
  st.fingerprint = j.at("config_fingerprint").get<std::string>();
  return st;
}

// Keeps exactly header + rows_done complete lines; drops anything after
// (e.g. a row half-written before an interruption).
std::string truncated_summary(const fs::path& path, std::size_t rows_done,
                              const std::string& header_line) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::size_t pos = 0;
  std::size_t lines = 0;
  while (lines < rows_done + 1) {
    const std::size_t next = text.find("\r\n", pos);
    if (next == std::string::npos)
      throw std::runtime_error("'" + path.string() +
                               "' has fewer rows than sweep_state.json claims");
    pos = next + 2;
    ++lines;
  }
  const std::string kept = text.substr(0, pos);
  if (kept.substr(0, header_line.size()) != header_line)
    throw ConfigError("existing sweep summary has a different layout; "
                      "remove it or use a fresh output directory");
  return kept;
}

}  // namespace

void run_experiment(const ExperimentConfig& config, const RunOverrides& ov,
                    std::ostream& log) {
  const fs::path dir = ov.out_dir.empty() ? config.output.dir : ov.out_dir;
  fs::create_directories(dir);
  const int workers = ov.workers > 0 ? ov.workers : config.workers;

  const seq::PulseProgram program = config.make_program();
  const core::SignalTrace trace =
      compute_trace(config, config.base_point(), program, workers);

  if (config.output.csv) {
    write_text(dir / "traces.csv", traces_csv_text(trace));
    log << "wrote " << (dir / "traces.csv").string() << " (" << trace.size()
        << " samples)\n";
  }
  core::EchoTrain echoes;
  if (program.count(seq::EventKind::Acquire) > 0)
    echoes = analysis::echoes_from_trace(program, trace);
  if (config.output.csv && !echoes.entries.empty()) {
    write_text(dir / "echoes.csv", echoes_csv_text(echoes));
    log << "wrote " << (dir / "echoes.csv").string() << " ("
        << echoes.entries.size() << " echoes)\n";
  }
  if (config.fit.requested && config.output.json) {
    const analysis::FitResult fit =
        analysis::fit_double_exponential(echoes, config.fit.t_short);
    write_text(dir / "fits.json", analysis::fit_result_to_json(fit) + "\n");
    log << "wrote " << (dir / "fits.json").string() << "\n";
  }
  if (config.output.svg) {
    PlotSeries series;
    PlotOptions options;
    if (echoes.entries.size() > 1) {
      series.label = program.meta.builtin.empty() ? "echoes"
                                                  : program.meta.builtin;
      series.markers = true;
      for (const core::EchoEntry& e : echoes.entries)
        series.points.emplace_back(e.t, std::abs(e.amp));
      options = {"Echo decay", "t (s)", "|amplitude|", true};
    } else {
      series.label = "|s|";
      for (std::size_t i = 0; i < trace.size(); ++i)
        series.points.emplace_back(trace.t[i], std::abs(trace.s[i]));
      options = {"Signal", "t (s)", "|s|", false};
    }
    write_line_plot((dir / "decay.svg").string(), {series}, options);
    log << "wrote " << (dir / "decay.svg").string() << "\n";
  }
  write_meta(dir / "run_meta.json", config, "run");
}

void run_sweep(const ExperimentConfig& config, const RunOverrides& ov,
               std::ostream& log) {
  const fs::path dir = ov.out_dir.empty() ? config.output.dir : ov.out_dir;
  fs::create_directories(dir);
  const int workers = ov.workers > 0 ? ov.workers : config.workers;
  const bool ratio_mode = is_ste_family(config);
  if (ratio_mode && !(config.sequence.window > 0.0))
    throw ConfigError(
        "sequence.window: stimulated-echo sweeps need an acquisition window "
        "covering both echoes");
  if (!ratio_mode && !config.fit.requested)
    throw ConfigError("fit: echo-train sweeps need a fit block");

  const std::vector<SweepPoint> grid = sweep_grid(config);
  std::vector<std::string> header = {"point", "tau", "g",
                                     "t1",    "b1_sigma", "n"};
  if (ratio_mode)
    for (const char* c : {"ste_amp", "he_amp", "ratio", "phase_sign"})
      header.push_back(c);
  else
    for (const char* c : {"a_s", "a_l", "t_l", "tail_pct", "tail_absent"})
      header.push_back(c);
  const std::string header_line = csv_line(header);

  const fs::path summary_path = dir / "sweep_summary.csv";
  const fs::path state_path = dir / "sweep_state.json";

  SweepState st;
  st.grid_size = grid.size();
  st.fingerprint = config.fingerprint;
  if (fs::exists(state_path)) {
    const SweepState old = load_state(state_path);
    if (old.fingerprint != st.fingerprint)
      throw ConfigError(
          "sweep_state.json: the config changed since this sweep started; "
          "use a fresh output directory");
    if (old.grid_size != st.grid_size)
      throw ConfigError("sweep_state.json: grid size mismatch");
    st.rows_done = std::min(old.rows_done, st.grid_size);
    write_text(summary_path,
               truncated_summary(summary_path, st.rows_done, header_line));
    log << "resuming sweep at row " << st.rows_done << "/" << st.grid_size
        << "\n";
  } else {
    write_text(summary_path, header_line);
    save_state(state_path, st);
  }

  const std::size_t target =
      ov.limit < 0 ? grid.size()
                   : std::min(grid.size(), static_cast<std::size_t>(ov.limit));

  if (st.rows_done < target) {
    std::ofstream out(summary_path, std::ios::binary | std::ios::app);
    if (!out)
      throw std::runtime_error("cannot append to '" + summary_path.string() +
                               "'");
    const std::size_t first = st.rows_done;
    std::atomic<std::size_t> next_claim{first};
    std::mutex mu;
    std::map<std::size_t, std::string> pending;
    std::size_t next_commit = first;
    std::exception_ptr failure;

    auto work = [&] {
      for (;;) {
        const std::size_t k = next_claim.fetch_add(1);
        if (k >= target) return;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (failure) return;
        }
        std::string row;
        try {
          row = sweep_row(config, grid[k], ratio_mode);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) {
            try {
              rethrow_with_context(grid[k]);
            } catch (...) {
              failure = std::current_exception();
            }
          }
          return;
        }
        std::lock_guard<std::mutex> lock(mu);
        pending.emplace(k, std::move(row));
        for (auto it = pending.find(next_commit); it != pending.end();
             it = pending.find(++next_commit)) {
          out << it->second;
          out.flush();
          pending.erase(it);
          st.rows_done = next_commit + 1;
          save_state(state_path, st);
        }
      }
    };
    const int pool_size = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)),
                              target - first));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(pool_size));
    for (int i = 0; i < pool_size; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  log << "sweep rows: " << st.rows_done << "/" << st.grid_size << "\n";
  if (st.rows_done == st.grid_size) {
    if (config.output.svg)
      plot_csv_file(summary_path.string(), (dir / "sweep_summary.svg").string());
    write_meta(dir / "sweep_meta.json", config, "sweep");
    log << "sweep complete: " << summary_path.string() << "\n";
  } else {
    log << "sweep stopped early (limit); re-run to resume\n";
  }
}

std::string fit_echoes_file(const std::string& echoes_csv, double t_short) {
  const CsvTable table = read_csv(echoes_csv);
  const int it = table.column("t");
  const int iamp = table.column("amp");
  const int iphase = table.column("phase");
  const int iindex = table.column("echo_index");
  if (it < 0 || iamp < 0)
    throw std::invalid_argument(echoes_csv + ": expected columns t and amp");
  core::EchoTrain train;
  int fallback_index = 1;
  for (const auto& row : table.rows) {
    core::EchoEntry e;
    e.index = iindex >= 0
                  ? std::stoi(row[static_cast<std::size_t>(iindex)])
                  : fallback_index;
    ++fallback_index;
    e.t = std::stod(row[static_cast<std::size_t>(it)]);
    const double amp = std::stod(row[static_cast<std::size_t>(iamp)]);
    const double phase =
        iphase >= 0 ? std::stod(row[static_cast<std::size_t>(iphase)]) : 0.0;
    e.amp = std::polar(amp, phase);
    train.entries.push_back(e);
  }
  const analysis::FitResult fit =
      analysis::fit_double_exponential(train, t_short);
  return analysis::fit_result_to_json(fit) + "\n";
}

void plot_csv_file(const std::string& csv_path, const std::string& svg_path) {
  const CsvTable table = read_csv(csv_path);
  auto num = [&](const std::vector<std::string>& row, int col) {
    return std::stod(row[static_cast<std::size_t>(col)]);
  };

  if (table.has_column("ratio") && table.has_column("g")) {
    const int ig = table.column("g");
    const int ir = table.column("ratio");
    PlotSeries data{"STE/HE ratio", {}, true};
    std::vector<std::pair<double, double>> points;
    for (const auto& row : table.rows) {
      points.emplace_back(num(row, ig), num(row, ir));
      data.points.emplace_back(num(row, ig), num(row, ir));
    }
    std::vector<PlotSeries> series{data};
    if (points.size() >= 4) {
      try {
        const analysis::QuadraticFit fit =
            analysis::fit_quadratic_gradient(points);
        PlotSeries overlay{"a*G^2 + b fit", {}, false};
        double g_max = 0.0;
        for (const auto& [g, r] : points) g_max = std::max(g_max, g);
        for (int i = 0; i <= 100; ++i) {
          const double g = g_max * i / 100.0;
          overlay.points.emplace_back(g, fit.a * g * g + fit.b);
        }
        series.push_back(overlay);
      } catch (const analysis::DegenerateDesign&) {
        // Plot the raw points without an overlay.
      }
    }
    write_line_plot(svg_path, series,
                    {"Stimulated/Hahn echo ratio vs gradient", "G (G/cm)",
                     "ratio", false});
    return;
  }
  if (table.has_column("tail_pct")) {
    const int itau = table.column("tau");
    const int ig = table.column("g");
    const int ip = table.column("tail_pct");
    std::map<double, PlotSeries> by_g;
    for (const auto& row : table.rows) {
      const double g = ig >= 0 ? num(row, ig) : 0.0;
      PlotSeries& s = by_g[g];
      if (s.label.empty()) {
        s.label = "G=" + csv_number(g);
        s.markers = true;
      }
      s.points.emplace_back(num(row, itau), num(row, ip));
    }
    std::vector<PlotSeries> series;
    for (auto& [g, s] : by_g) series.push_back(std::move(s));
    write_line_plot(svg_path, series,
                    {"Tail fraction", "tau (s)", "tail (%)", false});
    return;
  }
  if (table.has_column("amp") && table.has_column("t")) {
    const int it = table.column("t");
    const int ia = table.column("amp");
    PlotSeries s{"|amplitude|", {}, true};
    for (const auto& row : table.rows)
      s.points.emplace_back(num(row, it), num(row, ia));
    write_line_plot(svg_path, {s}, {"Echo decay", "t (s)", "|amplitude|", true});
    return;
  }
  if (table.has_column("s_mag") && table.has_column("t")) {
    const int it = table.column("t");
    const int im = table.column("s_mag");
    PlotSeries s{"|s|", {}, false};
    for (const auto& row : table.rows)
      s.points.emplace_back(num(row, it), num(row, im));
    write_line_plot(svg_path, {s}, {"Signal", "t (s)", "|s|", false});
    return;
  }
  throw std::invalid_argument(csv_path +
                              ": unrecognized CSV layout for plotting");
}

}  // namespace echotrain::cli
