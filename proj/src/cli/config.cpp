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
#include "echotrain/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "echotrain/seq/builtins.hpp"
#include "echotrain/seq/errors.hpp"
#include "echotrain/seq/parser.hpp"
#include "echotrain/seq/units.hpp"

namespace echotrain::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void expect_keys(const json& j, const std::string& path,
                 const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key,
                                  "unknown field");
  }
}

const json* find(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::int64_t get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

// Durations: a unit string ("200us", "1.8ms", "inf") or a number in
// seconds, per the pulse-program unit rules.
double get_duration(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string text = j.get<std::string>();
    if (text == "inf" || text == "infinity") return core::kInfiniteTime;
    try {
      return seq::parse_duration(text);
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected a duration (unit string or seconds)");
}

std::vector<double> get_duration_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_duration(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> get_number_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

core::OffsetDistribution parse_offsets(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  expect_keys(j, path, {"kind", "param"});
  const json* kind = find(j, "kind");
  if (!kind) fail(path + ".kind", "missing");
  const std::string name = get_string(*kind, path + ".kind");
  const json* param = find(j, "param");
  const double p = param ? get_number(*param, path + ".param") : 0.0;
  if (name == "delta") return core::OffsetDistribution::delta(p);
  if (name == "uniform") return core::OffsetDistribution::uniform(p);
  if (name == "gaussian") return core::OffsetDistribution::gaussian(p);
  if (name == "lorentzian") return core::OffsetDistribution::lorentzian(p);
  fail(path + ".kind", "unknown distribution '" + name + "'");
}

core::SampleSpec parse_sample(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  expect_keys(j, path,
              {"n_isochromats", "offsets", "z_min", "z_max", "b1_profile",
               "b1_sigma", "t1", "t2", "gamma"});
  core::SampleSpec spec;
  if (const json* v = find(j, "n_isochromats")) {
    const std::int64_t n = get_integer(*v, path + ".n_isochromats");
    if (n < 1) fail(path + ".n_isochromats", "must be >= 1");
    spec.n_isochromats = static_cast<std::size_t>(n);
  }
  if (const json* v = find(j, "offsets"))
    spec.offsets = parse_offsets(*v, path + ".offsets");
  if (const json* v = find(j, "z_min"))
    spec.z_min = get_number(*v, path + ".z_min");
  if (const json* v = find(j, "z_max"))
    spec.z_max = get_number(*v, path + ".z_max");
  if (const json* v = find(j, "b1_profile"))
    spec.b1_profile = get_number_list(*v, path + ".b1_profile");
  if (const json* v = find(j, "b1_sigma"))
    spec.b1_sigma = get_number(*v, path + ".b1_sigma");
  if (const json* v = find(j, "t1")) spec.t1 = get_duration(*v, path + ".t1");
  if (const json* v = find(j, "t2")) spec.t2 = get_duration(*v, path + ".t2");
  if (const json* v = find(j, "gamma"))
    spec.gamma = get_number(*v, path + ".gamma");
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return spec;
}

SequenceConfig parse_sequence(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  expect_keys(j, path, {"builtin", "source", "tau", "t1", "n", "window",
                        "dwell"});
  SequenceConfig seq_cfg;
  const json* builtin = find(j, "builtin");
  const json* source = find(j, "source");
  if (!!builtin == !!source)
    fail(path, "exactly one of 'builtin' or 'source' is required");
  if (source) {
    seq_cfg.source = get_string(*source, path + ".source");
    return seq_cfg;
  }
  seq_cfg.builtin = get_string(*builtin, path + ".builtin");
  bool known = false;
  for (const std::string& name : seq::builtin_names())
    known = known || name == seq_cfg.builtin;
  if (!known) fail(path + ".builtin", "unknown sequence '" + seq_cfg.builtin +
                                          "'");
  const json* tau = find(j, "tau");
  if (!tau) fail(path + ".tau", "missing (required for builtins)");
  seq_cfg.tau = get_duration(*tau, path + ".tau");
  if (const json* v = find(j, "t1")) seq_cfg.t1 = get_duration(*v, path + ".t1");
  if (const json* v = find(j, "n")) {
    const std::int64_t n = get_integer(*v, path + ".n");
    if (n < 1) fail(path + ".n", "must be >= 1");
    seq_cfg.n = static_cast<int>(n);
  }
  if (const json* v = find(j, "window"))
    seq_cfg.window = get_duration(*v, path + ".window");
  if (const json* v = find(j, "dwell"))
    seq_cfg.dwell = get_duration(*v, path + ".dwell");
  return seq_cfg;
}

liouville::SpinSystem parse_spin_system(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  expect_keys(j, path, {"offsets", "couplings", "d_uniform", "flip_scales"});
  const json* offsets = find(j, "offsets");
  if (!offsets) fail(path + ".offsets", "missing");
  const std::vector<double> dw = get_number_list(*offsets, path + ".offsets");
  const int n = static_cast<int>(dw.size());
  if (n > liouville::kMaxSpins) fail(path + ".offsets", "too many spins");
  liouville::SpinSystem sys = liouville::SpinSystem::make(n);
  for (int i = 0; i < n; ++i) sys.offsets[i] = dw[static_cast<std::size_t>(i)];
  const json* couplings = find(j, "couplings");
  const json* d_uniform = find(j, "d_uniform");
  if (couplings && d_uniform)
    fail(path, "give either 'couplings' or 'd_uniform', not both");
  if (couplings) {
    const std::string cpath = path + ".couplings";
    if (!couplings->is_array() || static_cast<int>(couplings->size()) != n)
      fail(cpath, "expected an n x n matrix");
    for (int r = 0; r < n; ++r) {
      const std::vector<double> row = get_number_list(
          (*couplings)[static_cast<std::size_t>(r)],
          cpath + "[" + std::to_string(r) + "]");
      if (static_cast<int>(row.size()) != n)
        fail(cpath + "[" + std::to_string(r) + "]", "expected n entries");
      for (int c = 0; c < n; ++c)
        sys.couplings(r, c) = row[static_cast<std::size_t>(c)];
    }
  } else if (d_uniform) {
    const double d = get_number(*d_uniform, path + ".d_uniform");
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (r != c) sys.couplings(r, c) = d;
  }
  if (const json* v = find(j, "flip_scales")) {
    const std::vector<double> fs = get_number_list(*v, path + ".flip_scales");
    if (static_cast<int>(fs.size()) != n)
      fail(path + ".flip_scales", "expected one entry per spin");
    for (int i = 0; i < n; ++i)
      sys.flip_scales[i] = fs[static_cast<std::size_t>(i)];
  }
  try {
    sys.validate();
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  return sys;
}

SweepAxes parse_sweep(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  expect_keys(j, path, {"tau", "g", "t1", "b1_sigma", "n"});
  SweepAxes axes;
  if (const json* v = find(j, "tau"))
    axes.tau = get_duration_list(*v, path + ".tau");
  if (const json* v = find(j, "g")) axes.g = get_number_list(*v, path + ".g");
  if (const json* v = find(j, "t1"))
    axes.t1 = get_duration_list(*v, path + ".t1");
  if (const json* v = find(j, "b1_sigma"))
    axes.b1_sigma = get_number_list(*v, path + ".b1_sigma");
  if (const json* v = find(j, "n")) {
    if (!v->is_array() || v->empty()) fail(path + ".n", "expected a non-empty array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::int64_t n =
          get_integer((*v)[i], path + ".n[" + std::to_string(i) + "]");
      if (n < 1) fail(path + ".n[" + std::to_string(i) + "]", "must be >= 1");
      axes.n.push_back(static_cast<int>(n));
    }
  }
  if (axes.empty()) fail(path, "sweep needs at least one non-empty axis");
  return axes;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

seq::PulseProgram ExperimentConfig::make_program() const {
  return make_program(base_point());
}

seq::PulseProgram ExperimentConfig::make_program(const SweepPoint& pt) const {
  if (!sequence.source.empty()) return seq::parse_program(sequence.source);
  seq::BuiltinParams params;
  params.tau = pt.tau;
  params.t1 = pt.t1;
  params.n = pt.n;
  params.window = sequence.window;
  params.dwell = sequence.dwell;
  return seq::make_builtin(sequence.builtin, params);
}

SweepPoint ExperimentConfig::base_point() const {
  SweepPoint pt;
  pt.tau = sequence.tau;
  pt.t1 = sequence.t1;
  pt.g = gradient.g;
  pt.b1_sigma = sample.b1_sigma;
  pt.n = sequence.n;
  return pt;
}

std::vector<SweepPoint> sweep_grid(const ExperimentConfig& config) {
  const SweepPoint base = config.base_point();
  const auto& ax = config.sweep;
  const std::vector<double> taus = ax.tau.empty() ? std::vector<double>{base.tau} : ax.tau;
  const std::vector<double> gs = ax.g.empty() ? std::vector<double>{base.g} : ax.g;
  const std::vector<double> t1s = ax.t1.empty() ? std::vector<double>{base.t1} : ax.t1;
  const std::vector<double> sigmas =
      ax.b1_sigma.empty() ? std::vector<double>{base.b1_sigma} : ax.b1_sigma;
  const std::vector<int> ns = ax.n.empty() ? std::vector<int>{base.n} : ax.n;
  std::vector<SweepPoint> grid;
  std::size_t index = 0;
  for (double tau : taus)
    for (double g : gs)
      for (double t1 : t1s)
        for (double sigma : sigmas)
          for (int n : ns)
            grid.push_back({index++, tau, g, t1, sigma, n});
  return grid;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");
  expect_keys(j, "",
              {"schema_version", "seed", "engine", "workers", "sample",
               "gradient", "sequence", "spin_system", "sweep", "fit",
               "output"});
  ExperimentConfig cfg;
  if (const json* v = find(j, "schema_version")) {
    if (get_integer(*v, "schema_version") != 1)
      fail("schema_version", "unsupported (expected 1)");
  }
  if (const json* v = find(j, "seed")) {
    const std::int64_t s = get_integer(*v, "seed");
    if (s < 0) fail("seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (const json* v = find(j, "engine")) {
    cfg.engine = get_string(*v, "engine");
    if (cfg.engine != "bloch" && cfg.engine != "liouville")
      fail("engine", "expected 'bloch' or 'liouville'");
  }
  if (const json* v = find(j, "workers")) {
    const std::int64_t w = get_integer(*v, "workers");
    if (w < 1) fail("workers", "must be >= 1");
    cfg.workers = static_cast<int>(w);
  }
  if (const json* v = find(j, "sample"))
    cfg.sample = parse_sample(*v, "sample");
  if (const json* v = find(j, "gradient")) {
    cfg.gradient.g = get_number(*v, "gradient");
    try {
      cfg.gradient.validate();
    } catch (const std::invalid_argument& e) {
      fail("gradient", e.what());
    }
  }
  const json* sequence = find(j, "sequence");
  if (!sequence) fail("sequence", "missing");
  cfg.sequence = parse_sequence(*sequence, "sequence");
  if (const json* v = find(j, "spin_system")) {
    cfg.spin_system = parse_spin_system(*v, "spin_system");
    cfg.has_spin_system = true;
  }
  if (cfg.engine == "liouville" && !cfg.has_spin_system)
    fail("spin_system", "required when engine is 'liouville'");
  if (const json* v = find(j, "sweep")) cfg.sweep = parse_sweep(*v, "sweep");
  if (const json* v = find(j, "fit")) {
    if (!v->is_object()) fail("fit", "expected an object");
    expect_keys(*v, "fit", {"t_short"});
    cfg.fit.requested = true;
    if (const json* ts = find(*v, "t_short"))
      cfg.fit.t_short = get_duration(*ts, "fit.t_short");
    else if (std::isfinite(cfg.sample.t2))
      cfg.fit.t_short = cfg.sample.t2;  // short component decays with T2
    else
      fail("fit.t_short", "required when sample.t2 is infinite");
    if (!(cfg.fit.t_short > 0.0) || !std::isfinite(cfg.fit.t_short))
      fail("fit.t_short", "must be positive and finite");
  }
  if (const json* v = find(j, "output")) {
    if (!v->is_object()) fail("output", "expected an object");
    expect_keys(*v, "output", {"dir", "formats"});
    if (const json* d = find(*v, "dir"))
      cfg.output.dir = get_string(*d, "output.dir");
    if (const json* f = find(*v, "formats")) {
      if (!f->is_array()) fail("output.formats", "expected an array");
      cfg.output.csv = cfg.output.json = cfg.output.svg = false;
      for (std::size_t i = 0; i < f->size(); ++i) {
        const std::string fmt =
            get_string((*f)[i], "output.formats[" + std::to_string(i) + "]");
        if (fmt == "csv")
          cfg.output.csv = true;
        else if (fmt == "json")
          cfg.output.json = true;
        else if (fmt == "svg")
          cfg.output.svg = true;
        else
          fail("output.formats[" + std::to_string(i) + "]",
               "unknown format '" + fmt + "'");
      }
    }
  }
  // Sweeping sequence parameters needs a parameterized sequence.
  if (!cfg.sequence.source.empty() &&
      !(cfg.sweep.tau.empty() && cfg.sweep.t1.empty() && cfg.sweep.n.empty()))
    fail("sweep", "tau/t1/n axes require a builtin sequence");
  if (cfg.engine == "liouville" &&
      !(cfg.sweep.g.empty() && cfg.sweep.b1_sigma.empty()))
    fail("sweep", "g/b1_sigma axes only apply to the bloch engine");
  // Validate the base program early so errors carry the config path.
  try {
    (void)cfg.make_program();
    for (const SweepPoint& pt : sweep_grid(cfg)) (void)cfg.make_program(pt);
  } catch (const std::exception& e) {
    fail("sequence", e.what());
  }
  std::ostringstream canon;
  canon << j;  // nlohmann objects iterate in sorted key order
  cfg.fingerprint = std::to_string(fnv1a(canon.str()));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace echotrain::cli
