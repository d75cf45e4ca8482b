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
#include "echotrain/seq/builtins.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "echotrain/seq/errors.hpp"
#include "echotrain/seq/parser.hpp"
#include "echotrain/seq/units.hpp"

namespace echotrain::seq {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

void check_common(const std::string& name, const BuiltinParams& p) {
  if (!(p.tau > 0.0))
    throw std::invalid_argument(name + ": tau must be > 0");
  if (p.n < 1) throw std::invalid_argument(name + ": n must be >= 1");
  if (p.window < 0.0)
    throw std::invalid_argument(name + ": window must be >= 0");
  if (p.window > 0.0 && !(p.dwell > 0.0))
    throw std::invalid_argument(name + ": window needs dwell > 0");
}

// One echo period: the pi pulse sits tau before the echo top and the
// acquisition is centered on the top, so the period closes tau - w/2
// after the window and the next pi lands exactly 2 tau later.
std::string echo_period(const std::string& phases, double tau,
                        const BuiltinParams& p) {
  const double half_gap = tau - 0.5 * p.window;
  if (half_gap < 0.0)
    throw std::invalid_argument("window exceeds the echo spacing 2*tau");
  std::ostringstream out;
  out << "p(180," << phases << ") d(" << format_duration(half_gap) << ") ";
  if (p.window > 0.0)
    out << "acq(" << format_duration(p.window) << ','
        << format_duration(p.dwell) << ')';
  else
    out << "acq()";
  out << " d(" << format_duration(half_gap) << ')';
  return out.str();
}

std::string train_source(const std::string& phases, int cycle_length,
                         const BuiltinParams& p) {
  std::ostringstream out;
  out << "p(90,x) d(" << format_duration(p.tau) << ") [ "
      << echo_period(phases, p.tau, p) << " ]*" << p.n * cycle_length;
  return out.str();
}

// Single echo, no trailing delay: (pi/2)x - tau - (pi)x - tau - echo.
std::string he_source(const BuiltinParams& p) {
  const double half_gap = p.tau - 0.5 * p.window;
  if (half_gap < 0.0)
    throw std::invalid_argument("window exceeds the echo spacing 2*tau");
  std::ostringstream out;
  out << "p(90,x) d(" << format_duration(p.tau) << ") p(180,x) d("
      << format_duration(half_gap) << ") ";
  if (p.window > 0.0)
    out << "acq(" << format_duration(p.window) << ','
        << format_duration(p.dwell) << ')';
  else
    out << "acq()";
  return out.str();
}

std::string ste_source(const std::string& kind, const BuiltinParams& p) {
  if (p.t1 < 0.0) throw std::invalid_argument(kind + ": t1 must be >= 0");
  std::string refocus_angle = "90", phase2 = "y", phase3 = "y";
  if (kind == "ste_cpmg1") {
    refocus_angle = "180";
  } else if (kind == "ste_cpmg2") {
    refocus_angle = "180";
    phase3 = "-y";
  }
  std::ostringstream out;
  out << "p(90,x) d(" << format_duration(p.tau) << ") p(" << refocus_angle
      << ',' << phase2 << ") d(" << format_duration(p.t1) << ") p("
      << refocus_angle << ',' << phase3 << ") ";
  if (p.window > 0.0)
    out << "acq(" << format_duration(p.window) << ','
        << format_duration(p.dwell) << ')';
  else
    out << "d(" << format_duration(p.tau) << ") acq()";
  return out.str();
}

}  // namespace

PulseProgram make_builtin(const std::string& name, const BuiltinParams& p) {
  const std::string id = lower(name);
  check_common(id, p);
  std::string source;
  int cycle_length = 1;
  if (id == "he") {
    source = he_source(p);
  } else if (id == "cp1") {
    source = train_source("x", 1, p);
  } else if (id == "cp2") {
    cycle_length = 2;
    source = train_source("{x,-x}", cycle_length, p);
  } else if (id == "cpmg1") {
    source = train_source("y", 1, p);
  } else if (id == "cpmg2") {
    cycle_length = 2;
    source = train_source("{y,-y}", cycle_length, p);
  } else if (id == "cpmg4") {
    cycle_length = 4;
    source = train_source("{y,y,-y,-y}", cycle_length, p);
  } else if (id == "ste" || id == "ste_cpmg1" || id == "ste_cpmg2") {
    source = ste_source(id, p);
  } else {
    throw UnknownBuiltin(name);
  }
  PulseProgram prog = parse_program(source);
  prog.meta.builtin = id;
  prog.meta.cycle_length = cycle_length;
  prog.meta.tau = p.tau;
  prog.meta.t1_delay = p.t1;
  return prog;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {
      "he",    "ste",   "cp1",       "cp2",      "cpmg1",
      "cpmg2", "cpmg4", "ste_cpmg1", "ste_cpmg2"};
  return names;
}

}  // namespace echotrain::seq
