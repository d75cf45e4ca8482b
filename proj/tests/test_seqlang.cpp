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

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "echotrain/seq/builtins.hpp"
#include "echotrain/seq/errors.hpp"
#include "echotrain/seq/parser.hpp"
#include "echotrain/seq/program.hpp"
#include "echotrain/seq/units.hpp"

using namespace echotrain::seq;

namespace {

std::vector<const PulseEvent*> pulses_of(const PulseProgram& p,
                                         double angle_deg) {
  std::vector<const PulseEvent*> out;
  for (const auto& e : p.events)
    if (e.kind == EventKind::RfPulse && e.angle_deg == angle_deg)
      out.push_back(&e);
  return out;
}

BuiltinParams params(double tau, double t1 = 0.0, int n = 1,
                     double window = 0.0, double dwell = 0.0) {
  BuiltinParams p;
  p.tau = tau;
  p.t1 = t1;
  p.n = n;
  p.window = window;
  p.dwell = dwell;
  return p;
}

}  // namespace

TEST_CASE("parse: five-event program") {
  const PulseProgram p =
      parse_program("p(90,x) d(1ms) p(180,y) d(1ms) acq(2ms,10us)");
  REQUIRE(p.events.size() == 5);
  CHECK(p.total_duration == doctest::Approx(4e-3).epsilon(1e-12));

  CHECK(p.events[0].kind == EventKind::RfPulse);
  CHECK(p.events[0].angle_deg == 90.0);
  CHECK(p.events[0].phase_deg == 0.0);
  CHECK(p.events[0].start == 0.0);
  CHECK(p.events[0].duration == 0.0);

  CHECK(p.events[2].kind == EventKind::RfPulse);
  CHECK(p.events[2].start == doctest::Approx(1e-3));
  CHECK(p.events[2].angle_deg == 180.0);
  CHECK(p.events[2].phase_deg == 90.0);

  CHECK(p.events[4].kind == EventKind::Acquire);
  CHECK(p.events[4].duration == doctest::Approx(2e-3));
  CHECK(p.events[4].dwell == doctest::Approx(1e-5));
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("parse: phase lists cycle with the block iteration") {
  const PulseProgram p = parse_program(
      "p(90,x) [ d(1ms) p(180,{y,-y}) d(1ms) acq(10us,1us) ]*4");
  CHECK(p.events.size() == 17);
  const auto pis = pulses_of(p, 180.0);
  REQUIRE(pis.size() == 4);
  CHECK(pis[0]->phase_deg == 90.0);
  CHECK(pis[1]->phase_deg == 270.0);
  CHECK(pis[2]->phase_deg == 90.0);
  CHECK(pis[3]->phase_deg == 270.0);
  CHECK(p.count(EventKind::Acquire) == 4);
  // Each iteration spans 1ms + 1ms + 10us.
  CHECK(p.total_duration == doctest::Approx(4 * 2.01e-3).epsilon(1e-12));
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("parse: numeric phases and comments") {
  const PulseProgram p = parse_program(
      "# quarter-turn about a 45-degree axis\n"
      "p(90,45) d(100us) acq()");
  REQUIRE(p.events.size() == 3);
  CHECK(p.events[0].phase_deg == 45.0);
  CHECK(p.events[2].kind == EventKind::Acquire);
  CHECK(p.events[2].duration == 0.0);
}

TEST_CASE("parse: error contracts") {
  CHECK_THROWS_AS(parse_program("p(90,x) d(-1ms)"), ValidationError);
  CHECK_THROWS_AS(parse_program("p(90,q)"), UnknownPhaseError);
  CHECK_THROWS_AS(parse_program("p(90 x)"), SyntaxError);
  CHECK_THROWS_AS(parse_program("[ d(1ms) ]*0"), ValidationError);

  // Positions are 1-based line:col.
  try {
    parse_program("p(90,x)\n  d(oops)");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 2);
    CHECK(e.col >= 3);
  }
}

TEST_CASE("builtin: cpmg4 phase pattern") {
  const PulseProgram p = make_builtin("cpmg4", params(1e-3, 0.0, 2));
  const auto pis = pulses_of(p, 180.0);
  REQUIRE(pis.size() == 8);
  const double want[] = {90, 90, 270, 270, 90, 90, 270, 270};
  for (int i = 0; i < 8; ++i) CHECK(pis[i]->phase_deg == want[i]);
  CHECK(p.count(EventKind::Acquire) == 8);
  CHECK(p.meta.builtin == "cpmg4");
  CHECK(p.meta.cycle_length == 4);
  CHECK(p.meta.tau == 1e-3);
}

TEST_CASE("builtin: ste pulse times") {
  const PulseProgram p = make_builtin("ste", params(0.5e-3, 8e-3));
  const auto ninety = pulses_of(p, 90.0);
  REQUIRE(ninety.size() == 3);
  CHECK(ninety[0]->start == 0.0);
  CHECK(ninety[1]->start == doctest::Approx(0.5e-3).epsilon(1e-12));
  CHECK(ninety[2]->start == doctest::Approx(8.5e-3).epsilon(1e-12));
  CHECK(ninety[1]->phase_deg == 90.0);
  CHECK(ninety[2]->phase_deg == 90.0);
  // Point acquisition sits on the stimulated echo top, tau after the
  // last pulse.
  const auto& acq = p.events.back();
  CHECK(acq.kind == EventKind::Acquire);
  CHECK(acq.start == doctest::Approx(9e-3).epsilon(1e-12));

  // The pi-refocused variants differ only in angle and third phase.
  const PulseProgram c2 = make_builtin("ste_cpmg2", params(0.5e-3, 8e-3));
  const auto pis = pulses_of(c2, 180.0);
  REQUIRE(pis.size() == 2);
  CHECK(pis[0]->phase_deg == 90.0);
  CHECK(pis[1]->phase_deg == 270.0);
}

TEST_CASE("builtin: hahn echo event list") {
  const PulseProgram p = make_builtin("he", params(1e-3));
  REQUIRE(p.events.size() == 5);
  CHECK(p.events[0].angle_deg == 90.0);
  CHECK(p.events[2].angle_deg == 180.0);
  CHECK(p.events[2].phase_deg == 0.0);
  CHECK(p.events[2].start == doctest::Approx(1e-3));
  CHECK(p.events[4].kind == EventKind::Acquire);
  CHECK(p.events[4].start == doctest::Approx(2e-3));
  CHECK(p.total_duration == doctest::Approx(2e-3));
}

TEST_CASE("builtins round-trip through the canonical text") {
  for (const std::string& name : builtin_names()) {
    CAPTURE(name);
    for (const BuiltinParams& p :
         {params(1e-3, 8e-3, 3), params(2.5e-4, 1.5e-3, 2, 1e-4, 1e-5)}) {
      const PulseProgram prog = make_builtin(name, p);
      CHECK_NOTHROW(prog.validate());
      const PulseProgram again = parse_program(prog.to_text());
      CHECK(prog.same_events(again));
      // The printer is canonical: printing the reparse changes nothing.
      CHECK(again.to_text() == prog.to_text());
    }
  }
}

TEST_CASE("builtin trains: pi pulses sit exactly 2 tau apart") {
  const double tau = 2.5e-4;
  for (const char* name : {"cp1", "cp2", "cpmg1", "cpmg2", "cpmg4"}) {
    CAPTURE(name);
    const PulseProgram p = make_builtin(name, params(tau, 0.0, 3));
    const auto pis = pulses_of(p, 180.0);
    REQUIRE(pis.size() >= 3);
    CHECK(pis[0]->start == doctest::Approx(tau).epsilon(1e-12));
    for (std::size_t k = 1; k < pis.size(); ++k)
      CHECK(pis[k]->start - pis[k - 1]->start ==
            doctest::Approx(2 * tau).epsilon(1e-12));
    CHECK(p.count(EventKind::Acquire) == pis.size());
  }

  // CPMG2 with n cycles: exactly 2n pi pulses, strictly alternating.
  const PulseProgram p = make_builtin("cpmg2", params(tau, 0.0, 5));
  const auto pis = pulses_of(p, 180.0);
  REQUIRE(pis.size() == 10);
  for (std::size_t k = 0; k < pis.size(); ++k)
    CHECK(pis[k]->phase_deg == (k % 2 == 0 ? 90.0 : 270.0));
}

TEST_CASE("windowed acquisition is centered on the echo top") {
  const double tau = 2e-4;
  const PulseProgram p = make_builtin("cpmg1", params(tau, 0.0, 4, 1e-4, 1e-5));
  const auto windows = acquire_windows(p);
  REQUIRE(windows.size() == 4);
  for (std::size_t k = 0; k < windows.size(); ++k) {
    const AcquireWindow& w = windows[k];
    CHECK(w.n_samples == 11);
    CHECK(w.dwell == doctest::Approx(1e-5));
    // Echo tops at 2 tau (k+1) after the first pulse.
    CHECK(w.t_center ==
          doctest::Approx(2 * tau * double(k + 1)).epsilon(1e-9));
    CHECK(w.center_sample == w.first_sample + 5);
  }
  CHECK(total_samples(p) == 44);

  // Point acquisition: one sample, zero-width window.
  const PulseProgram q = make_builtin("cpmg1", params(tau, 0.0, 4));
  for (const AcquireWindow& w : acquire_windows(q)) {
    CHECK(w.n_samples == 1);
    CHECK(w.t_center == w.t_start);
  }
  CHECK(total_samples(q) == 4);
}

TEST_CASE("durations: parse, format, round-trip") {
  CHECK(parse_duration("200us") == doctest::Approx(2e-4).epsilon(1e-15));
  CHECK(parse_duration("1.5ms") == 1.5e-3);
  CHECK(parse_duration("2s") == 2.0);
  CHECK(parse_duration("0s") == 0.0);

  // 200 * 1e-6 != 2e-4 in doubles, so the formatter falls through to ms,
  // where 0.2 * 1e-3 is exact.
  CHECK(format_duration(2e-4) == "0.2ms");
  CHECK(format_duration(1.5e-3) == "1.5ms");
  CHECK(format_duration(1e-6) == "1us");
  CHECK(format_duration(2.0) == "2s");

  for (double v : {1e-3, 2.34e-5, 0.15, 7e-7, 1.8e-3, 0.3141592653589793,
                   4.9999999999e-4}) {
    CHECK(parse_duration(format_duration(v)) == v);
  }

  for (const char* bad : {"", "12", "3kg", "ms", "1.5.2ms"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_duration(bad), std::invalid_argument);
  }

  // format_double emits the shortest exact decimal.
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(3.0) == "3");
  CHECK(std::strtod(format_double(M_PI).c_str(), nullptr) == M_PI);
}

TEST_CASE("program validation catches broken timelines") {
  PulseProgram p = make_builtin("he", params(1e-3));

  SUBCASE("negative duration") {
    p.events[1].duration = -1e-3;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("overlapping events") {
    p.events[2].start = 0.5e-3;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("pulse with nonzero duration") {
    p.events[0].duration = 1e-6;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("phase outside [0, 360)") {
    p.events[0].phase_deg = 360.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("window without dwell") {
    p.events[4].duration = 1e-4;
    p.events[4].dwell = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("total_duration mismatch") {
    p.total_duration += 1e-3;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
}

TEST_CASE("builtin parameter validation") {
  CHECK_THROWS_AS(make_builtin("cpmg3", params(1e-3)), UnknownBuiltin);
  CHECK_THROWS_AS(make_builtin("cpmg1", params(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(make_builtin("cpmg1", params(1e-3, 0.0, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_builtin("cpmg1", params(1e-3, 0.0, 1, 1e-4, 0.0)),
                  std::invalid_argument);
  // Window wider than the echo spacing cannot be centered.
  CHECK_THROWS_AS(make_builtin("cpmg1", params(1e-4, 0.0, 1, 3e-4, 1e-5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_builtin("ste", params(1e-3, -1e-3)),
                  std::invalid_argument);
  // Names are case-insensitive.
  CHECK(make_builtin("CPMG4", params(1e-3)).meta.builtin == "cpmg4");
}
