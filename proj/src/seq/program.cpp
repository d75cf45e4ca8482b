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
#include "echotrain/seq/program.hpp"

#include <cmath>
#include <sstream>

#include "echotrain/seq/errors.hpp"
#include "echotrain/seq/units.hpp"

namespace echotrain::seq {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
// Start times are accumulated sums of parsed durations; allow a few ulps
// of slack before calling the timeline inconsistent.
constexpr double kTimeSlack = 1e-12;
}  // namespace

double PulseEvent::angle_rad() const { return angle_deg * kDegToRad; }
double PulseEvent::phase_rad() const { return phase_deg * kDegToRad; }

bool operator==(const PulseEvent& a, const PulseEvent& b) {
  return a.kind == b.kind && a.start == b.start && a.duration == b.duration &&
         a.angle_deg == b.angle_deg && a.phase_deg == b.phase_deg &&
         a.dwell == b.dwell;
}

std::size_t PulseProgram::count(EventKind kind) const {
  std::size_t n = 0;
  for (const auto& e : events)
    if (e.kind == kind) ++n;
  return n;
}

void PulseProgram::validate() const {
  double cursor = 0.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const PulseEvent& e = events[i];
    const std::string at = "event " + std::to_string(i) + ": ";
    if (!std::isfinite(e.start) || !std::isfinite(e.duration))
      throw ValidationError(at + "non-finite time");
    if (e.duration < 0.0)
      throw ValidationError(at + "negative duration " +
                            format_double(e.duration) + " s");
    if (std::abs(e.start - cursor) > kTimeSlack * (1.0 + std::abs(cursor)))
      throw ValidationError(at + "start " + format_double(e.start) +
                            " s overlaps or skips the previous event ending at " +
                            format_double(cursor) + " s");
    switch (e.kind) {
      case EventKind::RfPulse:
        if (e.duration != 0.0)
          throw ValidationError(at + "pulses are instantaneous");
        if (!std::isfinite(e.angle_deg) || !std::isfinite(e.phase_deg))
          throw ValidationError(at + "non-finite pulse parameters");
        if (e.phase_deg < 0.0 || e.phase_deg >= 360.0)
          throw ValidationError(at + "phase " + format_double(e.phase_deg) +
                                " outside [0, 360)");
        break;
      case EventKind::Delay:
        if (e.dwell != 0.0)
          throw ValidationError(at + "delay with dwell");
        break;
      case EventKind::Acquire:
        if (e.duration > 0.0 && e.dwell <= 0.0)
          throw ValidationError(at + "acquisition window needs dwell > 0");
        if (e.dwell < 0.0)
          throw ValidationError(at + "negative dwell");
        break;
    }
    cursor = e.start + e.duration;
  }
  if (std::abs(total_duration - cursor) > kTimeSlack * (1.0 + std::abs(cursor)))
    throw ValidationError("total_duration " + format_double(total_duration) +
                          " s does not match the timeline end " +
                          format_double(cursor) + " s");
}

namespace {
// The four cardinal axes print by name; parsing maps the names back to
// exactly these values, so the round-trip stays bit-exact.
std::string phase_text(double phase_deg) {
  if (phase_deg == 0.0) return "x";
  if (phase_deg == 90.0) return "y";
  if (phase_deg == 180.0) return "-x";
  if (phase_deg == 270.0) return "-y";
  return format_double(phase_deg);
}
}  // namespace

std::string PulseProgram::to_text() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& e : events) {
    if (!first) out << ' ';
    first = false;
    switch (e.kind) {
      case EventKind::RfPulse:
        out << "p(" << format_double(e.angle_deg) << ',' << phase_text(e.phase_deg)
            << ')';
        break;
      case EventKind::Delay:
        out << "d(" << format_duration(e.duration) << ')';
        break;
      case EventKind::Acquire:
        if (e.duration == 0.0)
          out << "acq()";
        else
          out << "acq(" << format_duration(e.duration) << ','
              << format_duration(e.dwell) << ')';
        break;
    }
  }
  return out.str();
}

bool PulseProgram::same_events(const PulseProgram& other) const {
  return events == other.events;
}

std::vector<AcquireWindow> acquire_windows(const PulseProgram& program) {
  std::vector<AcquireWindow> out;
  std::size_t slot = 0;
  for (std::size_t ei = 0; ei < program.events.size(); ++ei) {
    const PulseEvent& e = program.events[ei];
    if (e.kind != EventKind::Acquire) continue;
    AcquireWindow w;
    w.event_index = ei;
    w.first_sample = slot;
    w.t_start = e.start;
    if (e.duration > 0.0) {
      // The 1e-9 absorbs representation error in ratios exact in intent.
      const int k = static_cast<int>(std::floor(e.duration / e.dwell + 1e-9));
      w.n_samples = k + 1;
      w.dwell = e.dwell;
      w.remainder = e.duration - k * e.dwell;
      if (w.remainder < 1e-9 * e.dwell) w.remainder = 0.0;
    }
    const int half = w.n_samples / 2;
    w.center_sample = w.first_sample + static_cast<std::size_t>(half);
    w.t_center = e.start + half * w.dwell;
    slot += static_cast<std::size_t>(w.n_samples);
    out.push_back(w);
  }
  return out;
}

std::size_t total_samples(const PulseProgram& program) {
  std::size_t n = 0;
  for (const AcquireWindow& w : acquire_windows(program))
    n += static_cast<std::size_t>(w.n_samples);
  return n;
}

}  // namespace echotrain::seq
