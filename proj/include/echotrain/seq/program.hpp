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

#include <string>
#include <vector>

namespace echotrain::seq {

enum class EventKind { RfPulse, Delay, Acquire };

// One entry on the expanded timeline.  Pulses are instantaneous rotations;
// only delays and acquisitions advance the clock.  Angles are kept in
// degrees exactly as written so the canonical printer round-trips.
struct PulseEvent {
  EventKind kind = EventKind::Delay;
  double start = 0.0;      // s, from program start
  double duration = 0.0;   // s; zero for pulses and point acquisitions
  double angle_deg = 0.0;  // nominal flip angle (RfPulse)
  double phase_deg = 0.0;  // rotation-axis phase in [0, 360) (RfPulse)
  double dwell = 0.0;      // s between samples (Acquire); 0 = single sample

  double end() const { return start + duration; }
  double angle_rad() const;
  double phase_rad() const;
};

bool operator==(const PulseEvent& a, const PulseEvent& b);

struct ProgramMeta {
  std::string builtin;   // named sequence this was generated from, if any
  int cycle_length = 0;  // phase-cycle period of the refocusing train
  double tau = 0.0;      // s; half echo spacing for builtins
  double t1_delay = 0.0; // s; storage interval for the stimulated family
};

// Flat, fully expanded event list.  Parsing and the builtin generators are
// the only producers; both emit validated, time-ordered programs.
struct PulseProgram {
  std::vector<PulseEvent> events;
  double total_duration = 0.0;  // s; end of the last event
  ProgramMeta meta;

  std::size_t count(EventKind kind) const;

  // Throws ValidationError on negative durations, out-of-order or
  // overlapping events, bad dwell, or a total_duration mismatch.
  void validate() const;

  // Canonical text form: one token per event, blocks not reconstructed.
  // parse_program(to_text()) reproduces the event list exactly.
  std::string to_text() const;

  bool same_events(const PulseProgram& other) const;
};

// Sample grid of one acquire event. Samples lie at t_start + k*dwell for
// k in [0, n_samples); remainder is the dead time closing the window
// after the last sample. center_sample indexes the concatenated grid over
// all acquires (the echo top for builtin trains).
struct AcquireWindow {
  std::size_t event_index = 0;
  std::size_t first_sample = 0;
  int n_samples = 1;
  double dwell = 0.0;      // s
  double remainder = 0.0;  // s
  double t_start = 0.0;    // s
  double t_center = 0.0;   // s, time of center_sample
  std::size_t center_sample = 0;
};

std::vector<AcquireWindow> acquire_windows(const PulseProgram& program);
std::size_t total_samples(const PulseProgram& program);

}  // namespace echotrain::seq
