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
#include "echotrain/analysis/measures.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace echotrain::analysis {

namespace {

// Suffix running maximum: the tightest non-increasing majorant.
std::vector<double> envelope(const std::vector<double>& y) {
  std::vector<double> env(y.size());
  double running = 0.0;
  for (std::size_t i = y.size(); i-- > 0;) {
    running = std::max(running, y[i]);
    env[i] = running;
  }
  return env;
}

bool is_monotone(const std::vector<double>& y) {
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] > y[i - 1] * (1.0 + 1e-9) + 1e-15) return false;
  return true;
}

DecayMeasure regress_decay(const std::vector<double>& t,
                           const std::vector<double>& y_raw) {
  DecayMeasure out;
  out.monotone = is_monotone(y_raw);
  const std::vector<double> y = out.monotone ? y_raw : envelope(y_raw);
  double st = 0, sl = 0, stt = 0, stl = 0;
  int m = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] <= 0.0) continue;
    const double l = std::log(y[i]);
    st += t[i];
    sl += l;
    stt += t[i] * t[i];
    stl += t[i] * l;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("need >= 2 positive amplitudes");
  const double det = m * stt - st * st;
  if (det == 0.0) throw std::invalid_argument("times are all equal");
  const double slope = (m * stl - st * sl) / det;
  if (slope >= 0.0)
    throw std::invalid_argument("amplitudes do not decay with time");
  out.value = -1.0 / slope;
  return out;
}

}  // namespace

core::EchoTrain echoes_from_trace(const seq::PulseProgram& program,
                                  const core::SignalTrace& trace) {
  if (trace.size() != seq::total_samples(program))
    throw std::invalid_argument("trace does not match the program's sample grid");
  core::EchoTrain train;
  train.tau = program.meta.tau;
  train.sequence = program.meta.builtin;
  int index = 1;
  for (const seq::AcquireWindow& w : seq::acquire_windows(program))
    train.entries.push_back(
        {index++, trace.t[w.center_sample], trace.s[w.center_sample]});
  return train;
}

DecayMeasure measure_t2star(const core::SignalTrace& trace) {
  if (trace.size() < 2)
    throw std::invalid_argument("trace needs at least 2 samples");
  std::vector<double> y(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) y[i] = std::abs(trace.s[i]);
  DecayMeasure out;
  out.monotone = is_monotone(y);
  if (!out.monotone) y = envelope(y);
  const double y0 = y.front();
  if (y0 <= 0.0) throw std::invalid_argument("trace starts at zero amplitude");
  const double target = y0 / std::exp(1.0);
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i] > target) continue;
    const double ya = y[i - 1];
    const double yb = y[i];
    double frac = 0.0;  // log-interpolate unless the segment is flat/zero
    if (yb > 0.0 && ya > yb)
      frac = (std::log(ya) - std::log(target)) / (std::log(ya) - std::log(yb));
    else if (ya > yb)
      frac = (ya - target) / (ya - yb);
    out.value = trace.t[i - 1] + frac * (trace.t[i] - trace.t[i - 1]) -
                trace.t.front();
    return out;
  }
  throw std::invalid_argument("trace never decays to 1/e of its start");
}

DecayMeasure measure_t2he(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2)
    throw std::invalid_argument("need at least 2 (2*tau, amplitude) points");
  std::vector<double> t, y;
  t.reserve(points.size());
  y.reserve(points.size());
  for (const auto& [time, amp] : points) {
    t.push_back(time);
    y.push_back(amp);
  }
  return regress_decay(t, y);
}

double effective_dipolar(double d, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("tau must be >= 0");
  return d * d * tau;
}

SteHeResult ste_he_ratio(const core::SignalTrace& trace, double tau, double t1,
                         double window) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!(t1 >= 0.0)) throw std::invalid_argument("t1 must be >= 0");
  const double separation = std::abs(t1 - 2.0 * tau);
  if (window <= 0.0) window = separation;
  if (separation < window || separation == 0.0)
    throw EchoWindowsOverlap("echo separation |t1 - 2*tau| = " +
                             std::to_string(separation) +
                             " s is smaller than the search window");
  const double ste_target = 2.0 * tau + t1;
  const double he_target = 2.0 * t1;

  auto peak = [&](double target, double& peak_t,
                  std::complex<double>& peak_s) {
    bool found = false;
    double best = -1.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (std::abs(trace.t[i] - target) > 0.5 * window) continue;
      const double a = std::abs(trace.s[i]);
      if (a > best) {
        best = a;
        peak_t = trace.t[i];
        peak_s = trace.s[i];
        found = true;
      }
    }
    if (!found)
      throw std::invalid_argument("no samples within the echo window at t = " +
                                  std::to_string(target) + " s");
    return best;
  };

  SteHeResult r;
  std::complex<double> s_ste, s_he;
  r.ste_amp = peak(ste_target, r.ste_t, s_ste);
  r.he_amp = peak(he_target, r.he_t, s_he);
  r.ratio = r.he_amp > 0.0 ? r.ste_amp / r.he_amp : 0.0;
  const double overlap = (s_ste * std::conj(s_he)).real();
  r.phase_sign = overlap >= 0.0 ? 1 : -1;
  return r;
}

}  // namespace echotrain::analysis
