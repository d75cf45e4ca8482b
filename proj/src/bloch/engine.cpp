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
#include "echotrain/bloch/engine.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "echotrain/core/magnetization.hpp"

namespace echotrain::bloch {

namespace {

// Reduction granularity. Fixed so the summation tree never depends on the
// worker count: chunks are always folded in index order.
constexpr std::size_t kChunk = 1024;

struct Op {
  enum Kind { Pulse, Delay, Acquire } kind;
  int a = 0;  // Pulse: angle slot   Delay: duration slot  Acquire: first sample
  int b = 0;  // Pulse: phase slot                         Acquire: sample count
  int c = -1;  // Acquire: dwell duration slot (-1 when a single sample)
  int d = -1;  // Acquire: trailing remainder duration slot (-1 when none)
};

// Program lowered to slot-indexed ops over small tables of the distinct
// durations, nominal angles and phases. Per isochromat the hot loop then
// needs one sincos per distinct duration/angle instead of one per event.
struct Compiled {
  std::vector<Op> ops;
  std::vector<double> durations;          // s, distinct
  std::vector<double> angles;             // rad, distinct nominal angles
  std::vector<double> phase_c, phase_s;   // per distinct phase
  std::vector<double> e1, e2;             // relaxation factors per duration
  std::vector<double> times;              // s, sample times (shared)
  std::vector<std::pair<int, int>> acq;   // (first sample, count) per acquire
};

int intern(std::vector<double>& table, double value) {
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i] == value) return static_cast<int>(i);
  table.push_back(value);
  return static_cast<int>(table.size() - 1);
}

Compiled compile(const seq::PulseProgram& program, double t1, double t2) {
  Compiled cp;
  std::vector<double> phases;
  const std::vector<seq::AcquireWindow> windows = seq::acquire_windows(program);
  std::size_t next_window = 0;
  for (const seq::PulseEvent& e : program.events) {
    switch (e.kind) {
      case seq::EventKind::RfPulse: {
        Op op{Op::Pulse, intern(cp.angles, e.angle_rad()),
              intern(phases, e.phase_rad()), -1, -1};
        cp.ops.push_back(op);
        break;
      }
      case seq::EventKind::Delay:
        if (e.duration > 0.0)
          cp.ops.push_back({Op::Delay, intern(cp.durations, e.duration), 0, -1, -1});
        break;
      case seq::EventKind::Acquire: {
        const seq::AcquireWindow& w = windows[next_window++];
        Op op{Op::Acquire, static_cast<int>(w.first_sample), w.n_samples, -1, -1};
        if (w.n_samples > 1) op.c = intern(cp.durations, w.dwell);
        if (w.remainder > 0.0) op.d = intern(cp.durations, w.remainder);
        cp.acq.emplace_back(op.a, op.b);
        for (int i = 0; i < w.n_samples; ++i)
          cp.times.push_back(w.t_start + i * w.dwell);
        cp.ops.push_back(op);
        break;
      }
    }
  }
  for (double dur : cp.durations) {
    cp.e1.push_back(std::exp(-dur / t1));
    cp.e2.push_back(std::exp(-dur / t2));
  }
  for (double ph : phases) {
    cp.phase_c.push_back(std::cos(ph));
    cp.phase_s.push_back(std::sin(ph));
  }
  return cp;
}

// Sequential per-isochromat evolution of one chunk into `part`.
void run_chunk(const Compiled& cp, const Ensemble& ens, double g,
               std::size_t lo, std::size_t hi,
               std::vector<std::complex<double>>& part) {
  const std::size_t nd = cp.durations.size();
  const std::size_t na = cp.angles.size();
  std::vector<double> dur_c(nd), dur_s(nd), ang_c(na), ang_s(na);
  const double gamma = ens.sample.gamma;
  for (std::size_t j = lo; j < hi; ++j) {
    const core::Isochromat& iso = ens.isochromats[j];
    const double omega = iso.delta_omega + gamma * g * iso.z;
    for (std::size_t i = 0; i < nd; ++i) {
      dur_c[i] = std::cos(omega * cp.durations[i]);
      dur_s[i] = std::sin(omega * cp.durations[i]);
    }
    for (std::size_t i = 0; i < na; ++i) {
      ang_c[i] = std::cos(iso.b1_scale * cp.angles[i]);
      ang_s[i] = std::sin(iso.b1_scale * cp.angles[i]);
    }
    core::Magnetization m = iso.m;
    const double w = iso.weight;
    for (const Op& op : cp.ops) {
      switch (op.kind) {
        case Op::Pulse:
          m = core::rotate_cs(m, cp.phase_c[op.b], cp.phase_s[op.b],
                              ang_c[op.a], ang_s[op.a]);
          break;
        case Op::Delay:
          m = core::free_evolve_cs(m, dur_c[op.a], dur_s[op.a], cp.e1[op.a],
                                   cp.e2[op.a]);
          break;
        case Op::Acquire:
          for (int k = 0; k < op.b; ++k) {
            part[op.a + k] += std::complex<double>(w * m.mx, w * m.my);
            if (k + 1 < op.b)
              m = core::free_evolve_cs(m, dur_c[op.c], dur_s[op.c], cp.e1[op.c],
                                       cp.e2[op.c]);
          }
          if (op.d >= 0)
            m = core::free_evolve_cs(m, dur_c[op.d], dur_s[op.d], cp.e1[op.d],
                                     cp.e2[op.d]);
          break;
      }
    }
  }
}

}  // namespace

core::SignalTrace run(const seq::PulseProgram& program, const Ensemble& ensemble,
                      const core::GradientSpec& gradient,
                      const EngineOptions& options) {
  program.validate();
  gradient.validate();
  const Compiled cp = compile(program, ensemble.sample.t1, ensemble.sample.t2);

  core::SignalTrace trace;
  trace.t = cp.times;
  trace.s.assign(cp.times.size(), {0.0, 0.0});
  const std::size_t n = ensemble.isochromats.size();
  if (n == 0 || cp.times.empty()) return trace;

  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  const int workers =
      static_cast<int>(std::min<std::size_t>(std::max(options.n_workers, 1), n_chunks));

  if (workers == 1) {
    std::vector<std::complex<double>> part(cp.times.size());
    for (std::size_t c = 0; c < n_chunks; ++c) {
      std::fill(part.begin(), part.end(), std::complex<double>(0.0, 0.0));
      run_chunk(cp, ensemble, gradient.g, c * kChunk,
                std::min(n, (c + 1) * kChunk), part);
      for (std::size_t i = 0; i < part.size(); ++i) trace.s[i] += part[i];
    }
    return trace;
  }

  // Chunks are claimed dynamically but folded strictly in index order, so
  // the floating-point sum is the same as the single-threaded one.
  std::atomic<std::size_t> next_claim{0};
  std::mutex mu;
  std::map<std::size_t, std::vector<std::complex<double>>> pending;
  std::size_t next_fold = 0;
  auto work = [&] {
    for (;;) {
      const std::size_t c = next_claim.fetch_add(1);
      if (c >= n_chunks) return;
      std::vector<std::complex<double>> part(cp.times.size());
      run_chunk(cp, ensemble, gradient.g, c * kChunk,
                std::min(n, (c + 1) * kChunk), part);
      std::lock_guard<std::mutex> lock(mu);
      pending.emplace(c, std::move(part));
      for (auto it = pending.find(next_fold); it != pending.end();
           it = pending.find(++next_fold)) {
        for (std::size_t i = 0; i < it->second.size(); ++i)
          trace.s[i] += it->second[i];
        pending.erase(it);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  return trace;
}

core::EchoTrain echo_amplitudes(const seq::PulseProgram& program,
                                const Ensemble& ensemble,
                                const core::GradientSpec& gradient,
                                const EngineOptions& options) {
  if (program.count(seq::EventKind::Acquire) == 0) throw NoAcquisition();
  const core::SignalTrace trace = run(program, ensemble, gradient, options);
  core::EchoTrain train;
  train.tau = program.meta.tau;
  train.sequence = program.meta.builtin;
  int index = 1;
  for (const seq::AcquireWindow& w : seq::acquire_windows(program))
    train.entries.push_back(
        {index++, trace.t[w.center_sample], trace.s[w.center_sample]});
  return train;
}

core::SignalTrace fid(const Ensemble& ensemble,
                      const core::GradientSpec& gradient, double duration,
                      double dwell, const EngineOptions& options) {
  seq::PulseProgram prog;
  seq::PulseEvent pulse;
  pulse.kind = seq::EventKind::RfPulse;
  pulse.angle_deg = 90.0;
  pulse.phase_deg = 0.0;
  seq::PulseEvent acq;
  acq.kind = seq::EventKind::Acquire;
  acq.duration = duration;
  acq.dwell = dwell;
  prog.events = {pulse, acq};
  prog.total_duration = duration;
  prog.validate();
  return run(prog, ensemble, gradient, options);
}

}  // namespace echotrain::bloch
