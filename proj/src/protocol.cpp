// Copyright 2026 The dlmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dlmem/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dlmem/analytic.hpp"
#include "dlmem/errors.hpp"

namespace dlmem {
namespace {

struct WindowSums {
  double e1 = 0.0;
  double e2 = 0.0;
  cplx cross{};
};

WindowSums window_sums(const ModeColumns& c, double dt, double a, double b) {
  WindowSums s;
  const std::size_t n = c.size();
  if (n < 2) return s;
  const double eps = 1e-9 * dt;
  const auto first = static_cast<std::ptrdiff_t>(std::ceil((a - eps) / dt));
  const auto last = static_cast<std::ptrdiff_t>(std::floor((b + eps) / dt));
  const std::size_t lo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(first, 0));
  const std::size_t hi = static_cast<std::size_t>(std::min<std::ptrdiff_t>(last, static_cast<std::ptrdiff_t>(n) - 1));
  if (first > last || lo >= hi) return s;
  for (std::size_t k = lo; k <= hi; ++k) {
    const double w = (k == lo || k == hi) ? 0.5 * dt : dt;
    s.e1 += w * std::norm(c.e1[k]);
    s.e2 += w * std::norm(c.e2[k]);
    s.cross += w * c.e1[k] * std::conj(c.e2[k]);
  }
  return s;
}

double input_energy(const ModeColumns& input, double dt, const MemoryWindows& w) {
  const double e = window_energy(input, dt, w.t0, w.t_split);
  if (!(e > 0.0)) throw UndefinedMetricError("input window (t0, t_split) carries no energy");
  return e;
}

}  // namespace

MemoryWindows MemoryWindows::for_grid(const SpaceTimeGrid& grid) { return {0.0, 0.5 * grid.t_max, grid.t_max}; }

void MemoryWindows::check() const {
  if (!(t0 < t_split && t_split < t_f)) throw ConfigError("memory windows need t0 < t_split < t_f");
}

std::pair<cplx, cplx> coupling_profile(const CouplingDrive& d, double t) { return {d.rabi_at(1, t), d.rabi_at(2, t)}; }

double window_energy(const ModeColumns& c, double dt, double a, double b) {
  const WindowSums s = window_sums(c, dt, a, b);
  return s.e1 + s.e2;
}

double absorption_efficiency(const ModeColumns& input, const ModeColumns& output, double dt, const MemoryWindows& w) {
  w.check();
  return 1.0 - window_energy(output, dt, w.t0, w.t_split) / input_energy(input, dt, w);
}

double retrieval_efficiency(const ModeColumns& input, const ModeColumns& output, double dt, const MemoryWindows& w) {
  w.check();
  return window_energy(output, dt, w.t_split, w.t_f) / input_energy(input, dt, w);
}

WindowState window_state(const ModeColumns& c, double dt, double a, double b) {
  const WindowSums s = window_sums(c, dt, a, b);
  const double total = s.e1 + s.e2;
  if (!(total > 0.0)) throw UndefinedMetricError("window carries no energy");
  return {std::sqrt(s.e1 / total), std::sqrt(s.e2 / total), s.cross == cplx{} ? 0.0 : std::arg(s.cross)};
}

double conditional_fidelity(const ModeColumns& input, const ModeColumns& output, double dt, const MemoryWindows& w) {
  w.check();
  const WindowState in = window_state(input, dt, w.t0, w.t_split);
  const WindowState out = window_state(output, dt, w.t_split, w.t_f);
  const cplx overlap = in.c1 * out.c1 + in.c2 * out.c2 * std::polar(1.0, out.phase12 - in.phase12);
  return std::min(1.0, std::norm(overlap));
}

MemoryMetrics memory_metrics(const ModeColumns& input, const ModeColumns& output, double dt, const MemoryWindows& w,
                             double storage_time) {
  MemoryMetrics r;
  r.eta_abs = absorption_efficiency(input, output, dt, w);
  r.eta_ret = retrieval_efficiency(input, output, dt, w);
  r.eta = r.eta_abs * r.eta_ret;
  r.fidelity = conditional_fidelity(input, output, dt, w);
  r.phase_in = window_state(input, dt, w.t0, w.t_split).phase12;
  r.phase_out = window_state(output, dt, w.t_split, w.t_f).phase12;
  r.storage_time = storage_time;
  return r;
}

MemoryRun run_memory(const MediumParams& m, const CouplingDrive& d, const ProbeInput& p, const SpaceTimeGrid& grid,
                     const IntegratorConfig& cfg) {
  return run_memory(m, d, p, grid, cfg, MemoryWindows::for_grid(grid));
}

MemoryRun run_memory(const MediumParams& m, const CouplingDrive& d, const ProbeInput& p, const SpaceTimeGrid& grid,
                     const IntegratorConfig& cfg, const MemoryWindows& w) {
  m.check();
  d.check();
  p.check();
  grid.check();
  w.check();
  const SwitchSchedule& s = d.schedule;
  if (s.kind != ScheduleKind::tanh_gate) throw ConfigError("memory run needs a tanh_gate coupling schedule");
  if (!(s.t1 > p.t_center)) throw ConfigError("gate closes (t1) before the pulse enters (t_center)");
  if (!(s.t2 > s.t1)) throw ConfigError("gate reopens (t2) before it closes (t1)");
  if (w.t_f > grid.t_max * (1.0 + 1e-12)) throw ConfigError("output window extends past the grid t_max");
  const double transit = grid.z_max * oscillation_rate(m, d).inv_va;
  if (!(s.t2 + transit < grid.t_max)) {
    throw ConfigError("retrieval does not fit in the time window: t2 + L/v_a = " + std::to_string(s.t2 + transit) +
                      " >= t_max");
  }
  if (!((s.t2 - s.t1) * m.gamma13 < 1.0)) throw ConfigError("storage window exceeds the coherence time 1/gamma13");

  MemoryRun run;
  run.record = simulate(m, d, p, grid, cfg);
  run.metrics = memory_metrics(run.record.input, run.record.output, grid.dt(), w, s.t2 - s.t1);
  return run;
}

}  // namespace dlmem
