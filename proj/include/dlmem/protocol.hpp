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

// Storage-and-retrieval experiment with a gated coupling and its figures of
// merit. The input window (t0, t_split) holds the probe entering the medium;
// the output window (t_split, t_f) holds the retrieved light.

#ifndef DLMEM_PROTOCOL_HPP
#define DLMEM_PROTOCOL_HPP

#include <utility>

#include "dlmem/dynamics.hpp"
#include "dlmem/params.hpp"

namespace dlmem {

struct MemoryWindows {
  double t0 = 0.0;
  double t_split = 15.0;
  double t_f = 30.0;

  /// t0 = 0, t_f = t_max, t_split = t_max / 2.
  static MemoryWindows for_grid(const SpaceTimeGrid& grid);
  void check() const;
};

struct MemoryMetrics {
  double eta_abs = 0.0;
  double eta_ret = 0.0;
  double eta = 0.0;  // eta_abs * eta_ret
  double fidelity = 0.0;
  double phase_in = 0.0;   // arg of int E_1 E_2^* over the input window
  double phase_out = 0.0;  // same over the output window
  double storage_time = 0.0;
};

/// Gated couplings (Omega_c1(t), Omega_c2(t)).
std::pair<cplx, cplx> coupling_profile(const CouplingDrive& d, double t);

/// int_a^b (|E_1|^2 + |E_2|^2) dt over the grid samples in [a, b].
double window_energy(const ModeColumns& c, double dt, double a, double b);

/// 1 - E_out(t0, t_split) / E_in(t0, t_split).
double absorption_efficiency(const ModeColumns& input, const ModeColumns& output, double dt, const MemoryWindows& w);
/// E_out(t_split, t_f) / E_in(t0, t_split).
double retrieval_efficiency(const ModeColumns& input, const ModeColumns& output, double dt, const MemoryWindows& w);

/// Two-mode qubit read from a window: amplitudes sqrt of the per-mode energy
/// fractions, relative phase arg int E_1 E_2^* dt.
struct WindowState {
  double c1 = 0.0;
  double c2 = 0.0;
  double phase12 = 0.0;
};
WindowState window_state(const ModeColumns& c, double dt, double a, double b);

/// |<psi_in|psi_out>|^2 between the input-window and output-window states.
double conditional_fidelity(const ModeColumns& input, const ModeColumns& output, double dt, const MemoryWindows& w);

/// All metrics from the boundary columns of a finished run.
MemoryMetrics memory_metrics(const ModeColumns& input, const ModeColumns& output, double dt, const MemoryWindows& w,
                             double storage_time);

struct MemoryRun {
  EvolutionRecord record;
  MemoryMetrics metrics;
};

/// Checks the gate against the pulse and the time window, then simulates and
/// evaluates the metrics. Window problems throw ConfigError.
MemoryRun run_memory(const MediumParams& m, const CouplingDrive& d, const ProbeInput& p, const SpaceTimeGrid& grid,
                     const IntegratorConfig& cfg = {});
MemoryRun run_memory(const MediumParams& m, const CouplingDrive& d, const ProbeInput& p, const SpaceTimeGrid& grid,
                     const IntegratorConfig& cfg, const MemoryWindows& w);

}  // namespace dlmem

#endif  // DLMEM_PROTOCOL_HPP
