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

// Acceptance report: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dlmem/analytic.hpp"
#include "dlmem/config.hpp"
#include "dlmem/dynamics.hpp"
#include "dlmem/errors.hpp"
#include "dlmem/experiment.hpp"
#include "dlmem/protocol.hpp"

using namespace dlmem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Reference medium with constant couplings and a symmetric probe.
ExperimentConfig reference(double kappa = 500.0) {
  ExperimentConfig c = preset("fig4");
  c.medium.kappa12 = kappa;
  c.probe.amp1 = 1.3e-3;
  c.probe.amp2 = 1.3e-3;
  c.probe.varphi12 = 0.0;
  c.coupling.phi1 = 0.0;
  c.coupling.phi2 = 0.0;
  return c;
}

// Slow pulse inside the transparency window.
ExperimentConfig adiabatic(ExperimentConfig c) {
  c.probe.t_center = 10.0;
  c.probe.width = 3.0;
  c.grid.t_max = 25.0;
  return c;
}

EvolutionRecord run(const ExperimentConfig& c, ZStepper stepper = ZStepper::trapezoidal) {
  IntegratorConfig cfg = c.integrator;
  cfg.z_stepper = stepper;
  return simulate(c.medium, c.coupling, c.probe, c.resolved_grid(), cfg);
}

Outcome perfect_recovery() {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    OscillationRate rate{};
    const double period = 0.05 + u(rng);
    rate.alpha = {(u(rng) < 0.5 ? -1.0 : 1.0) * 2.0 * kPi / period, 0.0};
    rate.inv_va = 1.0;
    rate.inv_vb = 1.0;
    CouplingDrive d;
    d.amp1 = 18.0;
    d.amp2 = 18.0;
    d.phi1 = 2.0 * kPi * u(rng);
    d.phi2 = 2.0 * kPi * u(rng);
    const double theta = kPi * u(rng), phase = 2.0 * kPi * u(rng);
    const ModePair in{std::cos(theta / 2), std::polar(std::sin(theta / 2), phase)};
    const ModePair out = propagate_envelope(in, rate, d, period);
    worst = std::max({worst, std::abs(out.e1 - in.e1), std::abs(out.e2 - in.e2)});
  }
  return {worst <= 1e-12, format("max component error %.3e over 100 qubits (tol 1e-12)", worst)};
}

double max_i1_offset(const EvolutionRecord& rec) {
  double worst = 0.0;
  for (const PeakSample& s : rec.peaks) worst = std::max(worst, std::abs(s.i1 - 0.5));
  return worst;
}

Outcome symmetric_transmission() {
  const double worst = max_i1_offset(run(adiabatic(reference())));
  const double short_pulse = max_i1_offset(run(reference()));
  return {worst <= 0.02, format("max_z |I1 - 0.5| = %.4f (tol 0.02); unit-width pulse for reference: %.4f", worst,
                                short_pulse)};
}

Outcome period_consistency() {
  const ExperimentConfig c = preset("fig4_calibrated");
  const EvolutionRecord rec = run(c);
  std::vector<double> z, i1;
  for (const PeakSample& s : rec.peaks) {
    z.push_back(s.z);
    i1.push_back(s.i1);
  }
  const double numeric = estimate_period(z, i1);
  const double analytic = kPi * c.medium.delta_p2 / c.medium.kappa12;
  const double rel = std::abs(numeric - analytic) / analytic;
  return {rel <= 0.25, format("numeric period %.4f L, analytic %.4f L, rel diff %.3f (tol 0.25)", numeric, analytic, rel)};
}

Outcome group_delay() {
  ExperimentConfig c = reference();
  c.medium.gamma2 = 0.0;
  c.medium.gamma13 = 0.0;
  const EvolutionRecord rec = run(c);
  const double delay = rec.peaks.back().t_peak - rec.peaks.front().t_peak;
  const double expect = c.grid.z_max * oscillation_rate(c.medium, c.coupling).inv_va;
  const double rel = std::abs(delay - expect) / expect;
  return {rel <= 0.10, format("peak delay %.4f tau, L/v_a %.4f tau, rel diff %.3f (tol 0.10)", delay, expect, rel)};
}

Outcome memory_metrics_check() {
  const ExperimentConfig c = preset("fig5_calibrated");
  const MemoryRun r = run_memory(c.medium, c.coupling, c.probe, c.resolved_grid(), c.integrator, c.windows);
  const MemoryMetrics& m = r.metrics;
  const bool pass = m.eta_abs >= 0.99 && m.eta_ret >= 0.85 && m.eta_ret <= 0.95 && m.eta >= 0.85 && m.eta <= 0.95 &&
                    m.fidelity >= 0.99;
  std::string detail = format(
      "eta_abs %.2f%% eta_ret %.2f%% eta %.2f%% F %.2f%% (published 99.78%% / 91.21%% / 91.01%% / 99.69%%)",
      100 * m.eta_abs, 100 * m.eta_ret, 100 * m.eta, 100 * m.fidelity);
  try {
    const ExperimentConfig lit = preset("fig5");
    const MemoryRun l = run_memory(lit.medium, lit.coupling, lit.probe, lit.resolved_grid(), lit.integrator, lit.windows);
    detail += format("; literal-kappa preset for reference: eta_abs %.2f%% eta_ret %.2f%% F %.2f%%",
                     100 * l.metrics.eta_abs, 100 * l.metrics.eta_ret, 100 * l.metrics.fidelity);
  } catch (const Error& e) {
    detail += std::string("; literal-kappa preset failed: ") + e.what();
  }
  return {pass, detail};
}

Outcome conservation() {
  ExperimentConfig c = reference();
  c.medium.gamma2 = 0.0;
  c.medium.gamma13 = 0.0;
  c.probe.amp2 = std::sqrt(0.3 / 0.7) * c.probe.amp1;
  c.probe.varphi12 = kPi / 4;
  const EvolutionRecord rec = run(c);
  const double dt = rec.grid.dt();
  const double ratio = column_energy(rec.output, dt) / column_energy(rec.input, dt);
  return {std::abs(ratio - 1.0) <= 1e-3, format("output/input energy %.7f (tol 1e-3)", ratio)};
}

Outcome analytic_agreement() {
  ExperimentConfig c = adiabatic(reference());
  c.probe.amp2 = std::sqrt(0.3 / 0.7) * c.probe.amp1;
  c.probe.varphi12 = kPi / 4;
  const EvolutionRecord rec = run(c);
  const OscillationRate rate = oscillation_rate(c.medium, c.coupling);
  double worst = 0.0;
  for (const PeakSample& s : rec.peaks) {
    const auto [i1, i2] = intensity_profile(c.probe, c.coupling, rate, s.z);
    worst = std::max({worst, std::abs(s.i1 - i1), std::abs(s.i2 - i2)});
  }
  return {worst <= 0.05, format("max_z intensity error %.4f (tol 0.05)", worst)};
}

Outcome order_of_accuracy() {
  MediumParams m;
  m.kappa12 = 50.0;
  m.gamma2 = 1.0;
  m.gamma13 = 0.05;
  m.delta_p2 = 10.0;
  CouplingDrive d;
  d.amp1 = 5.0;
  d.amp2 = 4.0;
  d.phi1 = 0.4;
  const ProbeInput p{0.8, 0.6, 0.7, 4.0, 1.0};
  const SpaceTimeGrid base{81, 2001, 1.0, 10.0};
  const ConvergenceReport r = convergence_study(m, d, p, base, {ZStepper::predictor_corrector, 1, 1, false}, 3);
  const double rz = r.z_levels[0].ratio, rt = r.t_levels[0].ratio;
  const bool pass = std::abs(rz - 4.0) <= 1.0 && std::abs(rt - 16.0) <= 6.4;
  return {pass, format("dz halving ratio %.3f (4 +/- 25%%), dt halving ratio %.3f (16 +/- 40%%)", rz, rt)};
}

Outcome superposition() {
  const ExperimentConfig c = reference();
  const SpaceTimeGrid grid = c.resolved_grid();
  const ProbeInput pa{1.3e-3, 0.0, 0.0, 3.0, 1.0};
  const ProbeInput pb{0.0, 0.9e-3, 0.6, 4.0, 0.8};
  ModeColumns a = sample_probe(pa, grid), b = sample_probe(pb, grid), sum = a;
  for (std::size_t k = 0; k < grid.nt; ++k) {
    sum.e1[k] += b.e1[k];
    sum.e2[k] += b.e2[k];
  }
  const EvolutionRecord ra = simulate(c.medium, c.coupling, a, grid, c.integrator);
  const EvolutionRecord rb = simulate(c.medium, c.coupling, b, grid, c.integrator);
  const EvolutionRecord rs = simulate(c.medium, c.coupling, sum, grid, c.integrator);
  double err = 0.0, scale = 0.0;
  auto compare = [&](const FieldArray& x, const FieldArray& y, const FieldArray& s) {
    for (std::size_t i = 0; i < s.rows(); ++i) {
      for (std::size_t j = 0; j < s.cols(); ++j) {
        err = std::max(err, std::abs(s(i, j) - x(i, j) - y(i, j)));
        scale = std::max(scale, std::abs(s(i, j)));
      }
    }
  };
  compare(ra.e1, rb.e1, rs.e1);
  compare(ra.e2, rb.e2, rs.e2);
  const double rel = err / scale;
  return {rel <= 1e-10, format("max relative deviation %.3e (tol 1e-10)", rel)};
}

std::pair<double, double> phase_range(const EvolutionRecord& rec) {
  double lo = 1e9, hi = -1e9;
  for (const PeakSample& s : rec.peaks) {
    lo = std::min(lo, s.phase12);
    hi = std::max(hi, s.phase12);
  }
  return {lo, hi};
}

Outcome phase_behavior() {
  ExperimentConfig c = reference();
  c.probe.varphi12 = kPi / 3;
  const EvolutionRecord rec = run(adiabatic(c));
  const auto [lo, hi] = phase_range(rec);
  const auto [short_lo, short_hi] = phase_range(run(c));
  const double start = rec.peaks.front().phase12;
  const bool pass = lo >= -kPi / 3 - 0.05 && hi <= kPi / 3 + 0.05 && std::abs(start - kPi / 3) <= 1e-9;
  return {pass, format("Phi12(0) = %.6f, range [%.4f, %.4f], bounds [%.4f, %.4f]; unit-width pulse for reference: "
                       "[%.4f, %.4f]",
                       start, lo, hi, -kPi / 3 - 0.05, kPi / 3 + 0.05, short_lo, short_hi)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 perfect recovery", perfect_recovery},
      {"2 symmetric transmission", symmetric_transmission},
      {"3 oscillation period", period_consistency},
      {"4 group delay", group_delay},
      {"5 memory metrics", memory_metrics_check},
      {"6 energy conservation", conservation},
      {"7 analytic vs numeric", analytic_agreement},
      {"8 order of accuracy", order_of_accuracy},
      {"9 superposition", superposition},
      {"10 phase behavior", phase_behavior},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
