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

#include "dlmem/params.hpp"

#include <cmath>
#include <sstream>

#include "dlmem/errors.hpp"

namespace dlmem {
namespace {

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ParameterError(field, "must be finite");
}

void require_nonneg(double v, const char* field) {
  require_finite(v, field);
  if (v < 0.0) throw ParameterError(field, "must be >= 0 (got " + std::to_string(v) + ")");
}

void require_positive(double v, const char* field) {
  require_finite(v, field);
  if (!(v > 0.0)) throw ParameterError(field, "must be > 0 (got " + std::to_string(v) + ")");
}

}  // namespace

void MediumParams::check() const {
  require_nonneg(kappa12, "kappa12");
  require_nonneg(gamma2, "gamma2");
  require_nonneg(gamma13, "gamma13");
  require_finite(delta_p1, "delta_p1");
  require_finite(delta_p2, "delta_p2");
  require_positive(length, "length");
  require_positive(tau, "tau");
  if (std::isnan(c_light) || !(c_light > 0.0)) throw ParameterError("c_light", "must be > 0 or infinite");
}

double SwitchSchedule::factor(double t) const noexcept {
  if (kind == ScheduleKind::constant) return 1.0;
  return 0.5 * (2.0 - std::tanh(sigma * (t - t1)) + std::tanh(sigma * (t - t2)));
}

void CouplingDrive::check() const {
  require_nonneg(amp1, "coupling.amp1");
  require_nonneg(amp2, "coupling.amp2");
  require_finite(phi1, "coupling.phi1");
  require_finite(phi2, "coupling.phi2");
  if (schedule.kind == ScheduleKind::tanh_gate) {
    require_positive(schedule.sigma, "coupling.sigma");
    require_finite(schedule.t1, "coupling.t1");
    require_finite(schedule.t2, "coupling.t2");
    if (!(schedule.t1 < schedule.t2)) throw ParameterError("coupling.t1", "tanh gate requires t1 < t2");
  }
}

cplx CouplingDrive::rabi(int mode) const {
  switch (mode) {
    case 1: return std::polar(amp1, phi1);
    case 2: return std::polar(amp2, phi2);
    default: throw ParameterError("mode", "coupling leg index must be 1 or 2");
  }
}

cplx CouplingDrive::rabi_at(int mode, double t) const { return rabi(mode) * schedule.factor(t); }

double CouplingDrive::phase12() const noexcept { return wrap_phase(phi1 - phi2); }

CouplingDrive CouplingDrive::reduced() const {
  CouplingDrive out = *this;
  out.phi1 = wrap_phase(phi1);
  out.phi2 = wrap_phase(phi2);
  return out;
}

void ProbeInput::check() const {
  require_nonneg(amp1, "probe.amp1");
  require_nonneg(amp2, "probe.amp2");
  require_finite(varphi12, "probe.varphi12");
  require_positive(width, "probe.width");
  require_positive(t_center, "probe.t_center");
}

cplx ProbeInput::envelope(int mode, double t) const {
  const double x = (t - t_center) / width;
  const double shape = std::exp(-x * x);
  switch (mode) {
    case 1: return {amp1 * shape, 0.0};
    case 2: return std::polar(amp2 * shape, -varphi12);
    default: throw ParameterError("mode", "probe mode index must be 1 or 2");
  }
}

double ProbeInput::input_fraction1() const {
  const double total = amp1 * amp1 + amp2 * amp2;
  if (!(total > 0.0)) throw ParameterError("probe.amp1", "probe has zero amplitude in both modes");
  return amp1 * amp1 / total;
}

std::vector<RegimeWarning> validate(const MediumParams& m, const CouplingDrive& d) {
  m.check();
  d.check();
  std::vector<RegimeWarning> out;
  if (m.gamma2 > 0.0 && std::abs(m.delta_p2) < 20.0 * m.gamma2) {
    std::ostringstream msg;
    msg << "delta_p2 >> gamma2 fails: |delta_p2| = " << std::abs(m.delta_p2) << " < 20*gamma2 = "
        << 20.0 * m.gamma2;
    out.push_back({RegimeWarningKind::weak_decay, msg.str()});
  }
  const double amp_scale = std::max(d.amp1, d.amp2);
  const bool equal_amps = std::abs(d.amp1 - d.amp2) <= 1e-9 * amp_scale;
  const bool resonant1 = std::abs(m.delta_p1) <= 1e-12 * std::abs(m.delta_p2);
  if (!equal_amps || !resonant1) {
    out.push_back({RegimeWarningKind::simplified_alpha,
                   "simplified oscillation rate assumes |Omega_c1| = |Omega_c2| and delta_p1 = 0"});
  }
  return out;
}

std::vector<RegimeWarning> validate(const MediumParams& m, const CouplingDrive& d,
                                    const ProbeInput& p) {
  auto out = validate(m, d);
  p.check();
  const double loss = std::max(std::abs(complex_detuning(m, 1)), m.gamma2);
  const double bandwidth = 1.0 / p.width;
  const double window = loss > 0.0 ? d.total_rabi_sq() / loss : std::numeric_limits<double>::infinity();
  if (bandwidth > 0.1 * window) {
    std::ostringstream msg;
    msg << "adiabaticity: pulse bandwidth 1/width = " << bandwidth
        << " is not << |Omega|^2/max(|Delta_p1|, gamma2) = " << window;
    out.push_back({RegimeWarningKind::adiabaticity, msg.str()});
  }
  return out;
}

DimensionlessBundle nondimensionalize(const MediumParams& m, const CouplingDrive& d,
                                      const ProbeInput& p) {
  m.check();
  const double tau = m.tau;
  const double len = m.length;
  DimensionlessBundle b;
  b.medium.kappa12 = m.kappa12 * tau * len;
  b.medium.gamma2 = m.gamma2 * tau;
  b.medium.gamma13 = m.gamma13 * tau;
  b.medium.delta_p1 = m.delta_p1 * tau;
  b.medium.delta_p2 = m.delta_p2 * tau;
  b.medium.length = 1.0;
  b.medium.tau = 1.0;
  b.medium.c_light = m.c_light * tau / len;

  b.drive = d;
  b.drive.amp1 = d.amp1 * tau;
  b.drive.amp2 = d.amp2 * tau;
  b.drive.schedule.sigma = d.schedule.sigma * tau;
  b.drive.schedule.t1 = d.schedule.t1 / tau;
  b.drive.schedule.t2 = d.schedule.t2 / tau;

  b.probe = p;
  b.probe.amp1 = p.amp1 * tau;
  b.probe.amp2 = p.amp2 * tau;
  b.probe.t_center = p.t_center / tau;
  b.probe.width = p.width / tau;
  return b;
}

DimensionlessBundle redimensionalize(const DimensionlessBundle& b, double tau, double length) {
  if (!(tau > 0.0)) throw ParameterError("tau", "must be > 0");
  if (!(length > 0.0)) throw ParameterError("length", "must be > 0");
  // Undo any residual scale carried by the bundle itself.
  const double t_scale = tau / b.medium.tau;
  const double l_scale = length / b.medium.length;
  DimensionlessBundle out;
  out.medium.kappa12 = b.medium.kappa12 / (t_scale * l_scale);
  out.medium.gamma2 = b.medium.gamma2 / t_scale;
  out.medium.gamma13 = b.medium.gamma13 / t_scale;
  out.medium.delta_p1 = b.medium.delta_p1 / t_scale;
  out.medium.delta_p2 = b.medium.delta_p2 / t_scale;
  out.medium.length = b.medium.length * l_scale;
  out.medium.tau = b.medium.tau * t_scale;
  out.medium.c_light = b.medium.c_light * l_scale / t_scale;

  out.drive = b.drive;
  out.drive.amp1 = b.drive.amp1 / t_scale;
  out.drive.amp2 = b.drive.amp2 / t_scale;
  out.drive.schedule.sigma = b.drive.schedule.sigma / t_scale;
  out.drive.schedule.t1 = b.drive.schedule.t1 * t_scale;
  out.drive.schedule.t2 = b.drive.schedule.t2 * t_scale;

  out.probe = b.probe;
  out.probe.amp1 = b.probe.amp1 / t_scale;
  out.probe.amp2 = b.probe.amp2 / t_scale;
  out.probe.t_center = b.probe.t_center * t_scale;
  out.probe.width = b.probe.width * t_scale;
  return out;
}

cplx complex_detuning(const MediumParams& m, int mode) {
  switch (mode) {
    case 1: return {m.delta_p1, 0.5 * m.gamma2};
    case 2: return {m.delta_p2, 0.5 * m.gamma2};
    default: throw ParameterError("mode", "detuning index must be 1 or 2");
  }
}

double wrap_phase(double phase) noexcept {
  double r = std::remainder(phase, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

}  // namespace dlmem
