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

#include "dlmem/analytic.hpp"

#include <cmath>
#include <tuple>

#include "dlmem/errors.hpp"

namespace dlmem {
namespace {

constexpr cplx kI{0.0, 1.0};

double inverse_light_speed(const MediumParams& m) { return m.finite_light_speed() ? 1.0 / m.c_light : 0.0; }

struct PeakTerms {
  double a;  // |E_1(0)| at the peak
  double b;  // |E_2(0)| at the peak
  double psi;
  double x;  // exp(-Im(alpha) z)
  double theta;
};

PeakTerms peak_terms(const ProbeInput& p, const CouplingDrive& d, const OscillationRate& rate, double z) {
  p.check();
  return {p.amp1, p.amp2, p.varphi12 - (d.phi1 - d.phi2), std::exp(-rate.alpha.imag() * z),
          rate.alpha.real() * z};
}

// |E_j|^2 with A the peak amplitude of mode j, B that of mode l and psi the
// (varphi_jl - phi_jl) combination seen from mode j.
double intensity_term(double a, double b, double psi, double x, double theta) {
  const double x2 = x * x;
  const double own = a * a * (1.0 + x2 + 2.0 * x * std::cos(theta));
  const double other = b * b * (1.0 + x2 - 2.0 * x * std::cos(theta));
  const cplx bracket{1.0 - x2, -2.0 * x * std::sin(theta)};
  const double cross = 2.0 * a * b * (std::polar(1.0, -psi) * bracket).real();
  return 0.25 * (own + other + cross);
}

}  // namespace

OscillationRate oscillation_rate(const MediumParams& m, const CouplingDrive& d) {
  m.check();
  d.check();
  const double o1 = d.amp1 * d.amp1;
  const double o2 = d.amp2 * d.amp2;
  const double omega_sq = o1 + o2;
  if (!(omega_sq > 0.0)) throw SingularityError("oscillation rate undefined: no coupling field (|Omega|^2 = 0)");
  const cplx det1 = complex_detuning(m, 1);
  const cplx det2 = complex_detuning(m, 2);
  const cplx denom = det1 * o2 + det2 * o1;
  if (std::abs(denom) <= 1e-14 * omega_sq * (std::abs(det1) + std::abs(det2))) {
    throw SingularityError("oscillation rate undefined: D = Delta_p1|Omega_c2|^2 + Delta_p2|Omega_c1|^2 = 0");
  }
  OscillationRate r;
  r.alpha = -m.kappa12 * omega_sq / denom;
  r.inv_va = inverse_light_speed(m) + m.kappa12 / omega_sq;
  const cplx split = det1 - det2;
  r.inv_vb = inverse_light_speed(m) + m.kappa12 / omega_sq * (o1 * o2 * split * split / (denom * denom));
  return r;
}

cplx simplified_alpha(const MediumParams& m) {
  m.check();
  if (m.delta_p2 == 0.0) throw SingularityError("simplified alpha requires delta_p2 != 0");
  const double d2 = m.delta_p2;
  return {-2.0 * m.kappa12 / d2, 2.0 * m.kappa12 * m.gamma2 / (d2 * d2)};
}

ModePair propagate_envelope(ModePair boundary, const OscillationRate& rate, const CouplingDrive& d,
                            double z) {
  const cplx e = std::exp(kI * rate.alpha * z);
  const cplx mix12 = std::polar(1.0, d.phi1 - d.phi2);
  const cplx plus = 0.5 * (1.0 + e);
  const cplx minus = 0.5 * (1.0 - e);
  return {plus * boundary.e1 + mix12 * minus * boundary.e2,
          plus * boundary.e2 + std::conj(mix12) * minus * boundary.e1};
}

ModePair propagate_envelope(ModePair boundary, const MediumParams& m, const CouplingDrive& d, double z) {
  return propagate_envelope(boundary, oscillation_rate(m, d), d, z);
}

ModePair pulse_field(const ProbeInput& p, const OscillationRate& rate, const CouplingDrive& d, double z,
                     double t, VelocityModel model) {
  const double ta = t - z * rate.inv_va;
  if (model == VelocityModel::merged) {
    return propagate_envelope({p.envelope(1, ta), p.envelope(2, ta)}, rate, d, z);
  }
  const double tb = t - z * rate.inv_vb.real();
  const double o1 = d.amp1 * d.amp1;
  const double o2 = d.amp2 * d.amp2;
  const double omega_sq = o1 + o2;
  const cplx eb = std::exp(kI * rate.alpha * z);
  const cplx w12 = d.rabi(1) * std::conj(d.rabi(2)) / omega_sq;
  const cplx a1 = p.envelope(1, ta), a2 = p.envelope(2, ta);
  const cplx b1 = p.envelope(1, tb), b2 = p.envelope(2, tb);
  return {(o1 * a1 + o2 * eb * b1) / omega_sq + w12 * (a2 - eb * b2),
          (o2 * a2 + o1 * eb * b2) / omega_sq + std::conj(w12) * (a1 - eb * b1)};
}

std::pair<double, double> intensity_profile(const ProbeInput& p, const CouplingDrive& d,
                                            const OscillationRate& rate, double z) {
  const PeakTerms k = peak_terms(p, d, rate, z);
  const double norm = k.a * k.a + k.b * k.b;
  if (!(norm > 0.0)) throw ParameterError("probe.amp1", "intensity profile needs a nonzero input");
  return {intensity_term(k.a, k.b, k.psi, k.x, k.theta) / norm,
          intensity_term(k.b, k.a, -k.psi, k.x, k.theta) / norm};
}

double phase_profile(const ProbeInput& p, const CouplingDrive& d, const OscillationRate& rate, double z) {
  const PeakTerms k = peak_terms(p, d, rate, z);
  const auto [i1, i2] = intensity_profile(p, d, rate, z);
  if (i1 < 1e-14 || i2 < 1e-14) {
    throw SingularityError("relative phase undefined at z = " + std::to_string(z) + ": a mode amplitude vanishes");
  }
  const double x2 = k.x * k.x;
  const double a2 = k.a * k.a;
  const double b2 = k.b * k.b;
  const cplx inner = k.a * k.b * cplx{std::cos(k.psi) * 0.5 * (1.0 + x2), std::sin(k.psi) * k.x * std::cos(k.theta)} +
                     kI * std::sin(k.theta) * k.x * 0.5 * (a2 - b2) + 0.25 * (1.0 - x2) * (a2 + b2);
  return wrap_phase(std::arg(inner) + (d.phi1 - d.phi2));
}

ModeState mode_state(const ProbeInput& p, const CouplingDrive& d, const OscillationRate& rate, double z) {
  ModeState s;
  const ModePair peak = propagate_envelope({p.envelope(1, p.t_center), p.envelope(2, p.t_center)}, rate, d, z);
  s.amp1 = peak.e1;
  s.amp2 = peak.e2;
  std::tie(s.i1, s.i2) = intensity_profile(p, d, rate, z);
  s.phase12 = phase_profile(p, d, rate, z);
  return s;
}

SpectralPair frequency_domain_solution(std::span<const cplx> spec1, std::span<const cplx> spec2,
                                       const MediumParams& m, const CouplingDrive& d, double z,
                                       std::span<const double> omega) {
  const std::size_t n = omega.size();
  if (spec1.size() != n || spec2.size() != n) {
    throw ParameterError("omega", "spectra and frequency grid must have the same length");
  }
  double wmax = 0.0;
  for (double w : omega) wmax = std::max(wmax, std::abs(w));
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(omega[k] + omega[n - 1 - k]) > 1e-9 * wmax) {
      throw ParameterError("omega", "frequency grid must be symmetric about zero");
    }
  }
  const OscillationRate rate = oscillation_rate(m, d);
  const double o1 = d.amp1 * d.amp1;
  const double o2 = d.amp2 * d.amp2;
  const double omega_sq = o1 + o2;
  const cplx w12 = d.rabi(1) * std::conj(d.rabi(2)) / omega_sq;
  const cplx damp = std::exp(kI * rate.alpha * z);

  SpectralPair out;
  out.mode1.resize(n);
  out.mode2.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx ea = std::exp(kI * omega[k] * z * rate.inv_va);
    const cplx eb = std::exp(kI * omega[k] * z * rate.inv_vb) * damp;
    out.mode1[k] = (o1 * ea + o2 * eb) / omega_sq * spec1[k] + w12 * (ea - eb) * spec2[k];
    out.mode2[k] = (o2 * ea + o1 * eb) / omega_sq * spec2[k] + std::conj(w12) * (ea - eb) * spec1[k];
  }
  return out;
}

double recovery_length(const OscillationRate& rate, int n) {
  if (n <= 0) throw ParameterError("n", "recovery index must be a positive integer");
  if (rate.alpha.real() == 0.0) throw SingularityError("no mode oscillation: Re(alpha) = 0");
  return 2.0 * kPi * n / std::abs(rate.alpha.real());
}

std::vector<double> unwrap_phase(std::span<const double> phases) {
  std::vector<double> out(phases.begin(), phases.end());
  double offset = 0.0;
  for (std::size_t k = 1; k < out.size(); ++k) {
    const double jump = phases[k] - phases[k - 1];
    if (jump > kPi) offset -= 2.0 * kPi;
    else if (jump < -kPi) offset += 2.0 * kPi;
    out[k] = phases[k] + offset;
  }
  return out;
}

}  // namespace dlmem
