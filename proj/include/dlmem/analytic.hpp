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

// Closed-form propagation model of the two-colour pulse in the adiabatic,
// linear-dispersion approximation.
//
// Conventions: E(t) = \int E~(omega) exp(-i omega t) d omega, so a delay by
// z/v multiplies the spectrum by exp(i omega z / v). The input relative phase
// varphi12 is arg[E_1 E_2^*] at z = 0 and the coupling phase difference is
// phi12 = phi1 - phi2.

#ifndef DLMEM_ANALYTIC_HPP
#define DLMEM_ANALYTIC_HPP

#include <span>
#include <utility>
#include <vector>

#include "dlmem/params.hpp"

namespace dlmem {

struct OscillationRate {
  cplx alpha;           // Re: spatial oscillation rate, Im: spatial damping rate
  double inv_va = 0.0;  // 1/v_a
  cplx inv_vb;          // 1/v_b, complex when gamma2 > 0

  double v_a() const noexcept { return 1.0 / inv_va; }
  double v_b() const noexcept { return 1.0 / inv_vb.real(); }
};

/// Exact alpha = -kappa12 |Omega|^2 / D and both group velocities.
/// Throws SingularityError when |Omega|^2 = 0 or D = 0.
OscillationRate oscillation_rate(const MediumParams& m, const CouplingDrive& d);

/// -2 kappa12/delta_p2 + i 2 kappa12 gamma2/delta_p2^2, valid for equal
/// couplings, delta_p1 = 0 and delta_p2 >> gamma2.
cplx simplified_alpha(const MediumParams& m);

struct ModePair {
  cplx e1;
  cplx e2;
};

/// Two-by-two mode-mixing map for equal coupling magnitudes applied to the
/// boundary values already evaluated at retarded time:
///   E_j(z) = 1/2 [E_j(0)(1 + e^{i alpha z}) + E_l(0) e^{i phi_jl}(1 - e^{i alpha z})].
ModePair propagate_envelope(ModePair boundary, const OscillationRate& rate, const CouplingDrive& d,
                            double z);
ModePair propagate_envelope(ModePair boundary, const MediumParams& m, const CouplingDrive& d, double z);

enum class VelocityModel {
  merged,       // v_a = v_b = v, equal-coupling map
  two_velocity  // a and b branches delayed separately, general couplings
};

/// Time-domain field of a Gaussian probe at (z, t).
ModePair pulse_field(const ProbeInput& p, const OscillationRate& rate, const CouplingDrive& d, double z,
                     double t, VelocityModel model = VelocityModel::merged);

struct ModeState {
  double i1 = 0.0;
  double i2 = 0.0;
  double phase12 = 0.0;
  cplx amp1;
  cplx amp2;
};

/// Normalized peak intensities I_1(z), I_2(z) from the three-term intensity
/// expression (damping and cross terms retained).
std::pair<double, double> intensity_profile(const ProbeInput& p, const CouplingDrive& d,
                                            const OscillationRate& rate, double z);

/// Phi_12(z) = arg[E_1 E_2^*] at the pulse peak, reduced to (-pi, pi].
/// Throws SingularityError when either mode vanishes at z.
double phase_profile(const ProbeInput& p, const CouplingDrive& d, const OscillationRate& rate, double z);

/// Peak amplitudes, intensities and phase at z in one call.
ModeState mode_state(const ProbeInput& p, const CouplingDrive& d, const OscillationRate& rate, double z);

struct SpectralPair {
  std::vector<cplx> mode1;
  std::vector<cplx> mode2;
};

/// Applies the two-velocity transfer matrix to boundary spectra sampled on a
/// frequency grid symmetric about zero.
SpectralPair frequency_domain_solution(std::span<const cplx> spec1, std::span<const cplx> spec2,
                                       const MediumParams& m, const CouplingDrive& d, double z,
                                       std::span<const double> omega);

/// 2 pi n / |Re(alpha)|.
double recovery_length(const OscillationRate& rate, int n);

/// Removes 2 pi jumps between consecutive samples.
std::vector<double> unwrap_phase(std::span<const double> phases);

}  // namespace dlmem

#endif  // DLMEM_ANALYTIC_HPP
