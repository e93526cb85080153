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

// Medium, coupling and probe parameters for a double-Lambda medium.
//
// Every operation in the library is unit-agnostic: any consistent set of
// units works. `tau` and `length` only anchor the dimensionless system used
// for reporting (rates times tau, lengths over L, kappa12 times tau*L).

#ifndef DLMEM_PARAMS_HPP
#define DLMEM_PARAMS_HPP

#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace dlmem {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct MediumParams {
  double kappa12 = 0.0;   // 1/(time*length)
  double gamma2 = 0.0;    // excited-state decay, 1/time
  double gamma13 = 0.0;   // ground-state decoherence, 1/time
  double delta_p1 = 0.0;  // one-photon detuning of mode 1, 1/time
  double delta_p2 = 0.0;  // one-photon detuning of mode 2, 1/time
  double length = 1.0;    // medium length L
  double tau = 1.0;       // probe time scale
  double c_light = std::numeric_limits<double>::infinity();

  /// Throws ParameterError naming the first violated invariant.
  void check() const;
  bool finite_light_speed() const noexcept { return c_light < std::numeric_limits<double>::infinity(); }
};

enum class ScheduleKind { constant, tanh_gate };

/// Switching schedule shared by both coupling legs. For `tanh_gate` the
/// drive is multiplied by {2 - tanh[sigma(t - t1)] + tanh[sigma(t - t2)]}/2.
struct SwitchSchedule {
  ScheduleKind kind = ScheduleKind::constant;
  double sigma = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;

  double factor(double t) const noexcept;
};

struct CouplingDrive {
  double amp1 = 0.0;  // |Omega_c1|
  double amp2 = 0.0;  // |Omega_c2|
  double phi1 = 0.0;
  double phi2 = 0.0;
  SwitchSchedule schedule;

  void check() const;
  /// Phase-carrying Rabi frequency amp_j * exp(i phi_j) of leg 1 or 2, ungated.
  cplx rabi(int mode) const;
  /// Instantaneous (gated) Rabi frequency of leg 1 or 2.
  cplx rabi_at(int mode, double t) const;
  double total_rabi_sq() const noexcept { return amp1 * amp1 + amp2 * amp2; }
  /// phi1 - phi2 reduced to (-pi, pi].
  double phase12() const noexcept;
  /// Copy with both phases reduced to (-pi, pi].
  CouplingDrive reduced() const;
};

/// Gaussian two-colour boundary pulse at z = 0:
///   E_1(0,t) = amp1 exp(-(t-t_c)^2/width^2)
///   E_2(0,t) = amp2 exp(-(t-t_c)^2/width^2) exp(-i varphi12)
/// so that arg[E_1 E_2^*] = varphi12.
struct ProbeInput {
  double amp1 = 0.0;
  double amp2 = 0.0;
  double varphi12 = 0.0;
  double t_center = 1.0;
  double width = 1.0;

  void check() const;
  cplx envelope(int mode, double t) const;
  /// Normalized input intensity amp1^2/(amp1^2 + amp2^2) of mode 1.
  double input_fraction1() const;
};

enum class RegimeWarningKind { weak_decay, simplified_alpha, adiabaticity };

struct RegimeWarning {
  RegimeWarningKind kind;
  std::string message;
};

/// Approximation-regime diagnostics. Never throws for regime problems; throws
/// ParameterError when an invariant is violated.
std::vector<RegimeWarning> validate(const MediumParams& m, const CouplingDrive& d);
std::vector<RegimeWarning> validate(const MediumParams& m, const CouplingDrive& d,
                                    const ProbeInput& p);

struct DimensionlessBundle {
  MediumParams medium;
  CouplingDrive drive;
  ProbeInput probe;
};

/// Rates scaled by tau, lengths by L, kappa12 by tau*L. The result carries
/// tau = length = 1.
DimensionlessBundle nondimensionalize(const MediumParams& m, const CouplingDrive& d,
                                      const ProbeInput& p);
/// Inverse of nondimensionalize for the given time and length scales.
DimensionlessBundle redimensionalize(const DimensionlessBundle& b, double tau, double length);

/// delta_pj + i gamma2/2. Mode must be 1 or 2.
cplx complex_detuning(const MediumParams& m, int mode);

/// Reduce an angle to (-pi, pi].
double wrap_phase(double phase) noexcept;

}  // namespace dlmem

#endif  // DLMEM_PARAMS_HPP
