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

// Space-marching integrator for the coupled field/coherence equations
//
//   dE_j/dz     = i kappa12 beta_j                       (retarded frame)
//   dbeta_j/dt  = i Delta_pj beta_j + i E_j + i g Omega_cj(t)
//   dg/dt       = i [Omega_c1^* beta_1 + Omega_c2^* beta_2] - gamma13 g
//
// with Delta_pj = delta_pj + i gamma2/2. At every z the atomic variables are
// integrated in t with fixed-step RK4 from zero initial coherences, then the
// field is advanced one step in z.
//
// The coherence equations are linear, so one RK4 step is an affine map
//   y_{k+1} = R_k y_k + A_k E(t_k) + M_k E(t_k + dt/2) + B_k E(t_{k+1})
// whose matrices depend only on the couplings. They are obtained by running
// the RK4 stages on unit inputs once per simulation and reused for every z.

#ifndef DLMEM_DYNAMICS_HPP
#define DLMEM_DYNAMICS_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dlmem/params.hpp"

namespace dlmem {

struct SpaceTimeGrid {
  std::size_t nz = 2;  // z samples including z = 0
  std::size_t nt = 2;  // t samples including t = 0
  double z_max = 1.0;
  double t_max = 1.0;

  double dz() const noexcept { return z_max / static_cast<double>(nz - 1); }
  double dt() const noexcept { return t_max / static_cast<double>(nt - 1); }
  double z(std::size_t i) const noexcept { return static_cast<double>(i) * dz(); }
  double t(std::size_t k) const noexcept { return static_cast<double>(k) * dt(); }

  /// Shape checks only (nz, nt >= 2, positive extents).
  void check() const;
  /// Shape checks plus the stiffness bound dt <= max_time_step(m, d).
  void check(const MediumParams& m, const CouplingDrive& d) const;
};

/// 1 / (20 max(|delta_p1|, |delta_p2|, |Omega|, gamma2)).
double max_time_step(const MediumParams& m, const CouplingDrive& d);
/// Smallest nt whose step satisfies the stiffness bound over [0, t_max].
std::size_t min_time_samples(const MediumParams& m, const CouplingDrive& d, double t_max);

enum class ZStepper {
  euler,                // E(z+dz) = E(z) + i kappa12 dz beta(z)
  predictor_corrector,  // Euler predictor, trapezoidal corrector (explicit)
  trapezoidal           // trapezoidal rule solved exactly per time step (implicit)
};

struct IntegratorConfig {
  ZStepper z_stepper = ZStepper::trapezoidal;
  // Subsampling of the stored (z, t) arrays. Input/output columns and the
  // per-z peak observables are always kept at full resolution.
  std::size_t store_stride_z = 1;
  std::size_t store_stride_t = 1;
  bool check_truncation = true;
};

/// Field values of both modes on the time grid.
struct ModeColumns {
  std::vector<cplx> e1;
  std::vector<cplx> e2;

  std::size_t size() const noexcept { return e1.size(); }
};

/// Field samples at the nodes and at the RK4 half steps.
struct DriveColumn {
  ModeColumns nodes;
  ModeColumns mids;  // size nt - 1

  /// Half-step values by linear interpolation between bracketing samples.
  static DriveColumn from_samples(ModeColumns samples);
  /// Exact evaluation of f(mode, t) at nodes and half steps.
  static DriveColumn from_function(const std::function<cplx(int, double)>& f, double dt, std::size_t nt);
};

/// Gated coupling values at the nodes and at the RK4 half steps.
struct CouplingColumn {
  std::vector<cplx> c1, c2;
  std::vector<cplx> c1_mid, c2_mid;

  static CouplingColumn sample(const CouplingDrive& d, double dt, std::size_t nt);
};

struct AtomicState {
  cplx beta1;
  cplx beta2;
  cplx g;
};

struct FieldPair {
  cplx e1;
  cplx e2;
};

struct AtomicColumns {
  std::vector<cplx> beta1;
  std::vector<cplx> beta2;
  std::vector<cplx> g;
};

/// Right-hand sides of the coherence equations for instantaneous couplings c1, c2.
AtomicState atomic_rhs(cplx e1, cplx e2, const AtomicState& s, const MediumParams& m, cplx c1, cplx c2);

/// Classical RK4 step of the coherences with drive fields e_a, e_m, e_b at the
/// start, middle and end of the step.
AtomicState rk4_step(const AtomicState& y, const FieldPair& e_a, const FieldPair& e_m, const FieldPair& e_b,
                     const MediumParams& m, cplx c1_a, cplx c1_m, cplx c1_b, cplx c2_a, cplx c2_m, cplx c2_b,
                     double dt);

/// RK4 time stepping of the coherence columns for a fixed medium and coupling.
class ColumnPropagator {
 public:
  ColumnPropagator(const MediumParams& m, const CouplingDrive& d, double dt, std::size_t nt);

  std::size_t nt() const noexcept { return nt_; }
  double dt() const noexcept { return dt_; }

  /// Coherences driven by sampled fields, linearly interpolated at half steps.
  AtomicColumns march(const ModeColumns& e, std::size_t z_index = 0) const;
  void march(const ModeColumns& e, std::size_t z_index, AtomicColumns& out) const;
  /// Coherences driven by explicit node and half-step values.
  AtomicColumns march(const DriveColumn& drive, std::size_t z_index = 0) const;

  /// Trapezoidal z step E(z+dz) = E(z) + i kappa12 dz/2 [beta(z) + beta(z+dz)]
  /// with beta(z+dz) the coherences driven by E(z+dz) itself. Solved one time
  /// step at a time; returns the field and coherences at z + dz.
  /// Not safe for concurrent calls on one propagator.
  void advance_trapezoidal(const ModeColumns& e, const AtomicColumns& beta, double kappa12, double dz,
                           std::size_t z_index, ModeColumns& e_next, AtomicColumns& beta_next);

 private:
  // y_{k+1} = r y_k + p E(t_k) + q E(t_{k+1}) + m [E(t_k + dt/2) - (E(t_k) + E(t_{k+1}))/2]
  struct StepOperator {
    std::array<cplx, 9> r;  // 3x3, row-major
    std::array<cplx, 6> p;  // 3x2
    std::array<cplx, 6> q;
    std::array<cplx, 6> m;
  };
  const StepOperator& op(std::size_t k) const noexcept { return ops_[ops_.size() == 1 ? 0 : k]; }

  std::size_t nt_;
  double dt_;
  std::vector<StepOperator> ops_;
  cplx solve_c_{};
  std::vector<std::array<cplx, 4>> solve_;  // (I - c q_beta)^-1 per operator
};

/// RK4 integration of the coherences over the whole time column from
/// beta = g = 0. Throws DivergenceError (tagged with z_index) on non-finite values.
AtomicColumns march_column(const DriveColumn& drive, const CouplingDrive& coupling, const MediumParams& m,
                           double dt, std::size_t z_index = 0);

/// One explicit z step (euler or the predictor-corrector's corrector).
/// `beta_next` holds the coherences driven by the provisional field at z + dz.
ModeColumns advance_field(const ModeColumns& e, const AtomicColumns& beta_here, const AtomicColumns* beta_next,
                          double kappa12, double dz, ZStepper stepper);

/// Observables read at the time of maximum |E_1|^2 + |E_2|^2 in one z column.
struct PeakSample {
  double z = 0.0;
  double t_peak = 0.0;  // retarded time of the peak
  double i1 = 0.0;      // |E_1(t_peak)|^2 / max_t(|E_1(0,t)|^2 + |E_2(0,t)|^2)
  double i2 = 0.0;
  double phase12 = 0.0;  // arg[E_1 E_2^*] at t_peak
  double energy = 0.0;   // int (|E_1|^2 + |E_2|^2) dt
};

/// Row-major (z, t) array of complex samples.
class FieldArray {
 public:
  FieldArray() = default;
  FieldArray(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  bool operator==(const FieldArray&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

struct EvolutionRecord {
  SpaceTimeGrid grid;
  double c_light = 0.0;  // for lab-frame times; infinity means retarded == lab
  std::size_t stride_z = 1;
  std::size_t stride_t = 1;
  std::vector<std::size_t> z_index;  // grid indices of stored rows
  std::vector<std::size_t> t_index;  // grid indices of stored columns
  FieldArray e1, e2, beta1, beta2, g;

  ModeColumns input;   // E_j(0, t), full time resolution
  ModeColumns output;  // E_j(z_max, t), full time resolution
  std::vector<PeakSample> peaks;  // one per z grid point

  double input_peak_intensity = 0.0;

  /// Lab-frame time for a retarded time sample at position z.
  double lab_time(double t_retarded, double z) const noexcept;
  bool empty() const noexcept { return z_index.empty() || t_index.empty(); }
};

/// Sampled Gaussian boundary columns for a probe.
ModeColumns sample_probe(const ProbeInput& p, const SpaceTimeGrid& grid);

/// Full space-time integration for a Gaussian probe.
EvolutionRecord simulate(const MediumParams& m, const CouplingDrive& d, const ProbeInput& p,
                         const SpaceTimeGrid& grid, const IntegratorConfig& cfg = {});
/// Full space-time integration for arbitrary sampled boundary columns.
EvolutionRecord simulate(const MediumParams& m, const CouplingDrive& d, const ModeColumns& boundary,
                         const SpaceTimeGrid& grid, const IntegratorConfig& cfg = {});

/// int_0^{t_max} (|E_1|^2 + |E_2|^2) dt by the trapezoidal rule.
double column_energy(const ModeColumns& c, double dt);

struct RefinementLevel {
  std::size_t nz = 0;
  std::size_t nt = 0;
  double step = 0.0;
  double diff_norm = 0.0;  // max-norm difference to the next finer level on the coarse samples
  double ratio = 0.0;      // diff_norm / next diff_norm (0 when undefined)
};

struct ConvergenceReport {
  std::vector<RefinementLevel> z_levels;
  std::vector<RefinementLevel> t_levels;
};

/// Successive refinements of dz (at fixed dt) on the output field column and of
/// dt on the z = 0 coherence column driven by the analytic probe. `levels` is
/// the number of grids per direction (>= 2); each level halves the step.
ConvergenceReport convergence_study(const MediumParams& m, const CouplingDrive& d, const ProbeInput& p,
                                    const SpaceTimeGrid& base, const IntegratorConfig& cfg, std::size_t levels);

}  // namespace dlmem

#endif  // DLMEM_DYNAMICS_HPP
