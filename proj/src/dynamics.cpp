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

#include "dlmem/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dlmem/errors.hpp"

namespace dlmem {
namespace {

constexpr cplx kI{0.0, 1.0};

// Stored arrays beyond this size must be subsampled with the store strides.
constexpr double kMaxStoredBytes = 4.0e9;

void check_atomic(const AtomicColumns& a, std::size_t z_index) {
  for (std::size_t k = 0; k < a.beta1.size(); ++k) {
    const double s = std::norm(a.beta1[k]) + std::norm(a.beta2[k]) + std::norm(a.g[k]);
    if (!std::isfinite(s)) throw DivergenceError(z_index, k, "non-finite atomic coherence");
  }
}

void resize(AtomicColumns& a, std::size_t n) {
  a.beta1.resize(n);
  a.beta2.resize(n);
  a.g.resize(n);
}

// y <- r y (3x3, row-major)
inline void apply3(const std::array<cplx, 9>& r, cplx& y0, cplx& y1, cplx& y2) {
  const cplx a = r[0] * y0 + r[1] * y1 + r[2] * y2;
  const cplx b = r[3] * y0 + r[4] * y1 + r[5] * y2;
  const cplx c = r[6] * y0 + r[7] * y1 + r[8] * y2;
  y0 = a;
  y1 = b;
  y2 = c;
}

// y += q e (3x2, row-major)
inline void add32(const std::array<cplx, 6>& q, cplx e1, cplx e2, cplx& y0, cplx& y1, cplx& y2) {
  y0 += q[0] * e1 + q[1] * e2;
  y1 += q[2] * e1 + q[3] * e2;
  y2 += q[4] * e1 + q[5] * e2;
}

void check_field(const ModeColumns& e, double limit_sq, std::size_t z_index) {
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double s = std::norm(e.e1[k]) + std::norm(e.e2[k]);
    if (!std::isfinite(s)) throw DivergenceError(z_index, k, "non-finite field");
    if (limit_sq > 0.0 && s > limit_sq) throw DivergenceError(z_index, k, "field exceeds 1e6 x input peak");
  }
}

PeakSample peak_of(const ModeColumns& e, double z, double dt, double norm) {
  PeakSample s;
  s.z = z;
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double v = std::norm(e.e1[k]) + std::norm(e.e2[k]);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  s.t_peak = static_cast<double>(best) * dt;
  if (norm > 0.0) {
    s.i1 = std::norm(e.e1[best]) / norm;
    s.i2 = std::norm(e.e2[best]) / norm;
  }
  const cplx cross = e.e1[best] * std::conj(e.e2[best]);
  s.phase12 = cross == cplx{} ? 0.0 : wrap_phase(std::arg(cross));
  s.energy = column_energy(e, dt);
  return s;
}

std::vector<std::size_t> strided_indices(std::size_t n, std::size_t stride) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < n; k += stride) idx.push_back(k);
  if (idx.back() != n - 1) idx.push_back(n - 1);
  return idx;
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b, std::size_t stride_b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k * stride_b]));
  return d;
}

void fill_ratios(std::vector<RefinementLevel>& levels) {
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    const double next = levels[k + 1].diff_norm;
    levels[k].ratio = next > 0.0 ? levels[k].diff_norm / next : 0.0;
  }
}

}  // namespace

void SpaceTimeGrid::check() const {
  if (nz < 2) throw ParameterError("grid.nz", "need at least 2 z samples");
  if (nt < 2) throw ParameterError("grid.nt", "need at least 2 t samples");
  if (!(z_max > 0.0) || !std::isfinite(z_max)) throw ParameterError("grid.z_max", "must be > 0");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ParameterError("grid.t_max", "must be > 0");
}

void SpaceTimeGrid::check(const MediumParams& m, const CouplingDrive& d) const {
  check();
  const double bound = max_time_step(m, d);
  if (dt() > bound * (1.0 + 1e-12)) {
    throw ParameterError("grid.nt", "time step " + std::to_string(dt()) + " exceeds the stiffness bound " +
                                        std::to_string(bound) + " (need nt >= " +
                                        std::to_string(min_time_samples(m, d, t_max)) + ")");
  }
}

double max_time_step(const MediumParams& m, const CouplingDrive& d) {
  const double fastest = std::max({std::abs(m.delta_p1), std::abs(m.delta_p2), std::sqrt(d.total_rabi_sq()),
                                   m.gamma2});
  if (fastest == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (20.0 * fastest);
}

std::size_t min_time_samples(const MediumParams& m, const CouplingDrive& d, double t_max) {
  const double bound = max_time_step(m, d);
  if (!std::isfinite(bound)) return 2;
  return static_cast<std::size_t>(std::ceil(t_max / bound - 1e-9)) + 1;
}

DriveColumn DriveColumn::from_samples(ModeColumns samples) {
  DriveColumn c;
  const std::size_t n = samples.size();
  c.mids.e1.resize(n > 0 ? n - 1 : 0);
  c.mids.e2.resize(n > 0 ? n - 1 : 0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    c.mids.e1[k] = 0.5 * (samples.e1[k] + samples.e1[k + 1]);
    c.mids.e2[k] = 0.5 * (samples.e2[k] + samples.e2[k + 1]);
  }
  c.nodes = std::move(samples);
  return c;
}

DriveColumn DriveColumn::from_function(const std::function<cplx(int, double)>& f, double dt, std::size_t nt) {
  DriveColumn c;
  c.nodes.e1.resize(nt);
  c.nodes.e2.resize(nt);
  c.mids.e1.resize(nt - 1);
  c.mids.e2.resize(nt - 1);
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = static_cast<double>(k) * dt;
    c.nodes.e1[k] = f(1, t);
    c.nodes.e2[k] = f(2, t);
    if (k + 1 < nt) {
      c.mids.e1[k] = f(1, t + 0.5 * dt);
      c.mids.e2[k] = f(2, t + 0.5 * dt);
    }
  }
  return c;
}

CouplingColumn CouplingColumn::sample(const CouplingDrive& d, double dt, std::size_t nt) {
  CouplingColumn c;
  c.c1.resize(nt);
  c.c2.resize(nt);
  c.c1_mid.resize(nt - 1);
  c.c2_mid.resize(nt - 1);
  const cplx r1 = d.rabi(1);
  const cplx r2 = d.rabi(2);
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double f = d.schedule.factor(t);
    c.c1[k] = r1 * f;
    c.c2[k] = r2 * f;
    if (k + 1 < nt) {
      const double fm = d.schedule.factor(t + 0.5 * dt);
      c.c1_mid[k] = r1 * fm;
      c.c2_mid[k] = r2 * fm;
    }
  }
  return c;
}

AtomicState atomic_rhs(cplx e1, cplx e2, const AtomicState& s, const MediumParams& m, cplx c1, cplx c2) {
  const cplx d1 = complex_detuning(m, 1);
  const cplx d2 = complex_detuning(m, 2);
  return {kI * (d1 * s.beta1 + e1 + c1 * s.g), kI * (d2 * s.beta2 + e2 + c2 * s.g),
          kI * (std::conj(c1) * s.beta1 + std::conj(c2) * s.beta2) - m.gamma13 * s.g};
}

AtomicState rk4_step(const AtomicState& y, const FieldPair& e_a, const FieldPair& e_m, const FieldPair& e_b,
                     const MediumParams& m, cplx c1_a, cplx c1_m, cplx c1_b, cplx c2_a, cplx c2_m, cplx c2_b,
                     double dt) {
  auto shifted = [&y](const AtomicState& k, double h) {
    return AtomicState{y.beta1 + h * k.beta1, y.beta2 + h * k.beta2, y.g + h * k.g};
  };
  const AtomicState k1 = atomic_rhs(e_a.e1, e_a.e2, y, m, c1_a, c2_a);
  const AtomicState k2 = atomic_rhs(e_m.e1, e_m.e2, shifted(k1, 0.5 * dt), m, c1_m, c2_m);
  const AtomicState k3 = atomic_rhs(e_m.e1, e_m.e2, shifted(k2, 0.5 * dt), m, c1_m, c2_m);
  const AtomicState k4 = atomic_rhs(e_b.e1, e_b.e2, shifted(k3, dt), m, c1_b, c2_b);
  const double w = dt / 6.0;
  return {y.beta1 + w * (k1.beta1 + 2.0 * (k2.beta1 + k3.beta1) + k4.beta1),
          y.beta2 + w * (k1.beta2 + 2.0 * (k2.beta2 + k3.beta2) + k4.beta2),
          y.g + w * (k1.g + 2.0 * (k2.g + k3.g) + k4.g)};
}

ColumnPropagator::ColumnPropagator(const MediumParams& m, const CouplingDrive& d, double dt, std::size_t nt)
    : nt_(nt), dt_(dt) {
  if (nt < 2) throw ParameterError("grid.nt", "need at least 2 t samples");
  const CouplingColumn cc = CouplingColumn::sample(d, dt, nt);
  const std::size_t n_ops = d.schedule.kind == ScheduleKind::constant ? 1 : nt - 1;
  ops_.resize(n_ops);
  const FieldPair zero{};
  const FieldPair unit[2] = {{1.0, 0.0}, {0.0, 1.0}};
  const AtomicState basis[3] = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
  for (std::size_t k = 0; k < n_ops; ++k) {
    auto step = [&](const AtomicState& y, const FieldPair& ea, const FieldPair& em, const FieldPair& eb) {
      return rk4_step(y, ea, em, eb, m, cc.c1[k], cc.c1_mid[k], cc.c1[k + 1], cc.c2[k], cc.c2_mid[k], cc.c2[k + 1],
                      dt);
    };
    StepOperator& op = ops_[k];
    for (int j = 0; j < 3; ++j) {
      const AtomicState col = step(basis[j], zero, zero, zero);
      op.r[j] = col.beta1;
      op.r[3 + j] = col.beta2;
      op.r[6 + j] = col.g;
    }
    for (int j = 0; j < 2; ++j) {
      const AtomicState ca = step({}, unit[j], zero, zero);
      const AtomicState cm = step({}, zero, unit[j], zero);
      const AtomicState cb = step({}, zero, zero, unit[j]);
      op.m[j] = cm.beta1;
      op.m[2 + j] = cm.beta2;
      op.m[4 + j] = cm.g;
      op.p[j] = ca.beta1 + 0.5 * cm.beta1;
      op.p[2 + j] = ca.beta2 + 0.5 * cm.beta2;
      op.p[4 + j] = ca.g + 0.5 * cm.g;
      op.q[j] = cb.beta1 + 0.5 * cm.beta1;
      op.q[2 + j] = cb.beta2 + 0.5 * cm.beta2;
      op.q[4 + j] = cb.g + 0.5 * cm.g;
    }
  }
}

void ColumnPropagator::march(const ModeColumns& e, std::size_t z_index, AtomicColumns& out) const {
  if (e.e1.size() != nt_ || e.e2.size() != nt_) {
    throw ParameterError("grid.nt", "field column length differs from the propagator grid");
  }
  resize(out, nt_);
  cplx b1{}, b2{}, g{};
  out.beta1[0] = b1;
  out.beta2[0] = b2;
  out.g[0] = g;
  for (std::size_t k = 0; k + 1 < nt_; ++k) {
    const StepOperator& o = op(k);
    apply3(o.r, b1, b2, g);
    add32(o.p, e.e1[k], e.e2[k], b1, b2, g);
    add32(o.q, e.e1[k + 1], e.e2[k + 1], b1, b2, g);
    out.beta1[k + 1] = b1;
    out.beta2[k + 1] = b2;
    out.g[k + 1] = g;
  }
  check_atomic(out, z_index);
}

AtomicColumns ColumnPropagator::march(const ModeColumns& e, std::size_t z_index) const {
  AtomicColumns out;
  march(e, z_index, out);
  return out;
}

AtomicColumns ColumnPropagator::march(const DriveColumn& drive, std::size_t z_index) const {
  if (drive.nodes.size() != nt_ || drive.mids.size() + 1 != nt_) {
    throw ParameterError("grid.nt", "drive column length differs from the propagator grid");
  }
  AtomicColumns out;
  resize(out, nt_);
  cplx b1{}, b2{}, g{};
  out.beta1[0] = b1;
  out.beta2[0] = b2;
  out.g[0] = g;
  const ModeColumns& n = drive.nodes;
  for (std::size_t k = 0; k + 1 < nt_; ++k) {
    const StepOperator& o = op(k);
    // the interpolated half-step value is folded into p and q; undo it here
    const cplx d1 = drive.mids.e1[k] - 0.5 * (n.e1[k] + n.e1[k + 1]);
    const cplx d2 = drive.mids.e2[k] - 0.5 * (n.e2[k] + n.e2[k + 1]);
    apply3(o.r, b1, b2, g);
    add32(o.p, n.e1[k], n.e2[k], b1, b2, g);
    add32(o.q, n.e1[k + 1], n.e2[k + 1], b1, b2, g);
    add32(o.m, d1, d2, b1, b2, g);
    out.beta1[k + 1] = b1;
    out.beta2[k + 1] = b2;
    out.g[k + 1] = g;
  }
  check_atomic(out, z_index);
  return out;
}

void ColumnPropagator::advance_trapezoidal(const ModeColumns& e, const AtomicColumns& beta, double kappa12, double dz,
                                           std::size_t z_index, ModeColumns& e_next, AtomicColumns& beta_next) {
  if (e.e1.size() != nt_ || beta.beta1.size() != nt_) {
    throw ParameterError("grid.nt", "field and coherence columns have different lengths");
  }
  const cplx c = 0.5 * kI * kappa12 * dz;
  if (c != solve_c_ || solve_.size() != ops_.size()) {
    solve_.resize(ops_.size());
    for (std::size_t k = 0; k < ops_.size(); ++k) {
      // inverse of I - c Q_beta, Q_beta the upper 2x2 block of q
      const auto& q = ops_[k].q;
      const cplx a11 = 1.0 - c * q[0], a12 = -c * q[1];
      const cplx a21 = -c * q[2], a22 = 1.0 - c * q[3];
      const cplx det = a11 * a22 - a12 * a21;
      if (std::abs(det) < 1e-300) throw SingularityError("singular trapezoidal step matrix");
      solve_[k] = {a22 / det, -a12 / det, -a21 / det, a11 / det};
    }
    solve_c_ = c;
  }
  e_next.e1.resize(nt_);
  e_next.e2.resize(nt_);
  resize(beta_next, nt_);
  cplx x1 = e.e1[0] + c * beta.beta1[0];
  cplx x2 = e.e2[0] + c * beta.beta2[0];
  cplx b1{}, b2{}, g{};
  e_next.e1[0] = x1;
  e_next.e2[0] = x2;
  beta_next.beta1[0] = b1;
  beta_next.beta2[0] = b2;
  beta_next.g[0] = g;
  for (std::size_t k = 0; k + 1 < nt_; ++k) {
    const std::size_t j = ops_.size() == 1 ? 0 : k;
    const StepOperator& o = ops_[j];
    const std::array<cplx, 4>& s = solve_[j];
    apply3(o.r, b1, b2, g);
    add32(o.p, x1, x2, b1, b2, g);
    const cplx r1 = e.e1[k + 1] + c * (beta.beta1[k + 1] + b1);
    const cplx r2 = e.e2[k + 1] + c * (beta.beta2[k + 1] + b2);
    x1 = s[0] * r1 + s[1] * r2;
    x2 = s[2] * r1 + s[3] * r2;
    add32(o.q, x1, x2, b1, b2, g);
    e_next.e1[k + 1] = x1;
    e_next.e2[k + 1] = x2;
    beta_next.beta1[k + 1] = b1;
    beta_next.beta2[k + 1] = b2;
    beta_next.g[k + 1] = g;
  }
  check_atomic(beta_next, z_index);
}

AtomicColumns march_column(const DriveColumn& drive, const CouplingDrive& coupling, const MediumParams& m,
                           double dt, std::size_t z_index) {
  return ColumnPropagator(m, coupling, dt, drive.nodes.size()).march(drive, z_index);
}

ModeColumns advance_field(const ModeColumns& e, const AtomicColumns& beta_here, const AtomicColumns* beta_next,
                          double kappa12, double dz, ZStepper stepper) {
  const std::size_t nt = e.size();
  if (beta_here.beta1.size() != nt || (beta_next && beta_next->beta1.size() != nt)) {
    throw ParameterError("grid.nt", "field and coherence columns have different lengths");
  }
  if (stepper == ZStepper::predictor_corrector && beta_next == nullptr) {
    throw ParameterError("z_stepper", "predictor-corrector needs the provisional coherences at z + dz");
  }
  ModeColumns out;
  out.e1.resize(nt);
  out.e2.resize(nt);
  const cplx gain = kI * kappa12 * dz;
  if (stepper == ZStepper::euler) {
    for (std::size_t k = 0; k < nt; ++k) {
      out.e1[k] = e.e1[k] + gain * beta_here.beta1[k];
      out.e2[k] = e.e2[k] + gain * beta_here.beta2[k];
    }
  } else {
    const cplx half = 0.5 * gain;
    for (std::size_t k = 0; k < nt; ++k) {
      out.e1[k] = e.e1[k] + half * (beta_here.beta1[k] + beta_next->beta1[k]);
      out.e2[k] = e.e2[k] + half * (beta_here.beta2[k] + beta_next->beta2[k]);
    }
  }
  return out;
}

double EvolutionRecord::lab_time(double t_retarded, double z) const noexcept {
  return std::isinf(c_light) ? t_retarded : t_retarded + z / c_light;
}

ModeColumns sample_probe(const ProbeInput& p, const SpaceTimeGrid& grid) {
  p.check();
  ModeColumns b;
  b.e1.resize(grid.nt);
  b.e2.resize(grid.nt);
  for (std::size_t k = 0; k < grid.nt; ++k) {
    b.e1[k] = p.envelope(1, grid.t(k));
    b.e2[k] = p.envelope(2, grid.t(k));
  }
  return b;
}

double column_energy(const ModeColumns& c, double dt) {
  const std::size_t n = c.size();
  if (n < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    sum += w * (std::norm(c.e1[k]) + std::norm(c.e2[k]));
  }
  return sum * dt;
}

EvolutionRecord simulate(const MediumParams& m, const CouplingDrive& d, const ProbeInput& p,
                         const SpaceTimeGrid& grid, const IntegratorConfig& cfg) {
  return simulate(m, d, sample_probe(p, grid), grid, cfg);
}

EvolutionRecord simulate(const MediumParams& m, const CouplingDrive& d, const ModeColumns& boundary,
                         const SpaceTimeGrid& grid, const IntegratorConfig& cfg) {
  m.check();
  d.check();
  grid.check(m, d);
  if (boundary.e1.size() != grid.nt || boundary.e2.size() != grid.nt) {
    throw ParameterError("grid.nt", "boundary columns must have nt samples");
  }
  if (cfg.store_stride_z == 0 || cfg.store_stride_t == 0) {
    throw ParameterError("store_stride", "strides must be >= 1");
  }

  EvolutionRecord rec;
  rec.grid = grid;
  rec.c_light = m.c_light;
  rec.stride_z = cfg.store_stride_z;
  rec.stride_t = cfg.store_stride_t;
  rec.z_index = strided_indices(grid.nz, cfg.store_stride_z);
  rec.t_index = strided_indices(grid.nt, cfg.store_stride_t);
  const double stored_bytes = 5.0 * 16.0 * static_cast<double>(rec.z_index.size()) *
                              static_cast<double>(rec.t_index.size());
  if (stored_bytes > kMaxStoredBytes) {
    throw ParameterError("store_stride", "stored record would need " + std::to_string(stored_bytes / 1e9) +
                                             " GB; increase the store strides");
  }
  for (FieldArray* a : {&rec.e1, &rec.e2, &rec.beta1, &rec.beta2, &rec.g}) {
    *a = FieldArray(rec.z_index.size(), rec.t_index.size());
  }

  const double dt = grid.dt();
  const double dz = grid.dz();
  rec.input = boundary;
  for (std::size_t k = 0; k < grid.nt; ++k) {
    rec.input_peak_intensity = std::max(rec.input_peak_intensity, std::norm(boundary.e1[k]) + std::norm(boundary.e2[k]));
  }
  const double limit_sq = rec.input_peak_intensity * 1e12;
  ColumnPropagator prop(m, d, dt, grid.nt);

  ModeColumns field = boundary, field_next;
  AtomicColumns here, next;
  prop.march(field, 0, here);
  std::size_t stored_row = 0;
  rec.peaks.reserve(grid.nz);
  for (std::size_t iz = 0; iz < grid.nz; ++iz) {
    rec.peaks.push_back(peak_of(field, grid.z(iz), dt, rec.input_peak_intensity));
    if (stored_row < rec.z_index.size() && rec.z_index[stored_row] == iz) {
      for (std::size_t c = 0; c < rec.t_index.size(); ++c) {
        const std::size_t k = rec.t_index[c];
        rec.e1(stored_row, c) = field.e1[k];
        rec.e2(stored_row, c) = field.e2[k];
        rec.beta1(stored_row, c) = here.beta1[k];
        rec.beta2(stored_row, c) = here.beta2[k];
        rec.g(stored_row, c) = here.g[k];
      }
      ++stored_row;
    }
    if (iz + 1 == grid.nz) break;

    switch (cfg.z_stepper) {
      case ZStepper::euler:
        field = advance_field(field, here, nullptr, m.kappa12, dz, ZStepper::euler);
        check_field(field, limit_sq, iz + 1);
        prop.march(field, iz + 1, here);
        break;
      case ZStepper::predictor_corrector: {
        const ModeColumns predicted = advance_field(field, here, nullptr, m.kappa12, dz, ZStepper::euler);
        check_field(predicted, limit_sq, iz + 1);
        prop.march(predicted, iz + 1, next);
        field = advance_field(field, here, &next, m.kappa12, dz, ZStepper::predictor_corrector);
        check_field(field, limit_sq, iz + 1);
        prop.march(field, iz + 1, here);
        break;
      }
      case ZStepper::trapezoidal:
        prop.advance_trapezoidal(field, here, m.kappa12, dz, iz + 1, field_next, next);
        std::swap(field, field_next);
        std::swap(here, next);
        check_field(field, limit_sq, iz + 1);
        break;
    }
  }
  rec.output = field;

  if (cfg.check_truncation) {
    const double e_in = column_energy(rec.input, dt);
    if (e_in > 0.0) {
      const std::size_t start = static_cast<std::size_t>(std::floor(0.95 * static_cast<double>(grid.nt - 1)));
      ModeColumns tail;
      tail.e1.assign(rec.output.e1.begin() + static_cast<std::ptrdiff_t>(start), rec.output.e1.end());
      tail.e2.assign(rec.output.e2.begin() + static_cast<std::ptrdiff_t>(start), rec.output.e2.end());
      const double e_tail = column_energy(tail, dt);
      if (e_tail > 0.01 * e_in) {
        throw TruncationError("pulse not contained in the time window: " + std::to_string(100.0 * e_tail / e_in) +
                              "% of the input energy leaves in the final 5% of the window; increase t_max");
      }
    }
  }
  return rec;
}

ConvergenceReport convergence_study(const MediumParams& m, const CouplingDrive& d, const ProbeInput& p,
                                    const SpaceTimeGrid& base, const IntegratorConfig& cfg, std::size_t levels) {
  if (levels < 2) throw ParameterError("levels", "convergence study needs at least 2 refinement levels");
  base.check(m, d);
  ConvergenceReport report;

  IntegratorConfig run_cfg = cfg;
  run_cfg.store_stride_z = std::numeric_limits<std::size_t>::max() / 2;
  run_cfg.store_stride_t = std::numeric_limits<std::size_t>::max() / 2;
  std::vector<ModeColumns> outputs;
  for (std::size_t lvl = 0; lvl < levels; ++lvl) {
    SpaceTimeGrid g = base;
    g.nz = (base.nz - 1) * (std::size_t{1} << lvl) + 1;
    outputs.push_back(simulate(m, d, p, g, run_cfg).output);
    report.z_levels.push_back({g.nz, g.nt, g.dz(), 0.0, 0.0});
  }
  for (std::size_t lvl = 0; lvl + 1 < levels; ++lvl) {
    report.z_levels[lvl].diff_norm = std::max(max_abs_diff(outputs[lvl].e1, outputs[lvl + 1].e1, 1),
                                              max_abs_diff(outputs[lvl].e2, outputs[lvl + 1].e2, 1));
  }
  fill_ratios(report.z_levels);

  std::vector<AtomicColumns> columns;
  auto probe_fn = [&p](int mode, double t) { return p.envelope(mode, t); };
  for (std::size_t lvl = 0; lvl < levels; ++lvl) {
    SpaceTimeGrid g = base;
    g.nt = (base.nt - 1) * (std::size_t{1} << lvl) + 1;
    const DriveColumn drive = DriveColumn::from_function(probe_fn, g.dt(), g.nt);
    columns.push_back(march_column(drive, d, m, g.dt()));
    report.t_levels.push_back({g.nz, g.nt, g.dt(), 0.0, 0.0});
  }
  for (std::size_t lvl = 0; lvl + 1 < levels; ++lvl) {
    const AtomicColumns& a = columns[lvl];
    const AtomicColumns& b = columns[lvl + 1];
    report.t_levels[lvl].diff_norm = std::max({max_abs_diff(a.beta1, b.beta1, 2), max_abs_diff(a.beta2, b.beta2, 2),
                                               max_abs_diff(a.g, b.g, 2)});
  }
  fill_ratios(report.t_levels);
  return report;
}

}  // namespace dlmem
