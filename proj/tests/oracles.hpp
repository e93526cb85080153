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

// Independent reference solutions used by the tests.

#ifndef DLMEM_TESTS_ORACLES_HPP
#define DLMEM_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "dlmem/params.hpp"

namespace oracle {

using dlmem::cplx;
using Mat2 = std::array<cplx, 4>;  // row-major

inline constexpr cplx kI{0.0, 1.0};

// Solves the 3x3 system a x = b by Gaussian elimination with partial pivoting.
inline std::array<cplx, 3> solve3(std::array<std::array<cplx, 3>, 3> a, std::array<cplx, 3> b) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < 3; ++r) {
      const cplx f = a[r][c] / a[c][c];
      for (int k = c; k < 3; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::array<cplx, 3> x{};
  for (int r = 2; r >= 0; --r) {
    cplx s = b[r];
    for (int k = r + 1; k < 3; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

// Steady-state optical coherences per unit field at envelope frequency omega
// (fields ~ exp(-i omega t)) with constant couplings: beta = X E.
inline Mat2 susceptibility(const dlmem::MediumParams& m, cplx c1, cplx c2, double omega) {
  const cplx d1{m.delta_p1, 0.5 * m.gamma2};
  const cplx d2{m.delta_p2, 0.5 * m.gamma2};
  const std::array<std::array<cplx, 3>, 3> a = {{{omega + d1, 0.0, c1},
                                                 {0.0, omega + d2, c2},
                                                 {-kI * std::conj(c1), -kI * std::conj(c2), m.gamma13 - kI * omega}}};
  const auto col1 = solve3(a, {-1.0, 0.0, 0.0});
  const auto col2 = solve3(a, {0.0, -1.0, 0.0});
  return {col1[0], col2[0], col1[1], col2[1]};
}

// exp(M) for a 2x2 matrix via Cayley-Hamilton.
inline Mat2 expm(const Mat2& m) {
  const cplx s = 0.5 * (m[0] + m[3]);
  const cplx h = 0.5 * (m[0] - m[3]);
  const cplx q = std::sqrt(h * h + m[1] * m[2]);
  const cplx ch = std::cosh(q);
  const cplx sh = std::abs(q) < 1e-8 ? 1.0 + q * q / 6.0 : std::sinh(q) / q;
  const cplx es = std::exp(s);
  return {es * (ch + sh * h), es * sh * m[1], es * sh * m[2], es * (ch - sh * h)};
}

// Transfer matrix E(z) = T E(0) of the field equations at frequency omega.
inline Mat2 transfer(const dlmem::MediumParams& m, cplx c1, cplx c2, double omega, double z) {
  const Mat2 x = susceptibility(m, c1, c2, omega);
  const cplx f = kI * m.kappa12 * z;
  return expm({f * x[0], f * x[1], f * x[2], f * x[3]});
}

// In-place radix-2 FFT: a_n <- sum_k a_k exp(sign i 2 pi n k / N).
inline void fft(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * dlmem::kPi / static_cast<double>(len);
    const cplx wl = std::polar(1.0, ang);
    for (std::size_t i = 0; i < n; i += len) {
      cplx w = 1.0;
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

struct Columns {
  std::vector<cplx> e1, e2;
};

// Exact output at z for boundary samples on t_k = k dt (k < n_pad, n_pad a
// power of two, zero-padded by the caller), constant couplings.
inline Columns exact_output(const Columns& in, double dt, const dlmem::MediumParams& m, cplx c1, cplx c2, double z) {
  const std::size_t n = in.e1.size();
  std::vector<cplx> s1 = in.e1, s2 = in.e2;
  fft(s1, +1);  // E~(omega_n) ~ sum_k E_k exp(+i omega_n t_k)
  fft(s2, +1);
  for (std::size_t k = 0; k < n; ++k) {
    const double idx = k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
    const double omega = 2.0 * dlmem::kPi * idx / (static_cast<double>(n) * dt);
    const Mat2 t = transfer(m, c1, c2, omega, z);
    const cplx a = s1[k], b = s2[k];
    s1[k] = t[0] * a + t[1] * b;
    s2[k] = t[2] * a + t[3] * b;
  }
  fft(s1, -1);
  fft(s2, -1);
  for (std::size_t k = 0; k < n; ++k) {
    s1[k] /= static_cast<double>(n);
    s2[k] /= static_cast<double>(n);
  }
  return {s1, s2};
}

// Classical RK4 for the coherence equations, stage by stage, with the drive
// supplied as a function of time.
template <typename Field, typename Coupling>
std::vector<std::array<cplx, 3>> rk4_column(Field field, Coupling coupling, const dlmem::MediumParams& m, double dt,
                                            std::size_t nt) {
  const cplx d1{m.delta_p1, 0.5 * m.gamma2};
  const cplx d2{m.delta_p2, 0.5 * m.gamma2};
  auto rhs = [&](double t, const std::array<cplx, 3>& y) {
    const auto [e1, e2] = field(t);
    const auto [c1, c2] = coupling(t);
    return std::array<cplx, 3>{kI * (d1 * y[0] + e1 + c1 * y[2]), kI * (d2 * y[1] + e2 + c2 * y[2]),
                               kI * (std::conj(c1) * y[0] + std::conj(c2) * y[1]) - m.gamma13 * y[2]};
  };
  auto axpy = [](const std::array<cplx, 3>& y, double h, const std::array<cplx, 3>& k) {
    return std::array<cplx, 3>{y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]};
  };
  std::vector<std::array<cplx, 3>> out(nt);
  std::array<cplx, 3> y{};
  out[0] = y;
  for (std::size_t k = 0; k + 1 < nt; ++k) {
    const double t = static_cast<double>(k) * dt;
    const auto k1 = rhs(t, y);
    const auto k2 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k1));
    const auto k3 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k2));
    const auto k4 = rhs(t + dt, axpy(y, dt, k3));
    for (int j = 0; j < 3; ++j) y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    out[k + 1] = y;
  }
  return out;
}

}  // namespace oracle

#endif  // DLMEM_TESTS_ORACLES_HPP
