#pragma once

// Ideal MHD: state conversions, fluxes, characteristic speeds and the
// eight-wave eigensystem used for characteristic-wise WENO.
//
// Units absorb the magnetic permeability: total pressure is p + |B|^2/2 and
// the Alfven velocity is B/sqrt(rho).

#include "fsmhd/core.hpp"
#include "fsmhd/grid.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace fsmhd {

inline constexpr double kDefaultGamma = 5.0 / 3.0;

struct Primitive {
  double rho = 1.0;
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  double p = 1.0;
  double bx = 0.0;
  double by = 0.0;
  double bz = 0.0;
};

inline Vec8 primitive_to_conserved(const Primitive& s, double gamma = kDefaultGamma) {
  if (!(s.rho > 0.0)) throw PhysicalStateError("non-positive density");
  if (!(s.p > 0.0)) throw PhysicalStateError("non-positive pressure");
  Vec8 q;
  q << s.rho, s.rho * s.u, s.rho * s.v, s.rho * s.w,
      s.p / (gamma - 1.0) + 0.5 * s.rho * (s.u * s.u + s.v * s.v + s.w * s.w) +
          0.5 * (s.bx * s.bx + s.by * s.by + s.bz * s.bz),
      s.bx, s.by, s.bz;
  return q;
}

inline double pressure(const Vec8& q, double gamma = kDefaultGamma) {
  const double kinetic = 0.5 * (q(kMx) * q(kMx) + q(kMy) * q(kMy) + q(kMz) * q(kMz)) / q(kRho);
  const double magnetic = 0.5 * (q(kBx) * q(kBx) + q(kBy) * q(kBy) + q(kBz) * q(kBz));
  return (gamma - 1.0) * (q(kEnergy) - kinetic - magnetic);
}

inline Primitive conserved_to_primitive(const Vec8& q, double gamma = kDefaultGamma) {
  if (!(q(kRho) > 0.0)) throw PhysicalStateError("non-positive density");
  Primitive s;
  s.rho = q(kRho);
  s.u = q(kMx) / s.rho;
  s.v = q(kMy) / s.rho;
  s.w = q(kMz) / s.rho;
  s.bx = q(kBx);
  s.by = q(kBy);
  s.bz = q(kBz);
  s.p = pressure(q, gamma);
  if (!(s.p > 0.0)) throw PhysicalStateError("non-positive pressure");
  return s;
}

/// Flux n_x f + n_y g for an arbitrary (not necessarily unit) direction.
inline Vec8 directional_flux(const Primitive& s, double nx, double ny, double gamma = kDefaultGamma) {
  const double un = s.u * nx + s.v * ny;
  const double bn = s.bx * nx + s.by * ny;
  const double b2 = s.bx * s.bx + s.by * s.by + s.bz * s.bz;
  const double pt = s.p + 0.5 * b2;
  const double energy =
      s.p / (gamma - 1.0) + 0.5 * s.rho * (s.u * s.u + s.v * s.v + s.w * s.w) + 0.5 * b2;
  const double ub = s.u * s.bx + s.v * s.by + s.w * s.bz;
  Vec8 f;
  f << s.rho * un,
      s.rho * s.u * un + pt * nx - s.bx * bn,
      s.rho * s.v * un + pt * ny - s.by * bn,
      s.rho * s.w * un - s.bz * bn,
      (energy + pt) * un - ub * bn,
      s.bx * un - s.u * bn,
      s.by * un - s.v * bn,
      s.bz * un - s.w * bn;
  return f;
}

enum class Axis { x, y };

inline Vec8 physical_flux(const Vec8& q, Axis axis, double gamma = kDefaultGamma) {
  const auto s = conserved_to_primitive(q, gamma);
  return axis == Axis::x ? directional_flux(s, 1.0, 0.0, gamma) : directional_flux(s, 0.0, 1.0, gamma);
}

/// kt q + kx f + ky g.
inline Vec8 transformed_flux(const Vec8& q, const DirectionalMetric& m, double gamma = kDefaultGamma) {
  const auto s = conserved_to_primitive(q, gamma);
  return m.kt * q + directional_flux(s, m.kx, m.ky, gamma);
}

struct WaveSpeeds {
  double sound = 0.0;
  double alfven = 0.0;  // normal Alfven speed |B_n|/sqrt(rho)
  double fast = 0.0;
  double slow = 0.0;
};

/// Characteristic speeds along the unit direction (nx, ny).
inline WaveSpeeds wave_speeds(const Primitive& s, double nx, double ny, double gamma = kDefaultGamma) {
  WaveSpeeds c;
  const double a2 = gamma * s.p / s.rho;
  const double bn2 = (s.bx * nx + s.by * ny) * (s.bx * nx + s.by * ny) / s.rho;
  const double b2 = (s.bx * s.bx + s.by * s.by + s.bz * s.bz) / s.rho;
  const double sum = a2 + b2;
  const double disc = std::sqrt(std::max(0.0, sum * sum - 4.0 * a2 * bn2));
  const double cf2 = 0.5 * (sum + disc);
  c.sound = std::sqrt(a2);
  c.alfven = std::sqrt(bn2);
  c.fast = std::sqrt(cf2);
  // a^2 bn^2 / cf^2 avoids cancellation in (sum - disc)/2.
  c.slow = cf2 > 0.0 ? std::sqrt(std::max(0.0, a2 * bn2 / cf2)) : 0.0;
  c.slow = std::min(c.slow, c.fast);
  return c;
}

/// Largest |eigenvalue| of d(kt q + kx f + ky g)/dq.
inline double spectral_radius(const Vec8& q, const DirectionalMetric& m, double gamma = kDefaultGamma) {
  const auto s = conserved_to_primitive(q, gamma);
  const double len = std::hypot(m.kx, m.ky);
  if (len == 0.0) return std::abs(m.kt);
  const double nx = m.kx / len;
  const double ny = m.ky / len;
  const auto c = wave_speeds(s, nx, ny, gamma);
  return std::abs(m.kt + len * (s.u * nx + s.v * ny)) + len * c.fast;
}

inline double max_wave_speed(std::span<const Vec8> states, const DirectionalMetric& m,
                             double gamma = kDefaultGamma) {
  if (states.empty()) throw std::invalid_argument("max_wave_speed of an empty state set");
  double a = 0.0;
  for (const auto& q : states) a = std::max(a, spectral_radius(q, m, gamma));
  return a;
}

/// Eigen-decomposition of d(kt q + kx f + ky g)/dq in the eight-wave form,
/// where the normal field component is carried by its own advective wave.
/// Columns are ordered by eigenvalue: u-cf, u-ca, u-cs, u, u, u+cs, u+ca, u+cf.
struct CharacteristicBasis {
  Mat8 right;
  Mat8 left;
  Vec8 eigenvalues;
};

inline CharacteristicBasis eigensystem(const Vec8& q, const DirectionalMetric& m,
                                       double gamma = kDefaultGamma) {
  const double len = std::hypot(m.kx, m.ky);
  if (!(len > 0.0)) throw std::invalid_argument("eigensystem needs a nonzero metric normal");
  const double nx = m.kx / len;
  const double ny = m.ky / len;
  const auto s = conserved_to_primitive(q, gamma);

  // Rotated frame: n = (nx, ny), t = (-ny, nx), z.
  const double un = s.u * nx + s.v * ny;
  const double ut = -s.u * ny + s.v * nx;
  const double bn = s.bx * nx + s.by * ny;
  const double bt = -s.bx * ny + s.by * nx;
  const double rho = s.rho;
  const double sqrt_rho = std::sqrt(rho);
  const auto c = wave_speeds(s, nx, ny, gamma);
  const double a = c.sound;
  const double a2 = a * a;
  const double cf = c.fast;
  const double cs = c.slow;
  const double ca = c.alfven;

  const double bperp = std::hypot(bt, s.bz);
  double beta_y = 1.0 / std::sqrt(2.0);
  double beta_z = 1.0 / std::sqrt(2.0);
  if (bperp > 1e-12 * std::max(1.0, std::abs(bn))) {
    beta_y = bt / bperp;
    beta_z = s.bz / bperp;
  }
  double alpha_f = 1.0;
  double alpha_s = 0.0;
  const double gap = cf * cf - cs * cs;
  if (gap > 1e-12 * std::max(1.0, cf * cf)) {
    alpha_f = std::sqrt(std::clamp((a2 - cs * cs) / gap, 0.0, 1.0));
    alpha_s = std::sqrt(std::clamp((cf * cf - a2) / gap, 0.0, 1.0));
  }
  const double sgn = bn >= 0.0 ? 1.0 : -1.0;

  // Primitive right eigenvectors on (rho, un, ut, uz, p, Bn, Bt, Bz).
  Mat8 rw = Mat8::Zero();
  auto fast = [&](int col, double dir) {
    rw(0, col) = rho * alpha_f;
    rw(1, col) = dir * alpha_f * cf;
    rw(2, col) = -dir * alpha_s * cs * beta_y * sgn;
    rw(3, col) = -dir * alpha_s * cs * beta_z * sgn;
    rw(4, col) = rho * a2 * alpha_f;
    rw(6, col) = alpha_s * sqrt_rho * a * beta_y;
    rw(7, col) = alpha_s * sqrt_rho * a * beta_z;
  };
  auto slow = [&](int col, double dir) {
    rw(0, col) = rho * alpha_s;
    rw(1, col) = dir * alpha_s * cs;
    rw(2, col) = dir * alpha_f * cf * beta_y * sgn;
    rw(3, col) = dir * alpha_f * cf * beta_z * sgn;
    rw(4, col) = rho * a2 * alpha_s;
    rw(6, col) = -alpha_f * sqrt_rho * a * beta_y;
    rw(7, col) = -alpha_f * sqrt_rho * a * beta_z;
  };
  auto alfven = [&](int col, double dir) {
    rw(2, col) = dir * sgn * beta_z;
    rw(3, col) = -dir * sgn * beta_y;
    rw(6, col) = -sqrt_rho * beta_z;
    rw(7, col) = sqrt_rho * beta_y;
  };
  fast(0, -1.0);
  alfven(1, -1.0);
  slow(2, -1.0);
  rw(0, 3) = 1.0;
  rw(5, 4) = 1.0;
  slow(5, 1.0);
  alfven(6, 1.0);
  fast(7, 1.0);

  // dq/dw in the rotated frame.
  Mat8 dq = Mat8::Zero();
  dq(0, 0) = 1.0;
  dq(1, 0) = un;
  dq(1, 1) = rho;
  dq(2, 0) = ut;
  dq(2, 2) = rho;
  dq(3, 0) = s.w;
  dq(3, 3) = rho;
  dq(4, 0) = 0.5 * (un * un + ut * ut + s.w * s.w);
  dq(4, 1) = rho * un;
  dq(4, 2) = rho * ut;
  dq(4, 3) = rho * s.w;
  dq(4, 4) = 1.0 / (gamma - 1.0);
  dq(4, 5) = bn;
  dq(4, 6) = bt;
  dq(4, 7) = s.bz;
  dq(5, 5) = 1.0;
  dq(6, 6) = 1.0;
  dq(7, 7) = 1.0;

  // Rotated conserved -> Cartesian conserved.
  Mat8 rot = Mat8::Identity();
  rot(1, 1) = nx;
  rot(1, 2) = -ny;
  rot(2, 1) = ny;
  rot(2, 2) = nx;
  rot(5, 5) = nx;
  rot(5, 6) = -ny;
  rot(6, 5) = ny;
  rot(6, 6) = nx;

  CharacteristicBasis basis;
  basis.right = rot * dq * rw;
  basis.left = basis.right.partialPivLu().inverse();
  const double lam[8] = {un - cf, un - ca, un - cs, un, un, un + cs, un + ca, un + cf};
  for (int k = 0; k < 8; ++k) basis.eigenvalues(k) = m.kt + len * lam[k];
  return basis;
}

}  // namespace fsmhd
