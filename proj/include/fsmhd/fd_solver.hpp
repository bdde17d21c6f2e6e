#pragma once

// Semi-discrete conservative update of the transformed MHD system with the
// alternative (solution-interpolating) finite-difference WENO flux:
//
//   f_hat = h(q-, q+) + sigma * (-1/24 D2 f~ + 7/5760 D4 f~)
//
// where h is a global Lax-Friedrichs flux evaluated with half-point metrics
// and D2, D4 act on nodal transformed fluxes. For uniform q the WENO part
// returns q exactly, sigma is exactly 1, and the flux collapses to a linear
// operator on the nodal metrics whose difference is the sixth-order central
// difference used to build them; this is the free-stream mechanism.

#include "fsmhd/core.hpp"
#include "fsmhd/grid.hpp"
#include "fsmhd/mhd.hpp"
#include "fsmhd/stencils.hpp"
#include "fsmhd/weno.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>

namespace fsmhd {

struct FluxOptions {
  double gamma = kDefaultGamma;
  double eps = weno::kEpsilon;
  bool sigma_on = true;
};

/// Filter on the high-order corrections, from the interpolation smoothness
/// indicators of every characteristic field and both biases. Per field,
/// r = |IS0 - IS2| / (min IS + eps); sigma = 1 / (1 + max r).
/// Identical inputs give r = 0, hence sigma = 1 exactly.
inline double sigma_from_indicators(const weno::SystemInterpolation& s, double eps = weno::kEpsilon) {
  double r = 0.0;
  auto ratio = [&](const std::array<double, 3>& is) {
    const double lo = std::min({is[0], is[1], is[2]});
    return std::abs(is[0] - is[2]) / (lo + eps);
  };
  for (int c = 0; c < 8; ++c) r = std::max({r, ratio(s.is_minus[c]), ratio(s.is_plus[c])});
  return 1.0 / (1.0 + r);
}

/// sigma for a six-state stencil along the direction (nx, ny).
inline double sigma(std::span<const Vec8, 6> q, double nx = 1.0, double ny = 0.0,
                    double gamma = kDefaultGamma, double eps = weno::kEpsilon) {
  const auto basis = eigensystem(0.5 * (q[2] + q[3]), {0.0, nx, ny}, gamma);
  return sigma_from_indicators(weno::weno5_interpolate_system(q, basis.left, basis.right, eps), eps);
}

/// Sum of the two central correction terms on six nodal flux values.
inline Vec8 central_correction(std::span<const Vec8, 6> node_flux) {
  auto at = [&](int l) -> const Vec8& { return node_flux[static_cast<std::size_t>(l + 2)]; };
  return stencil::kSecondWeight * stencil::half6(stencil::kSecond, at) +
         stencil::kFourthWeight * stencil::half6(stencil::kFourth, at);
}

struct InterfaceFlux {
  Vec8 flux;
  double sigma = 1.0;
};

/// Numerical flux at i+1/2 from states q_{i-2..i+3} and their nodal
/// transformed fluxes. Throws PhysicalStateError if an interpolated state is
/// not physical.
inline InterfaceFlux interface_flux(std::span<const Vec8, 6> q, std::span<const Vec8, 6> node_flux,
                                    const DirectionalMetric& half, double alpha,
                                    const FluxOptions& opt = {}) {
  const auto basis = eigensystem(0.5 * (q[2] + q[3]), half, opt.gamma);
  const auto sys = weno::weno5_interpolate_system(q, basis.left, basis.right, opt.eps);
  const Vec8 fm = transformed_flux(sys.minus, half, opt.gamma);
  const Vec8 fp = transformed_flux(sys.plus, half, opt.gamma);
  InterfaceFlux out;
  out.sigma = opt.sigma_on ? sigma_from_indicators(sys, opt.eps) : 1.0;
  out.flux = 0.5 * (fm + fp - alpha * (sys.plus - sys.minus)) + out.sigma * central_correction(node_flux);
  return out;
}

/// Convenience overload computing the nodal fluxes from nodal metrics.
inline InterfaceFlux interface_flux(std::span<const Vec8, 6> q,
                                    std::span<const DirectionalMetric, 6> node_metric,
                                    const DirectionalMetric& half, double alpha,
                                    const FluxOptions& opt = {}) {
  std::array<Vec8, 6> f;
  for (std::size_t k = 0; k < 6; ++k) f[k] = transformed_flux(q[k], node_metric[k], opt.gamma);
  return interface_flux(q, std::span<const Vec8, 6>(f), half, alpha, opt);
}

struct MhdRhs {
  StateField rhs;         // d(J^-1 q)/dtau at interior nodes
  StateField flux_xi;     // f_hat at (i+1/2, j), stored at i in [-1, ni)
  StateField flux_eta;    // g_hat at (i, j+1/2), stored at j in [-1, nj)
  ScalarField sigma_xi;
  ScalarField sigma_eta;
  double alpha_xi = 0.0;
  double alpha_eta = 0.0;
};

namespace detail {

template <class Fn>
void with_location(int i, int j, Fn&& fn) {
  try {
    fn();
  } catch (PhysicalStateError& e) {
    if (e.i < 0) {
      e.i = i;
      e.j = j;
    }
    throw;
  }
}

}  // namespace detail

/// Right-hand side for the conserved variables. `q` holds physical conserved
/// states with ghost layers filled; `m` carries the stage mesh velocity.
inline MhdRhs mhd_rhs(const StateField& q, const MetricSet& m, const FluxOptions& opt = {}) {
  const int ni = m.ni();
  const int nj = m.nj();
  MhdRhs out;
  out.rhs = StateField(ni, nj, kGhost, Vec8::Zero());
  out.flux_xi = StateField(ni, nj, kGhost, Vec8::Zero());
  out.flux_eta = StateField(ni, nj, kGhost, Vec8::Zero());
  out.sigma_xi = ScalarField(ni, nj, kGhost, 1.0);
  out.sigma_eta = ScalarField(ni, nj, kGhost, 1.0);

  StateField fx(ni, nj, kGhost, Vec8::Zero());
  StateField fy(ni, nj, kGhost, Vec8::Zero());
  for (int j = 0; j < nj; ++j)
    for (int i = -3; i < ni + 3; ++i)
      detail::with_location(i, j, [&] {
        fx(i, j) = transformed_flux(q(i, j), m.xi_node(i, j), opt.gamma);
        out.alpha_xi = std::max(out.alpha_xi, spectral_radius(q(i, j), m.xi_node(i, j), opt.gamma));
      });
  for (int j = -3; j < nj + 3; ++j)
    for (int i = 0; i < ni; ++i)
      detail::with_location(i, j, [&] {
        fy(i, j) = transformed_flux(q(i, j), m.eta_node(i, j), opt.gamma);
        out.alpha_eta = std::max(out.alpha_eta, spectral_radius(q(i, j), m.eta_node(i, j), opt.gamma));
      });

  std::array<Vec8, 6> ql;
  std::array<Vec8, 6> fl;
  for (int j = 0; j < nj; ++j)
    for (int i = -1; i < ni; ++i)
      detail::with_location(i, j, [&] {
        for (int k = 0; k < 6; ++k) {
          ql[k] = q(i - 2 + k, j);
          fl[k] = fx(i - 2 + k, j);
        }
        const auto r = interface_flux(std::span<const Vec8, 6>(ql), std::span<const Vec8, 6>(fl),
                                      m.xi_half(i, j), out.alpha_xi, opt);
        out.flux_xi(i, j) = r.flux;
        out.sigma_xi(i, j) = r.sigma;
      });
  for (int j = -1; j < nj; ++j)
    for (int i = 0; i < ni; ++i)
      detail::with_location(i, j, [&] {
        for (int k = 0; k < 6; ++k) {
          ql[k] = q(i, j - 2 + k);
          fl[k] = fy(i, j - 2 + k);
        }
        const auto r = interface_flux(std::span<const Vec8, 6>(ql), std::span<const Vec8, 6>(fl),
                                      m.eta_half(i, j), out.alpha_eta, opt);
        out.flux_eta(i, j) = r.flux;
        out.sigma_eta(i, j) = r.sigma;
      });

  for_interior(ni, nj, [&](int i, int j) {
    out.rhs(i, j) = -(out.flux_xi(i, j) - out.flux_xi(i - 1, j)) / m.dxi -
                    (out.flux_eta(i, j) - out.flux_eta(i, j - 1)) / m.deta;
  });
  return out;
}

}  // namespace fsmhd
