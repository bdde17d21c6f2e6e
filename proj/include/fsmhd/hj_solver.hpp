#pragma once

// Hamilton-Jacobi solvers on curvilinear node lattices, for
//   phi_tau + H(phi_x, phi_y) - (x_tau, y_tau) . grad phi = 0
// written at moving nodes.
//
// The linearity-preserving (PL) scheme builds one physical gradient per
// angular sector around a node from one-sided WENO derivatives, with the node
// coordinates differentiated by the very same frozen WENO coefficients, and
// combines the four sector gradients with an unstructured-mesh
// Lax-Friedrichs Hamiltonian. Any phi linear in (x, y) yields the exact
// gradient in every sector. The NPL scheme is the classical
// dimension-by-dimension solver in computational coordinates.

#include "fsmhd/core.hpp"
#include "fsmhd/grid.hpp"
#include "fsmhd/weno.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace fsmhd {

/// Ranges of the physical gradient components over all nodes and sectors.
struct GradientBox {
  double pmin = std::numeric_limits<double>::infinity();
  double pmax = -std::numeric_limits<double>::infinity();
  double qmin = std::numeric_limits<double>::infinity();
  double qmax = -std::numeric_limits<double>::infinity();

  void include(double p, double q) {
    pmin = std::min(pmin, p);
    pmax = std::max(pmax, p);
    qmin = std::min(qmin, q);
    qmax = std::max(qmax, q);
  }
};

// A Hamiltonian provides
//   value(i, j, p, q)
//   bound(i, j, box, xt, yt, cx, cy) = max over box of |(H1 - xt) cx + (H2 - yt) cy|
// where H1, H2 are the partials in p, q.

/// H = a p + b q.
struct LinearHamiltonian {
  double a = 0.0;
  double b = 0.0;
  double value(int, int, double p, double q) const { return a * p + b * q; }
  double bound(int, int, const GradientBox&, double xt, double yt, double cx, double cy) const {
    return std::abs((a - xt) * cx + (b - yt) * cy);
  }
};

/// Advection of the magnetic potential, H = u p + v q with node velocities.
struct AdvectionHamiltonian {
  const ScalarField* u = nullptr;
  const ScalarField* v = nullptr;
  double value(int i, int j, double p, double q) const { return (*u)(i, j) * p + (*v)(i, j) * q; }
  double bound(int i, int j, const GradientBox&, double xt, double yt, double cx, double cy) const {
    return std::abs(((*u)(i, j) - xt) * cx + ((*v)(i, j) - yt) * cy);
  }
};

/// H = sin(p + q).
struct SineHamiltonian {
  double value(int, int, double p, double q) const { return std::sin(p + q); }
  double bound(int, int, const GradientBox& box, double xt, double yt, double cx, double cy) const {
    const auto [lo, hi] = cos_range(box.pmin + box.qmin, box.pmax + box.qmax);
    const double shift = xt * cx + yt * cy;
    return std::max(std::abs(lo * (cx + cy) - shift), std::abs(hi * (cx + cy) - shift));
  }

  /// Exact range of cos over [s0, s1].
  static std::pair<double, double> cos_range(double s0, double s1) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (!(s1 - s0 < two_pi)) return {-1.0, 1.0};
    double lo = std::min(std::cos(s0), std::cos(s1));
    double hi = std::max(std::cos(s0), std::cos(s1));
    if (std::floor(s1 / two_pi) > std::floor(s0 / two_pi) || std::fmod(s0, two_pi) == 0.0) hi = 1.0;
    const double t0 = (s0 - std::numbers::pi) / two_pi;
    const double t1 = (s1 - std::numbers::pi) / two_pi;
    if (std::floor(t1) > std::floor(t0) || t0 == std::floor(t0)) lo = -1.0;
    return {lo, hi};
  }
};

/// Angular sectors around a node, in counter-clockwise order for a
/// right-handed lattice: (+,+), (-,+), (-,-), (+,-) in (xi, eta) bias.
/// Entry m of `normal`/`gamma` belongs to the half-line shared by sectors m
/// and m+1 (cyclically).
struct SectorGeometry {
  std::array<double, 4> theta{};
  std::array<double, 4> gamma{};
  std::array<std::array<double, 2>, 4> normal{};
};

inline constexpr std::array<int, 4> kSectorXi = {+1, -1, -1, +1};
inline constexpr std::array<int, 4> kSectorEta = {+1, +1, -1, -1};

inline SectorGeometry sector_geometry(const GridField& g, int i, int j) {
  auto edge = [&](int di, int dj) {
    return std::array<double, 2>{g.x(i + di, j + dj) - g.x(i, j), g.y(i + di, j + dj) - g.y(i, j)};
  };
  // Half-lines in cyclic order: e_xi+, e_eta+, e_xi-, e_eta-.
  const std::array<std::array<double, 2>, 4> e = {edge(1, 0), edge(0, 1), edge(-1, 0), edge(0, -1)};
  const double orient = discrete_jacobian_inverse(g, i, j) > 0.0 ? 1.0 : -1.0;
  SectorGeometry s;
  for (int m = 0; m < 4; ++m) {
    const auto& a = e[m];
    const auto& b = e[(m + 1) % 4];
    const double angle =
        orient * std::atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1]);
    if (!(angle > 0.0 && angle < std::numbers::pi))
      throw GridError("reflex or degenerate angular sector", i, j);
    s.theta[m] = angle;
    const double len = std::hypot(b[0], b[1]);
    s.normal[m] = {b[0] / len, b[1] / len};
  }
  for (int m = 0; m < 4; ++m)
    s.gamma[m] = std::tan(0.5 * s.theta[m]) + std::tan(0.5 * s.theta[(m + 1) % 4]);
  return s;
}

inline Field2D<SectorGeometry> sector_geometry(const GridField& g) {
  Field2D<SectorGeometry> f(g.ni(), g.nj());
  for_interior(g.ni(), g.nj(), [&](int i, int j) { f(i, j) = sector_geometry(g, i, j); });
  return f;
}

/// One-sided WENO derivatives of phi, x and y along one lattice direction,
/// all built with the coefficients frozen from phi.
struct BiasedDerivative {
  double phi = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct NodeDerivatives {
  std::array<BiasedDerivative, 2> xi;   // [0] minus, [1] plus
  std::array<BiasedDerivative, 2> eta;
};

inline NodeDerivatives node_derivatives(const ScalarField& phi, const GridField& g, int i, int j,
                                        double eps = weno::kEpsilon) {
  NodeDerivatives d;
  std::array<double, 7> p;
  std::array<double, 7> xs;
  std::array<double, 7> ys;
  auto fill = [&](int di, int dj, double spacing, std::array<BiasedDerivative, 2>& out) {
    for (int l = -3; l <= 3; ++l) {
      p[l + 3] = phi(i + l * di, j + l * dj);
      xs[l + 3] = g.x(i + l * di, j + l * dj);
      ys[l + 3] = g.y(i + l * di, j + l * dj);
    }
    for (int s = 0; s < 2; ++s) {
      const auto r = weno::weno5_hj_derivative(std::span<const double, 7>(p), spacing,
                                               s == 0 ? weno::Side::minus : weno::Side::plus, eps);
      out[s] = {r.value, weno::apply_operator(r.op, xs), weno::apply_operator(r.op, ys)};
    }
  };
  fill(1, 0, g.dxi, d.xi);
  fill(0, 1, g.deta, d.eta);
  return d;
}

/// Physical gradient in each sector: (phi_x, phi_y) for sector m.
using SectorGradient = std::array<std::array<double, 2>, 4>;

inline SectorGradient sector_gradients(const NodeDerivatives& d, int i = -1, int j = -1) {
  SectorGradient out;
  for (int m = 0; m < 4; ++m) {
    const auto& a = d.xi[kSectorXi[m] > 0 ? 1 : 0];
    const auto& b = d.eta[kSectorEta[m] > 0 ? 1 : 0];
    const double den = a.x * b.y - b.x * a.y;
    const double scale = std::abs(a.x * b.y) + std::abs(b.x * a.y);
    if (!(std::abs(den) > 1e-12 * scale)) throw GridError("vanishing sector Jacobian", i, j);
    out[m] = {(a.phi * b.y - b.phi * a.y) / den, (a.x * b.phi - b.x * a.phi) / den};
  }
  return out;
}

/// Lax-Friedrichs monotone Hamiltonian over four angular sectors.
template <class Ham>
double monotone_hamiltonian(const SectorGeometry& s, const SectorGradient& g, const Ham& h, int i,
                            int j, double xt, double yt, double lambda) {
  double gx = 0.0;
  double gy = 0.0;
  for (int m = 0; m < 4; ++m) {
    gx += s.theta[m] * g[m][0];
    gy += s.theta[m] * g[m][1];
  }
  gx /= 2.0 * std::numbers::pi;
  gy /= 2.0 * std::numbers::pi;
  double diss = 0.0;
  for (int m = 0; m < 4; ++m) {
    const auto& a = g[m];
    const auto& b = g[(m + 1) % 4];
    diss += s.gamma[m] * (0.5 * (a[0] + b[0]) * s.normal[m][0] + 0.5 * (a[1] + b[1]) * s.normal[m][1]);
  }
  return h.value(i, j, gx, gy) - (xt * gx + yt * gy) - lambda / std::numbers::pi * diss;
}

struct HjRhs {
  ScalarField rhs;
  double lambda = 0.0;
};

namespace detail {

inline double at_or_zero(const ScalarField& f, int i, int j) { return f.empty() ? 0.0 : f(i, j); }

}  // namespace detail

/// Dissipation speed: max over nodes of the box bounds on |H1 - x_tau| and
/// |H2 - y_tau|.
template <class Ham>
double lambda_bound(const Field2D<SectorGradient>& grads, const Ham& h, const ScalarField& x_tau,
                    const ScalarField& y_tau) {
  GradientBox box;
  for_interior(grads.ni(), grads.nj(), [&](int i, int j) {
    for (const auto& g : grads(i, j)) box.include(g[0], g[1]);
  });
  double lambda = 0.0;
  for_interior(grads.ni(), grads.nj(), [&](int i, int j) {
    const double xt = detail::at_or_zero(x_tau, i, j);
    const double yt = detail::at_or_zero(y_tau, i, j);
    lambda = std::max({lambda, h.bound(i, j, box, xt, yt, 1.0, 0.0), h.bound(i, j, box, xt, yt, 0.0, 1.0)});
  });
  return lambda;
}

/// d(phi)/d(tau) = -H_hat at interior nodes with the PL scheme. `phi` and `g`
/// must carry filled ghost layers; empty mesh-velocity fields mean zero.
template <class Ham>
HjRhs hj_rhs(const ScalarField& phi, const GridField& g, const Ham& h, const ScalarField& x_tau = {},
             const ScalarField& y_tau = {}, double eps = weno::kEpsilon) {
  const int ni = g.ni();
  const int nj = g.nj();
  Field2D<SectorGradient> grads(ni, nj);
  Field2D<SectorGeometry> geom(ni, nj);
  for_interior(ni, nj, [&](int i, int j) {
    geom(i, j) = sector_geometry(g, i, j);
    grads(i, j) = sector_gradients(node_derivatives(phi, g, i, j, eps), i, j);
  });
  HjRhs out;
  out.lambda = lambda_bound(grads, h, x_tau, y_tau);
  out.rhs = ScalarField(ni, nj);
  for_interior(ni, nj, [&](int i, int j) {
    out.rhs(i, j) = -monotone_hamiltonian(geom(i, j), grads(i, j), h, i, j, detail::at_or_zero(x_tau, i, j),
                                          detail::at_or_zero(y_tau, i, j), out.lambda);
  });
  return out;
}

/// Classical scheme: Lax-Friedrichs on the computational-space Hamiltonian
/// with sixth-order central metrics. Not exact for linear phi on curved grids.
template <class Ham>
HjRhs hj_rhs_npl(const ScalarField& phi, const GridField& g, const Ham& h, const ScalarField& x_tau = {},
                 const ScalarField& y_tau = {}, double eps = weno::kEpsilon) {
  const int ni = g.ni();
  const int nj = g.nj();
  struct Local {
    double xi_x, xi_y, eta_x, eta_y;
    double pxm, pxp, pem, pep;
  };
  Field2D<Local> loc(ni, nj);
  GradientBox box;
  std::array<double, 7> p;
  for_interior(ni, nj, [&](int i, int j) {
    Local& L = loc(i, j);
    const double xx = detail::d6_xi(g.x, i, j) / g.dxi;
    const double yx = detail::d6_xi(g.y, i, j) / g.dxi;
    const double xe = detail::d6_eta(g.x, i, j) / g.deta;
    const double ye = detail::d6_eta(g.y, i, j) / g.deta;
    const double jinv = xx * ye - xe * yx;
    if (!(std::abs(jinv) > 0.0)) throw GridError("degenerate mesh", i, j);
    L.xi_x = ye / jinv;
    L.xi_y = -xe / jinv;
    L.eta_x = -yx / jinv;
    L.eta_y = xx / jinv;
    for (int l = -3; l <= 3; ++l) p[l + 3] = phi(i + l, j);
    L.pxm = weno::weno5_hj_derivative(std::span<const double, 7>(p), g.dxi, weno::Side::minus, eps).value;
    L.pxp = weno::weno5_hj_derivative(std::span<const double, 7>(p), g.dxi, weno::Side::plus, eps).value;
    for (int l = -3; l <= 3; ++l) p[l + 3] = phi(i, j + l);
    L.pem = weno::weno5_hj_derivative(std::span<const double, 7>(p), g.deta, weno::Side::minus, eps).value;
    L.pep = weno::weno5_hj_derivative(std::span<const double, 7>(p), g.deta, weno::Side::plus, eps).value;
    for (double a : {L.pxm, L.pxp})
      for (double b : {L.pem, L.pep}) box.include(L.xi_x * a + L.eta_x * b, L.xi_y * a + L.eta_y * b);
  });
  double alpha_xi = 0.0;
  double alpha_eta = 0.0;
  for_interior(ni, nj, [&](int i, int j) {
    const Local& L = loc(i, j);
    const double xt = detail::at_or_zero(x_tau, i, j);
    const double yt = detail::at_or_zero(y_tau, i, j);
    alpha_xi = std::max(alpha_xi, h.bound(i, j, box, xt, yt, L.xi_x, L.xi_y));
    alpha_eta = std::max(alpha_eta, h.bound(i, j, box, xt, yt, L.eta_x, L.eta_y));
  });
  HjRhs out;
  out.lambda = std::max(alpha_xi, alpha_eta);
  out.rhs = ScalarField(ni, nj);
  for_interior(ni, nj, [&](int i, int j) {
    const Local& L = loc(i, j);
    const double a = 0.5 * (L.pxm + L.pxp);
    const double b = 0.5 * (L.pem + L.pep);
    const double px = L.xi_x * a + L.eta_x * b;
    const double py = L.xi_y * a + L.eta_y * b;
    const double ht = h.value(i, j, px, py) - detail::at_or_zero(x_tau, i, j) * px -
                      detail::at_or_zero(y_tau, i, j) * py - 0.5 * alpha_xi * (L.pxp - L.pxm) -
                      0.5 * alpha_eta * (L.pep - L.pem);
    out.rhs(i, j) = -ht;
  });
  return out;
}

}  // namespace fsmhd
