#pragma once

// Constrained transport: the conserved variables and the magnetic potential A
// advance side by side; after every full RK3 step the in-plane field is
// replaced by the discrete curl of A and the energy is corrected so that the
// thermal pressure is untouched.
//
// The curl uses sixth-order central metrics and J = 1 / (discrete Jacobian
// built from the same stencils), which makes it exact for A linear in (x, y)
// on any lattice.

#include "fsmhd/boundary.hpp"
#include "fsmhd/core.hpp"
#include "fsmhd/fd_solver.hpp"
#include "fsmhd/grid.hpp"
#include "fsmhd/hj_solver.hpp"
#include "fsmhd/mhd.hpp"
#include "fsmhd/rk3.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <utility>

namespace fsmhd {

struct CurlField {
  ScalarField b1;
  ScalarField b2;
};

/// (B1, B2) = (dA/dy, -dA/dx) at interior nodes; `a` needs three filled
/// ghost layers.
inline CurlField discrete_curl(const ScalarField& a, const GridField& g) {
  CurlField out{ScalarField(g.ni(), g.nj()), ScalarField(g.ni(), g.nj())};
  for_interior(g.ni(), g.nj(), [&](int i, int j) {
    const double xx = detail::d6_xi(g.x, i, j) / g.dxi;
    const double yx = detail::d6_xi(g.y, i, j) / g.dxi;
    const double xe = detail::d6_eta(g.x, i, j) / g.deta;
    const double ye = detail::d6_eta(g.y, i, j) / g.deta;
    const double jinv = xx * ye - xe * yx;
    if (!(std::abs(jinv) > 0.0) || !std::isfinite(jinv)) throw GridError("degenerate discrete Jacobian", i, j);
    const double axi = detail::d6_xi(a, i, j) / g.dxi;
    const double aeta = detail::d6_eta(a, i, j) / g.deta;
    out.b1(i, j) = (xx * aeta - xe * axi) / jinv;
    out.b2(i, j) = (yx * aeta - ye * axi) / jinv;
  });
  return out;
}

/// Total energy after replacing B* by b_new at fixed density, momentum and
/// thermal pressure.
inline double energy_fix(double e_star, const std::array<double, 3>& b_star,
                         const std::array<double, 3>& b_new) {
  const double old2 = b_star[0] * b_star[0] + b_star[1] * b_star[1] + b_star[2] * b_star[2];
  const double new2 = b_new[0] * b_new[0] + b_new[1] * b_new[1] + b_new[2] * b_new[2];
  return e_star + 0.5 * (new2 - old2);
}

struct DivergenceReport {
  ScalarField div;
  double max = 0.0;
  double l1 = 0.0;  // mean of |div B| over the interior nodes
};

/// J [D_xi(y_eta B1 - x_eta B2) + D_eta(x_xi B2 - y_xi B1)] with sixth-order
/// central differences; b1, b2 need three filled ghost layers.
inline DivergenceReport divergence_diagnostic(const ScalarField& b1, const ScalarField& b2,
                                              const GridField& g) {
  const int ni = g.ni();
  const int nj = g.nj();
  ScalarField fxi(ni, nj);
  ScalarField feta(ni, nj);
  for (int j = -3; j < nj + 3; ++j)
    for (int i = -3; i < ni + 3; ++i) {
      const double xx = detail::d6_xi(g.x, i, j) / g.dxi;
      const double yx = detail::d6_xi(g.y, i, j) / g.dxi;
      const double xe = detail::d6_eta(g.x, i, j) / g.deta;
      const double ye = detail::d6_eta(g.y, i, j) / g.deta;
      fxi(i, j) = ye * b1(i, j) - xe * b2(i, j);
      feta(i, j) = xx * b2(i, j) - yx * b1(i, j);
    }
  DivergenceReport r;
  r.div = ScalarField(ni, nj);
  for_interior(ni, nj, [&](int i, int j) {
    const double d = (detail::d6_xi(fxi, i, j) / g.dxi + detail::d6_eta(feta, i, j) / g.deta) /
                     discrete_jacobian_inverse(g, i, j);
    r.div(i, j) = d;
    r.max = std::max(r.max, std::abs(d));
    r.l1 += std::abs(d);
  });
  r.l1 /= static_cast<double>(ni) * nj;
  return r;
}

enum class HjScheme { pl, npl };

/// Evolved unknowns: q~ = J^-1 q, the evolved J^-1 (it obeys its own
/// geometric conservation law on moving grids) and the potential.
struct CoupledState {
  StateField qt;
  ScalarField jinv;
  ScalarField a;
  double time = 0.0;
  int step = 0;
};

inline CoupledState lincomb(double a, const CoupledState& x, double b, const CoupledState& y) {
  CoupledState out;
  out.qt = lincomb(a, x.qt, b, y.qt);
  out.jinv = lincomb(a, x.jinv, b, y.jinv);
  out.a = lincomb(a, x.a, b, y.a);
  out.time = x.time;
  out.step = x.step;
  return out;
}

struct CoupledConfig {
  FluxOptions flux;
  HjScheme scheme = HjScheme::pl;
  BoundarySpec bc;
  StateFunction farfield_q;
  ScalarFunction farfield_a;
  // Jump of A across one period, from the mean in-plane field.
  double a_offset_xi = 0.0;
  double a_offset_eta = 0.0;
  // Replace B by curl A after every RK stage instead of every full step.
  bool correct_each_stage = false;
};

class CoupledSolver {
 public:
  CoupledSolver(Mesh mesh, CoupledConfig cfg) : mesh_(std::move(mesh)), cfg_(std::move(cfg)) {
    if (!mesh_.spec().moving()) static_grid_ = mesh_.generate(0.0);
  }

  const Mesh& mesh() const { return mesh_; }
  const CoupledConfig& config() const { return cfg_; }

  GridField grid_at(double tau) const { return static_grid_ ? *static_grid_ : mesh_.generate(tau); }

  /// Samples A, takes B1, B2 from its discrete curl and builds the state.
  /// `w0` supplies everything but B1, B2 (its bx, by are ignored).
  CoupledState initialize(const std::function<Primitive(double, double)>& w0,
                          const std::function<double(double, double)>& a0) const {
    const GridField g = grid_at(0.0);
    CoupledState s;
    s.a = ScalarField(g.ni(), g.nj());
    for_interior(g.ni(), g.nj(), [&](int i, int j) { s.a(i, j) = a0(g.x(i, j), g.y(i, j)); });
    fill_a(s.a, g, 0.0);
    const auto b = discrete_curl(s.a, g);
    s.qt = StateField(g.ni(), g.nj(), kGhost, Vec8::Zero());
    s.jinv = ScalarField(g.ni(), g.nj());
    for_interior(g.ni(), g.nj(), [&](int i, int j) {
      Primitive w = w0(g.x(i, j), g.y(i, j));
      w.bx = b.b1(i, j);
      w.by = b.b2(i, j);
      const double jinv = discrete_jacobian_inverse(g, i, j);
      s.jinv(i, j) = jinv;
      s.qt(i, j) = jinv * primitive_to_conserved(w, cfg_.flux.gamma);
    });
    return s;
  }

  /// Physical conserved state at interior nodes (ghosts zero).
  StateField conserved(const CoupledState& s) const {
    StateField q(s.qt.ni(), s.qt.nj(), kGhost, Vec8::Zero());
    for_interior(q.ni(), q.nj(), [&](int i, int j) { q(i, j) = s.qt(i, j) / s.jinv(i, j); });
    return q;
  }

  /// Right-hand side of RK3 stage `stage` of the step starting at tau_n.
  CoupledState rhs(const CoupledState& u, double tau_n, double dt, int stage) const {
    const double ts = rk3_stage_time(tau_n, dt, stage);
    const GridField g = grid_at(ts);
    const MeshVelocity vel = stage_mesh_velocity(mesh_, tau_n, dt, stage);
    const MetricSet m = free_stream_metrics(g, &vel.x_tau, &vel.y_tau);

    StateField q = conserved(u);
    fill_state_ghosts(q, cfg_.bc, g, cfg_.farfield_q, ts);
    CoupledState d;
    d.qt = mhd_rhs(q, m, cfg_.flux).rhs;
    d.jinv = mesh_.spec().moving() ? temporal_jacobian_rate(m) : ScalarField(g.ni(), g.nj());

    ScalarField a = u.a;
    fill_a(a, g, ts);
    ScalarField uu(g.ni(), g.nj());
    ScalarField vv(g.ni(), g.nj());
    for_interior(g.ni(), g.nj(), [&](int i, int j) {
      uu(i, j) = q(i, j)(kMx) / q(i, j)(kRho);
      vv(i, j) = q(i, j)(kMy) / q(i, j)(kRho);
    });
    const AdvectionHamiltonian h{&uu, &vv};
    d.a = cfg_.scheme == HjScheme::pl ? hj_rhs(a, g, h, vel.x_tau, vel.y_tau, cfg_.flux.eps).rhs
                                      : hj_rhs_npl(a, g, h, vel.x_tau, vel.y_tau, cfg_.flux.eps).rhs;
    return d;
  }

  /// One full RK3 step followed by the curl replacement and energy fix.
  void step(CoupledState& s, double dt) const {
    const double tau_n = s.time;
    auto stage_rhs = [&](const CoupledState& u, int stage) {
      if (cfg_.correct_each_stage && stage > 0) {
        CoupledState c = u;
        correct(c, rk3_stage_time(tau_n, dt, stage));
        return rhs(c, tau_n, dt, stage);
      }
      return rhs(u, tau_n, dt, stage);
    };
    try {
      CoupledState next = rk3_advance(s, stage_rhs, dt,
                                      [](double a, const CoupledState& x, double b, const CoupledState& y) {
                                        return lincomb(a, x, b, y);
                                      });
      next.time = tau_n + dt;
      next.step = s.step + 1;
      correct(next, next.time);
      s = std::move(next);
    } catch (PhysicalStateError& e) {
      if (e.step < 0) e.step = s.step + 1;
      if (e.time < 0.0) e.time = tau_n;
      throw;
    }
  }

  /// Replaces B1, B2 by the curl of A and corrects the energy; validates
  /// every node.
  void correct(CoupledState& s, double tau) const {
    const GridField g = grid_at(tau);
    fill_a(s.a, g, tau);
    const auto b = discrete_curl(s.a, g);
    for_interior(g.ni(), g.nj(), [&](int i, int j) {
      Vec8 q = s.qt(i, j) / s.jinv(i, j);
      const std::array<double, 3> old_b = {q(kBx), q(kBy), q(kBz)};
      const std::array<double, 3> new_b = {b.b1(i, j), b.b2(i, j), q(kBz)};
      q(kEnergy) = energy_fix(q(kEnergy), old_b, new_b);
      q(kBx) = new_b[0];
      q(kBy) = new_b[1];
      try {
        (void)conserved_to_primitive(q, cfg_.flux.gamma);
      } catch (PhysicalStateError& e) {
        e.i = i;
        e.j = j;
        e.time = tau;
        throw;
      }
      s.qt(i, j) = s.jinv(i, j) * q;
    });
  }

  /// div B of the current state, with ghosts filled per the boundary spec.
  DivergenceReport divergence(const CoupledState& s) const {
    const GridField g = grid_at(s.time);
    const StateField q = conserved(s);
    ScalarField b1(g.ni(), g.nj());
    ScalarField b2(g.ni(), g.nj());
    for_interior(g.ni(), g.nj(), [&](int i, int j) {
      b1(i, j) = q(i, j)(kBx);
      b2(i, j) = q(i, j)(kBy);
    });
    BoundarySpec copy = cfg_.bc;
    for (auto* k : {&copy.xi_lo, &copy.xi_hi, &copy.eta_lo, &copy.eta_hi})
      if (*k != BoundaryKind::periodic) *k = BoundaryKind::outflow;
    fill_scalar_ghosts(b1, copy);
    fill_scalar_ghosts(b2, copy);
    return divergence_diagnostic(b1, b2, g);
  }

  void fill_a(ScalarField& a, const GridField& g, double tau) const {
    fill_potential_ghosts(a, cfg_.bc, g, cfg_.a_offset_xi, cfg_.a_offset_eta, cfg_.farfield_a, tau);
  }

 private:
  Mesh mesh_;
  CoupledConfig cfg_;
  std::optional<GridField> static_grid_;
};

}  // namespace fsmhd
