#pragma once

// Time integration of a stand-alone Hamilton-Jacobi equation on a (possibly
// moving) lattice: ghost fill, PL or NPL right-hand side, RK3 with the
// stage-consistent mesh velocities.

#include "fsmhd/boundary.hpp"
#include "fsmhd/ct.hpp"
#include "fsmhd/grid.hpp"
#include "fsmhd/hj_solver.hpp"
#include "fsmhd/rk3.hpp"

#include <optional>
#include <utility>

namespace fsmhd {

template <class Ham>
class HjIntegrator {
 public:
  HjIntegrator(Mesh mesh, Ham h, HjScheme scheme = HjScheme::pl, BoundarySpec bc = {},
               double offset_xi = 0.0, double offset_eta = 0.0, double eps = weno::kEpsilon)
      : mesh_(std::move(mesh)), h_(std::move(h)), scheme_(scheme), bc_(bc), off_xi_(offset_xi),
        off_eta_(offset_eta), eps_(eps) {
    if (!mesh_.spec().moving()) static_grid_ = mesh_.generate(0.0);
  }

  const Mesh& mesh() const { return mesh_; }
  GridField grid_at(double tau) const { return static_grid_ ? *static_grid_ : mesh_.generate(tau); }

  template <class Fn>
  ScalarField sample(Fn&& phi0, double tau = 0.0) const {
    const GridField g = grid_at(tau);
    ScalarField phi(g.ni(), g.nj());
    for_interior(g.ni(), g.nj(), [&](int i, int j) { phi(i, j) = phi0(g.x(i, j), g.y(i, j)); });
    return phi;
  }

  /// Right-hand side for RK3 stage `stage` of the step from tau_n; also
  /// reports the dissipation speed.
  HjRhs rhs(const ScalarField& phi_in, double tau_n, double dt, int stage) const {
    const GridField g = grid_at(rk3_stage_time(tau_n, dt, stage));
    ScalarField phi = phi_in;
    fill_potential_ghosts(phi, bc_, g, off_xi_, off_eta_);
    if (mesh_.spec().moving()) {
      const MeshVelocity v = stage_mesh_velocity(mesh_, tau_n, dt, stage);
      return scheme_ == HjScheme::pl ? hj_rhs(phi, g, h_, v.x_tau, v.y_tau, eps_)
                                     : hj_rhs_npl(phi, g, h_, v.x_tau, v.y_tau, eps_);
    }
    return scheme_ == HjScheme::pl ? hj_rhs(phi, g, h_, {}, {}, eps_) : hj_rhs_npl(phi, g, h_, {}, {}, eps_);
  }

  /// Dissipation speed of the current data (used by CFL rules).
  double lambda(const ScalarField& phi, double tau) const { return rhs(phi, tau, 1.0, 0).lambda; }

  ScalarField step(const ScalarField& phi, double tau_n, double dt) const {
    return rk3_advance(
        phi, [&](const ScalarField& u, int stage) { return rhs(u, tau_n, dt, stage).rhs; }, dt,
        [](double a, const ScalarField& x, double b, const ScalarField& y) { return lincomb(a, x, b, y); });
  }

 private:
  Mesh mesh_;
  Ham h_;
  HjScheme scheme_;
  BoundarySpec bc_;
  double off_xi_;
  double off_eta_;
  double eps_;
  std::optional<GridField> static_grid_;
};

}  // namespace fsmhd
