#pragma once

// Ghost-layer filling for the conserved state and the magnetic potential.
// The xi direction is filled first over interior rows, then the eta direction
// over the full padded width, so corners see already-filled xi ghosts.

#include "fsmhd/core.hpp"
#include "fsmhd/grid.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <string>

namespace fsmhd {

enum class BoundaryKind { periodic, dirichlet, outflow, reflecting };

inline BoundaryKind boundary_kind_from_string(const std::string& s) {
  if (s == "periodic") return BoundaryKind::periodic;
  if (s == "dirichlet" || s == "inflow") return BoundaryKind::dirichlet;
  if (s == "outflow") return BoundaryKind::outflow;
  if (s == "reflecting" || s == "wall") return BoundaryKind::reflecting;
  throw ConfigError("unknown boundary kind '" + s + "'");
}

struct BoundarySpec {
  BoundaryKind xi_lo = BoundaryKind::periodic;
  BoundaryKind xi_hi = BoundaryKind::periodic;
  BoundaryKind eta_lo = BoundaryKind::periodic;
  BoundaryKind eta_hi = BoundaryKind::periodic;

  static BoundarySpec all(BoundaryKind k) { return {k, k, k, k}; }
};

using StateFunction = std::function<Vec8(double x, double y, double t)>;
using ScalarFunction = std::function<double(double x, double y, double t)>;

namespace detail {

/// Location of one ghost node: its index, the interior node it mirrors
/// across the boundary node, the boundary node, depth k >= 1, and the period
/// count for a periodic wrap.
struct GhostSite {
  int i, j;
  int mi, mj;
  int bi, bj;
  int k;
  int wrap_i, wrap_j;  // periodic source node
  int shift;           // +1 at the high side, -1 at the low side
  bool along_xi;
};

template <class T, class Fn>
void fill_frame(Field2D<T>& f, const BoundarySpec& bc, Fn&& value) {
  const int ni = f.ni();
  const int nj = f.nj();
  const int ng = f.ng();
  for (int j = 0; j < nj; ++j)
    for (int k = 1; k <= ng; ++k) {
      GhostSite lo{-k, j, k, j, 0, j, k, ni - k, j, -1, true};
      GhostSite hi{ni - 1 + k, j, ni - 1 - k, j, ni - 1, j, k, k - 1, j, +1, true};
      f(lo.i, lo.j) = value(bc.xi_lo, lo, f);
      f(hi.i, hi.j) = value(bc.xi_hi, hi, f);
    }
  for (int i = -ng; i < ni + ng; ++i)
    for (int k = 1; k <= ng; ++k) {
      GhostSite lo{i, -k, i, k, i, 0, k, i, nj - k, -1, false};
      GhostSite hi{i, nj - 1 + k, i, nj - 1 - k, i, nj - 1, k, i, k - 1, +1, false};
      f(lo.i, lo.j) = value(bc.eta_lo, lo, f);
      f(hi.i, hi.j) = value(bc.eta_hi, hi, f);
    }
}

/// Unit normal to the lattice line through the boundary node (xi = const
/// lines for xi boundaries), from the neighbouring node positions.
inline std::array<double, 2> boundary_normal(const GridField& g, const GhostSite& s) {
  double tx = 0.0;
  double ty = 0.0;
  if (s.along_xi) {
    tx = g.x(s.bi, s.bj + 1) - g.x(s.bi, s.bj - 1);
    ty = g.y(s.bi, s.bj + 1) - g.y(s.bi, s.bj - 1);
  } else {
    tx = g.x(s.bi + 1, s.bj) - g.x(s.bi - 1, s.bj);
    ty = g.y(s.bi + 1, s.bj) - g.y(s.bi - 1, s.bj);
  }
  const double len = std::hypot(tx, ty);
  return {ty / len, -tx / len};
}

}  // namespace detail

/// Fills ghost states. `farfield` is used by dirichlet sides.
inline void fill_state_ghosts(StateField& q, const BoundarySpec& bc, const GridField& g,
                              const StateFunction& farfield = {}, double t = 0.0) {
  detail::fill_frame(q, bc, [&](BoundaryKind kind, const detail::GhostSite& s, const StateField& f) -> Vec8 {
    switch (kind) {
      case BoundaryKind::periodic:
        return f(s.wrap_i, s.wrap_j);
      case BoundaryKind::dirichlet:
        if (!farfield) throw ConfigError("dirichlet boundary without far-field state");
        return farfield(g.x(s.i, s.j), g.y(s.i, s.j), t);
      case BoundaryKind::outflow:
        return f(s.bi, s.bj);
      case BoundaryKind::reflecting: {
        const auto n = detail::boundary_normal(g, s);
        Vec8 v = f(s.mi, s.mj);
        const double mn = v(kMx) * n[0] + v(kMy) * n[1];
        v(kMx) -= 2.0 * mn * n[0];
        v(kMy) -= 2.0 * mn * n[1];
        const double bn = v(kBx) * n[0] + v(kBy) * n[1];
        v(kBx) -= 2.0 * bn * n[0];
        v(kBy) -= 2.0 * bn * n[1];
        return v;
      }
    }
    return f(s.bi, s.bj);
  });
}

/// Fills ghost values of the potential. Periodic wraps add the jump of the
/// mean-field part over one period (`offset_xi`, `offset_eta`).
inline void fill_potential_ghosts(ScalarField& a, const BoundarySpec& bc, const GridField& g,
                                  double offset_xi = 0.0, double offset_eta = 0.0,
                                  const ScalarFunction& farfield = {}, double t = 0.0) {
  detail::fill_frame(a, bc, [&](BoundaryKind kind, const detail::GhostSite& s, const ScalarField& f) {
    switch (kind) {
      case BoundaryKind::periodic:
        return f(s.wrap_i, s.wrap_j) + s.shift * (s.along_xi ? offset_xi : offset_eta);
      case BoundaryKind::dirichlet:
        if (!farfield) throw ConfigError("dirichlet boundary without far-field potential");
        return farfield(g.x(s.i, s.j), g.y(s.i, s.j), t);
      case BoundaryKind::outflow: {
        // Linear extrapolation along the lattice line.
        const int di = s.along_xi ? -s.shift : 0;
        const int dj = s.along_xi ? 0 : -s.shift;
        return f(s.bi, s.bj) + s.k * (f(s.bi, s.bj) - f(s.bi + di, s.bj + dj));
      }
      case BoundaryKind::reflecting:
        return 2.0 * f(s.bi, s.bj) - f(s.mi, s.mj);
    }
    return f(s.bi, s.bj);
  });
}

/// Plain periodic/copy fill for auxiliary scalar fields (velocities, B).
inline void fill_scalar_ghosts(ScalarField& a, const BoundarySpec& bc) {
  detail::fill_frame(a, bc, [&](BoundaryKind kind, const detail::GhostSite& s, const ScalarField& f) {
    if (kind == BoundaryKind::periodic) return f(s.wrap_i, s.wrap_j);
    return f(s.bi, s.bj);
  });
}

}  // namespace fsmhd
