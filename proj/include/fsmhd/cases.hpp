#pragma once

// Registry of the benchmark problems: grids, boundary conditions, initial
// data and time-step rules.

#include "fsmhd/boundary.hpp"
#include "fsmhd/core.hpp"
#include "fsmhd/grid.hpp"
#include "fsmhd/hj_solver.hpp"
#include "fsmhd/mhd.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace fsmhd {

enum class TimeRule {
  fixed,        // dt = fixed_dt
  power_5_3,    // dt = T / ceil(T / h^(5/3)), h = 1 / (I_max - 1)
  cfl_fluid,    // dt = CFL min(dxi, deta) / alpha, alpha from the fluid state
  cfl_hj,       // dt = CFL dxi / lambda, lambda from the H-J dissipation bound
};

enum class ProblemKind { hamilton_jacobi, mhd };
enum class HamiltonianKind { linear, sine };

struct CaseOverrides {
  int nx = 0;  // node counts I_max, J_max; 0 keeps the case default
  int ny = 0;
  std::uint64_t seed = 1;
  bool full = false;  // full-resolution variant where a reduced default exists
  double blast_field = -1.0;  // per-component field of the blast; < 0 keeps the default
};

struct CaseDefinition {
  std::string id;
  ProblemKind kind = ProblemKind::mhd;
  GridSpec grid;
  BoundarySpec bc;
  double t_final = 0.0;
  TimeRule rule = TimeRule::fixed;
  double fixed_dt = 0.0;
  double cfl = 0.1;

  // MHD data; B1, B2 come from the curl of a0.
  std::function<Primitive(double, double)> w0;
  std::function<double(double, double)> a0;
  double a_offset_xi = 0.0;
  double a_offset_eta = 0.0;
  StateFunction farfield_q;
  ScalarFunction farfield_a;

  // Hamilton-Jacobi data.
  HamiltonianKind hamiltonian = HamiltonianKind::linear;
  LinearHamiltonian linear{};
  std::function<double(double, double)> phi0;
  std::function<double(double, double, double)> exact;  // may be empty
};

inline const std::vector<std::string>& case_ids() {
  static const std::vector<std::string> ids = {
      "hj_accuracy",     "hj_riemann",       "freestream_wavy", "freestream_random",
      "freestream_moving", "freestream_sphere", "field_loop_wavy", "field_loop_random",
      "field_loop_moving", "rotor",            "blast_wavy",      "blast_random",
      "blast_moving",    "bow_shock"};
  return ids;
}

namespace cases {

/// Wavy lattice with amplitudes given in physical units (dxi * A_x). `waves`
/// is the phase swept across the domain; a multiple of 2 pi keeps periodic
/// cases free of a kink at the seam.
inline GridSpec wavy(int n_i, int n_j, double lx, double ly, double amp_x_phys,
                     double amp_y_phys, double waves, bool moving = false) {
  GridSpec s;
  s.kind = moving ? GridKind::moving_wavy : GridKind::wavy;
  s.i_max = n_i;
  s.j_max = n_j;
  s.lx = lx;
  s.ly = ly;
  s.x_min = -0.5 * lx;
  s.y_min = -0.5 * ly;
  s.amp_x = amp_x_phys / s.dxi();
  s.amp_y = amp_y_phys / s.deta();
  s.waves_x = waves;
  s.waves_y = waves;
  s.omega = 1.0;
  return s;
}

inline GridSpec randomized(int n_i, int n_j, double x0, double x1, double y0, double y1,
                           double fraction, std::uint64_t seed) {
  GridSpec s;
  s.kind = GridKind::randomized;
  s.i_max = n_i;
  s.j_max = n_j;
  s.x_min = x0;
  s.y_min = y0;
  s.lx = x1 - x0;
  s.ly = y1 - y0;
  s.perturbation = fraction;
  s.seed = seed;
  return s;
}

inline GridSpec spherical(int n) {
  GridSpec s;
  s.kind = GridKind::spherical;
  s.i_max = n;
  s.j_max = n;
  s.lx = 1.0;
  s.ly = 1.0;
  s.periodic_xi = false;
  s.periodic_eta = false;
  return s;
}

inline int pick(int requested, int fallback) { return requested > 0 ? requested : fallback; }

inline void free_stream(CaseDefinition& c) {
  constexpr double g = kDefaultGamma;
  c.w0 = [](double, double) {
    Primitive w;
    w.rho = g * g;
    w.p = g;
    w.u = 1.0;
    return w;
  };
  c.a0 = [](double x, double y) { return y - x; };
  c.a_offset_xi = -c.grid.lx;
  c.a_offset_eta = c.grid.ly;
  c.rule = TimeRule::fixed;
  c.t_final = 10.0;
}

inline void field_loop(CaseDefinition& c) {
  const double angle = std::atan(0.5);
  c.w0 = [angle](double, double) {
    Primitive w;
    w.rho = 1.0;
    w.u = std::sqrt(5.0) * std::cos(angle);
    w.v = std::sqrt(5.0) * std::sin(angle);
    w.p = 1.0;
    return w;
  };
  c.a0 = [](double x, double y) {
    const double r = std::hypot(x, y);
    return r <= 0.3 ? 0.001 * (0.3 - r) : 0.0;
  };
  c.rule = TimeRule::cfl_fluid;
  c.cfl = 0.1;
  c.t_final = 2.0;
}

inline void blast(CaseDefinition& c, double field) {
  c.w0 = [](double x, double y) {
    Primitive w;
    w.rho = 1.0;
    w.p = std::hypot(x, y) <= 0.1 ? 1000.0 : 0.1;
    return w;
  };
  c.a0 = [field](double x, double y) { return field * y - field * x; };
  c.a_offset_xi = -field * c.grid.lx;
  c.a_offset_eta = field * c.grid.ly;
  c.rule = TimeRule::cfl_fluid;
  c.cfl = 0.1;
  c.t_final = 0.01;
}

}  // namespace cases

/// In-plane field component of the blast, 50 / sqrt(2 pi), so that
/// |B| = 100 / sqrt(4 pi) along the diagonal.
inline const double kBlastField = 50.0 / std::sqrt(2.0 * std::numbers::pi);

inline CaseDefinition make_case(const std::string& id, const CaseOverrides& o = {}) {
  using namespace cases;
  CaseDefinition c;
  c.id = id;
  const double pi = std::numbers::pi;
  if (id == "hj_accuracy") {
    const int n = pick(o.nx, 41);
    c.kind = ProblemKind::hamilton_jacobi;
    c.grid = wavy(n, pick(o.ny, n), 2.0 * pi, 2.0 * pi, 0.01, -0.02, 2.0 * pi);
    c.linear = {-1.0, -1.0};
    c.phi0 = [](double x, double y) { return std::sin(x + y); };
    c.exact = [](double x, double y, double t) { return std::sin(x + y + 2.0 * t); };
    c.t_final = 0.5;
    c.rule = TimeRule::power_5_3;
  } else if (id == "hj_riemann") {
    const int n = pick(o.nx, 81);
    c.kind = ProblemKind::hamilton_jacobi;
    GridSpec s = wavy(n, pick(o.ny, n), 2.0, 2.0, 0.0, 0.0, 16.0 * pi);
    s.amp_x = 1.5;
    s.amp_y = -1.5;
    c.grid = s;
    c.hamiltonian = HamiltonianKind::sine;
    c.phi0 = [pi](double x, double y) { return pi * (std::abs(y) - std::abs(x)); };
    c.t_final = 1.0;
    c.rule = TimeRule::cfl_hj;
    c.cfl = 0.1;
  } else if (id == "freestream_wavy") {
    const int n = pick(o.nx, 41);
    c.grid = wavy(n, pick(o.ny, n), 4.0 * pi, 4.0 * pi, 0.2, 0.2, 16.0 * pi);
    free_stream(c);
    c.fixed_dt = 0.05;
  } else if (id == "freestream_random") {
    const int n = pick(o.nx, 41);
    c.grid = randomized(n, pick(o.ny, n), -0.5, 0.5, -0.5, 0.5, 0.1, o.seed);
    free_stream(c);
    c.fixed_dt = 0.05;
  } else if (id == "freestream_moving") {
    const int n = pick(o.nx, 21);
    c.grid = wavy(n, pick(o.ny, n), 1.0, 1.0, 0.05, 0.05, 4.0 * pi, true);
    free_stream(c);
    c.fixed_dt = 0.01;
  } else if (id == "freestream_sphere") {
    c.grid = spherical(pick(o.nx, 41));
    if (o.ny > 0 && o.ny != c.grid.i_max) throw ConfigError("spherical grid needs nx == ny");
    free_stream(c);
    c.a_offset_xi = c.a_offset_eta = 0.0;
    c.bc = BoundarySpec::all(BoundaryKind::dirichlet);
    const auto w0 = c.w0;
    c.farfield_q = [w0](double x, double y, double) {
      Primitive w = w0(x, y);
      w.bx = 1.0;
      w.by = 1.0;
      return primitive_to_conserved(w);
    };
    // A_t = -u . grad A = u B2 - v B1 = 1 for this state.
    c.farfield_a = [](double x, double y, double t) { return y - x + t; };
    c.t_final = 0.1;
    c.fixed_dt = 5e-4;
  } else if (id == "field_loop_wavy" || id == "field_loop_moving") {
    c.grid = wavy(pick(o.nx, 101), pick(o.ny, 51), 2.0, 1.0, 0.03, 0.06, 8.0 * pi, id == "field_loop_moving");
    field_loop(c);
  } else if (id == "field_loop_random") {
    c.grid = randomized(pick(o.nx, 101), pick(o.ny, 51), -1.0, 1.0, -0.5, 0.5, 0.1, o.seed);
    field_loop(c);
  } else if (id == "rotor") {
    const int n = pick(o.nx, 101);
    c.grid = randomized(n, pick(o.ny, n), 0.0, 1.0, 0.0, 1.0, 0.05, o.seed);
    const double b1 = 2.5 / std::sqrt(4.0 * pi);
    c.w0 = [](double x, double y) {
      constexpr double r0 = 0.1;
      constexpr double r1 = 0.115;
      const double dx = x - 0.5;
      const double dy = y - 0.5;
      const double r = std::hypot(dx, dy);
      Primitive w;
      w.p = 0.5;
      if (r <= r0) {
        w.rho = 10.0;
        w.u = -dy / r0;
        w.v = dx / r0;
      } else if (r <= r1) {
        const double f = (r1 - r) / (r1 - r0);
        w.rho = 1.0 + 9.0 * f;
        w.u = -f * dy / r;
        w.v = f * dx / r;
      }
      return w;
    };
    c.a0 = [b1](double, double y) { return b1 * y; };
    c.a_offset_eta = b1 * c.grid.ly;
    c.rule = TimeRule::cfl_fluid;
    c.cfl = 0.1;
    c.t_final = 0.295;
  } else if (id == "blast_wavy" || id == "blast_moving" || id == "blast_random") {
    const int n = pick(o.nx, o.full ? 101 : 51);
    const int m = pick(o.ny, n);
    if (id == "blast_random")
      c.grid = randomized(n, m, 0.0, 1.0, 0.0, 1.0, 0.01, o.seed);
    else
      c.grid = wavy(n, m, 1.0, 1.0, 0.03, 0.03, 4.0 * pi, id == "blast_moving");
    blast(c, o.blast_field > 0.0 ? o.blast_field : kBlastField);
  } else if (id == "bow_shock") {
    c.grid = spherical(pick(o.nx, 151));
    c.grid.r0 = 0.125;
    constexpr double r0 = 0.125;
    constexpr double dr = 0.125;
    c.bc = {BoundaryKind::dirichlet, BoundaryKind::reflecting, BoundaryKind::outflow,
            BoundaryKind::outflow};
    c.w0 = [](double, double) {
      Primitive w;
      w.rho = 1.0;
      w.u = 2.0;
      w.p = 0.2;
      return w;
    };
    c.a0 = [pi](double x, double y) {
      const double r = std::hypot(x, y);
      if (r <= r0 + dr) return 0.1 * y * std::sin(pi * (r - r0) / (2.0 * dr));
      return 0.1 * y;
    };
    c.farfield_q = [](double, double, double) {
      Primitive w;
      w.rho = 1.0;
      w.u = 2.0;
      w.p = 0.2;
      w.bx = 0.1;
      return primitive_to_conserved(w);
    };
    c.farfield_a = [](double, double y, double) { return 0.1 * y; };
    c.rule = TimeRule::cfl_fluid;
    c.cfl = 0.1;
    c.t_final = 6.0;
  } else {
    throw ConfigError("unknown case '" + id + "'");
  }
  c.grid.validate();
  return c;
}

}  // namespace fsmhd
