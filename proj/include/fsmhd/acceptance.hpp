#pragma once

// Executable acceptance checks. Each check runs the solver at the stated
// sizes and compares against fixed thresholds; none of them reads stored
// results.

#include "fsmhd/driver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace fsmhd::acceptance {

struct Options {
  bool full = false;  // adds the 101^2 NPL blast comparison
};

struct Outcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline std::string fixed(double v, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline RunResult run(const std::string& id, HjScheme scheme = HjScheme::pl, int nx = 0, int ny = 0,
                     double tfinal = -1.0) {
  RunConfig cfg;
  cfg.case_id = id;
  cfg.scheme = scheme;
  cfg.nx = nx;
  cfg.ny = ny;
  cfg.tfinal = tfinal;
  return run_case(cfg);
}

/// Fills every padded node of a scalar field from its coordinates.
template <class Fn>
ScalarField sample_padded(const GridField& g, Fn&& f) {
  ScalarField out(g.ni(), g.nj());
  for (int j = -kGhost; j < g.nj() + kGhost; ++j)
    for (int i = -kGhost; i < g.ni() + kGhost; ++i) out(i, j) = f(g.x(i, j), g.y(i, j));
  return out;
}

/// Grid generators exercised by the geometric checks; the moving family is
/// sampled at several instants.
inline std::vector<std::pair<std::string, GridField>> generator_snapshots() {
  std::vector<std::pair<std::string, GridField>> out;
  GridSpec id;
  id.i_max = id.j_max = 21;
  out.emplace_back("identity", generate(id, 0.0));
  out.emplace_back("wavy", generate(make_case("freestream_wavy").grid, 0.0));
  out.emplace_back("randomized", generate(make_case("freestream_random").grid, 0.0));
  const Mesh moving(make_case("freestream_moving").grid);
  for (double tau : {0.0, 0.13, 0.71})
    out.emplace_back("moving@" + fixed(tau), moving.generate(tau));
  out.emplace_back("spherical", generate(make_case("freestream_sphere").grid, 0.0));
  return out;
}

inline double poly(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
  return v;
}

inline double poly_derivative(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) v = v * x + static_cast<double>(k) * c[k];
  return v;
}

}  // namespace detail

/// L1 errors of the linear H-J problem on the wavy grid at 41^2 and 81^2.
inline Outcome hj_accuracy() {
  Outcome o{"hj-accuracy", false, ""};
  RunConfig cfg;
  cfg.case_id = "hj_accuracy";
  const auto rows = convergence(cfg, 2, 41);
  const std::array<double, 2> ref = {9.37e-6, 2.96e-7};
  bool ok = true;
  for (int k = 0; k < 2; ++k) {
    const double ratio = rows[k].l1 / ref[k];
    ok = ok && ratio <= 3.0 && ratio >= 1.0 / 3.0;
    o.detail += "L1(" + std::to_string(rows[k].nodes) + ")=" + detail::sci(rows[k].l1) + " ";
  }
  ok = ok && rows[1].order_l1 >= 4.5;
  o.detail += "order=" + detail::fixed(rows[1].order_l1) + " (need within x3 of 9.37e-6/2.96e-7, order>=4.5)";
  o.pass = ok;
  return o;
}

/// Uniform flow on the four test grids: v and w stay at roundoff with PL,
/// while the NPL potential solver perturbs v on the wavy grid.
inline Outcome free_stream() {
  Outcome o{"free-stream", true, ""};
  for (const char* id : {"freestream_wavy", "freestream_random", "freestream_moving", "freestream_sphere"}) {
    const RunResult r = detail::run(id);
    const bool ok = r.ok && r.max_abs_v <= 1e-12 && r.max_abs_w <= 1e-12;
    o.pass = o.pass && ok;
    o.detail += std::string(id + 11) + ":";
    if (r.ok)
      o.detail += " v=" + detail::sci(r.max_abs_v) + " w=" + detail::sci(r.max_abs_w) + ";";
    else
      o.detail += " stopped at t=" + detail::sci(r.failure_time) + " (" + r.failure + ");";
    o.detail += " ";
  }
  const RunResult npl = detail::run("freestream_wavy", HjScheme::npl);
  const bool contrast = npl.ok && npl.max_abs_v >= 1e-4;
  o.pass = o.pass && contrast;
  o.detail += "npl wavy: v=" + detail::sci(npl.max_abs_v) + " (need PL <= 1e-12, NPL >= 1e-4)";
  return o;
}

/// Linear data phi = C1 x + C2 y + C3 is reproduced exactly by the PL
/// Hamilton-Jacobi solver for any Hamiltonian on any admissible lattice.
inline Outcome linearity() {
  Outcome o{"linearity", true, ""};
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> coef(-10.0, 10.0);
  std::uniform_real_distribution<double> speed(-2.0, 2.0);
  constexpr int kNodes = 17;
  constexpr int kSteps = 100;
  std::vector<std::pair<std::string, GridSpec>> grids;
  grids.emplace_back("wavy", cases::wavy(kNodes, kNodes, 1.0, 1.0, 0.05, 0.05, 4.0 * std::numbers::pi));
  grids.emplace_back("randomized", cases::randomized(kNodes, kNodes, -0.5, 0.5, -0.5, 0.5, 0.1, 7));
  grids.emplace_back("moving", cases::wavy(kNodes, kNodes, 1.0, 1.0, 0.05, 0.05, 4.0 * std::numbers::pi, true));

  double worst = 0.0;
  int trials = 0;
  auto check = [&](const Mesh& mesh, const auto& h, double c1, double c2, double c3, double hval,
                   double max_speed) {
    const HjIntegrator integ(mesh, h, HjScheme::pl, {}, c1 * mesh.spec().lx, c2 * mesh.spec().ly);
    const double dt = 0.2 * std::min(mesh.spec().dxi(), mesh.spec().deta()) / max_speed;
    ScalarField phi = integ.sample([&](double x, double y) { return c1 * x + c2 * y + c3; });
    double t = 0.0;
    for (int n = 0; n < kSteps; ++n) {
      phi = integ.step(phi, t, dt);
      t += dt;
    }
    const GridField g = integ.grid_at(t);
    double err = 0.0;
    for_interior(g.ni(), g.nj(), [&](int i, int j) {
      const double exact = c1 * g.x(i, j) + c2 * g.y(i, j) + c3 - t * hval;
      err = std::max(err, std::abs(phi(i, j) - exact));
    });
    worst = std::max(worst, err / std::max({std::abs(c1), std::abs(c2), 1.0}));
    ++trials;
  };

  for (int k = 0; k < 20; ++k) {
    const double c1 = coef(rng);
    const double c2 = coef(rng);
    const double c3 = coef(rng);
    const LinearHamiltonian lin{speed(rng), speed(rng)};
    for (const auto& [name, spec] : grids) {
      const Mesh mesh(spec);
      check(mesh, lin, c1, c2, c3, lin.value(0, 0, c1, c2), std::max(std::abs(lin.a) + std::abs(lin.b), 1.0));
      check(mesh, SineHamiltonian{}, c1, c2, c3, std::sin(c1 + c2), 2.0);
    }
  }
  o.pass = worst <= 1e-11;
  o.detail = std::to_string(trials) + " runs x " + std::to_string(kSteps) +
             " steps, max error / max(|C1|,|C2|,1) = " + detail::sci(worst) + " (need <= 1e-11)";
  return o;
}

/// Discrete geometric identities and polynomial exactness of the stencils.
inline Outcome metric_identities() {
  Outcome o{"metric-identities", true, ""};
  double id_res = 0.0;
  double curl_err = 0.0;
  double angle_err = 0.0;
  for (const auto& [name, g] : detail::generator_snapshots()) {
    const auto res = metric_identity_residual(free_stream_metrics(g));
    id_res = std::max({id_res, res.ix, res.iy});
    const ScalarField a = detail::sample_padded(g, [](double x, double y) { return 3.0 * y - 2.0 * x; });
    const CurlField b = discrete_curl(a, g);
    for_interior(g.ni(), g.nj(), [&](int i, int j) {
      curl_err = std::max({curl_err, std::abs(b.b1(i, j) - 3.0) / 3.0, std::abs(b.b2(i, j) - 2.0) / 3.0});
      const SectorGeometry s = sector_geometry(g, i, j);
      angle_err = std::max(angle_err, std::abs(s.theta[0] + s.theta[1] + s.theta[2] + s.theta[3] -
                                               2.0 * std::numbers::pi));
    });
  }

  // Polynomial exactness on random coefficients; errors relative to the
  // largest sample magnitude.
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  constexpr double h = 0.1;
  constexpr double x0 = 0.37;
  double hj_err = 0.0;
  double interp_err = 0.0;
  double stencil_err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    for (int degree = 0; degree <= 5; ++degree) {
      std::vector<double> c(degree + 1);
      for (auto& v : c) v = u(rng);
      auto at = [&](double off) { return detail::poly(c, x0 + off * h); };
      double scale = 1.0;
      for (int l = -3; l <= 3; ++l) scale = std::max(scale, std::abs(at(l)));

      if (degree <= 3) {
        std::array<double, 7> s;
        for (int l = 0; l < 7; ++l) s[l] = at(l - 3);
        for (auto side : {weno::Side::minus, weno::Side::plus}) {
          const double d = weno::weno5_hj_derivative(s, h, side).value;
          hj_err = std::max(hj_err, std::abs(d - detail::poly_derivative(c, x0)) * h / scale);
        }
      }
      if (degree <= 4) {
        std::array<double, 6> s;
        for (int l = 0; l < 6; ++l) s[l] = at(l - 2);
        const double exact = at(0.5);
        for (auto side : {weno::Side::minus, weno::Side::plus}) {
          // Nonlinear weights are exact through degree 2; the limit of
          // linear weights (huge epsilon) is exact through degree 4.
          if (degree <= 2)
            interp_err = std::max(interp_err, std::abs(weno::weno5_interpolate(s, side).value - exact) / scale);
          interp_err =
              std::max(interp_err, std::abs(weno::weno5_interpolate(s, side, 1e30).value - exact) / scale);
        }
      }
      const double d6 = stencil::central7(stencil::kD6, [&](int l) { return at(l); }) / h;
      const double mid = stencil::half6(stencil::kMid6, [&](int l) { return at(l); });
      const double half_d = half_point_derivative([&](int l) { return at(l); }, h);
      stencil_err = std::max({stencil_err, std::abs(d6 - detail::poly_derivative(c, x0)) * h / scale,
                              std::abs(mid - at(0.5)) / scale,
                              std::abs(half_d - detail::poly_derivative(c, x0 + 0.5 * h)) * h / scale});
    }
  }

  o.pass = id_res <= 1e-13 && curl_err <= 1e-13 && angle_err <= 1e-12 && hj_err <= 1e-12 &&
           interp_err <= 1e-12 && stencil_err <= 1e-12;
  o.detail = "I=" + detail::sci(id_res) + " curl=" + detail::sci(curl_err) + " sum(theta)-2pi=" +
             detail::sci(angle_err) + " weno-hj=" + detail::sci(hj_err) + " weno-interp=" +
             detail::sci(interp_err) + " linear-stencils=" + detail::sci(stencil_err);
  return o;
}

namespace detail {

// Smooth periodic state on [0, 1]^2 used by the spatial order check.
inline Primitive smooth_state(double x, double y) {
  constexpr double tp = 2.0 * std::numbers::pi;
  Primitive w;
  w.rho = 1.0 + 0.2 * std::sin(tp * (x + y));
  w.u = 0.5 + 0.1 * std::sin(tp * x);
  w.v = -0.3 + 0.1 * std::cos(tp * y);
  w.w = 0.05 * std::sin(tp * (x - y));
  w.p = 1.0 + 0.1 * std::cos(tp * (x + 2.0 * y));
  w.bx = 0.8 + 0.1 * std::sin(tp * y);
  w.by = 0.4 + 0.1 * std::cos(tp * x);
  w.bz = 0.2 * std::sin(tp * (x + y));
  return w;
}

// d/dx of the flux of the smooth state, by a fourth-order difference with a
// small step on the analytic composite (independent of the solver).
inline Vec8 flux_divergence(double x, double y) {
  constexpr double d = 1e-3;
  auto fx = [&](double s) { return directional_flux(smooth_state(x + s, y), 1.0, 0.0); };
  auto gy = [&](double s) { return directional_flux(smooth_state(x, y + s), 0.0, 1.0); };
  const Vec8 dfx = (fx(-2 * d) - 8.0 * fx(-d) + 8.0 * fx(d) - fx(2 * d)) / (12.0 * d);
  const Vec8 dgy = (gy(-2 * d) - 8.0 * gy(-d) + 8.0 * gy(d) - gy(2 * d)) / (12.0 * d);
  return dfx + dgy;
}

}  // namespace detail

/// RK3 order on a non-autonomous scalar ODE and the order of the MHD
/// right-hand side on a Cartesian lattice.
inline Outcome orders() {
  Outcome o{"rk3-and-spatial-order", false, ""};
  // y' = -y + sin t, y(0) = 1.
  auto exact = [](double t) { return 1.5 * std::exp(-t) + 0.5 * (std::sin(t) - std::cos(t)); };
  std::vector<double> ode_err;
  for (int n : {20, 40, 80}) {
    const double dt = 1.0 / n;
    double y = 1.0;
    for (int k = 0; k < n; ++k) {
      const double tn = k * dt;
      y = rk3_advance(
          y, [&](double u, int stage) { return -u + std::sin(rk3_stage_time(tn, dt, stage)); }, dt);
    }
    ode_err.push_back(std::abs(y - exact(1.0)));
  }
  const double ode_order = std::log2(ode_err[1] / ode_err[2]);

  std::vector<double> l1;
  std::vector<double> linf;
  for (int n : {41, 81, 161}) {
    GridSpec s;
    s.i_max = s.j_max = n;
    const GridField g = generate(s, 0.0);
    const MetricSet m = free_stream_metrics(g);
    StateField q(g.ni(), g.nj(), kGhost, Vec8::Zero());
    for_interior(g.ni(), g.nj(), [&](int i, int j) {
      q(i, j) = primitive_to_conserved(detail::smooth_state(g.x(i, j), g.y(i, j)));
    });
    fill_state_ghosts(q, BoundarySpec{}, g);
    const MhdRhs r = mhd_rhs(q, m);
    double e1 = 0.0;
    double einf = 0.0;
    for_interior(g.ni(), g.nj(), [&](int i, int j) {
      const Vec8 ref = -m.jinv(i, j) * detail::flux_divergence(g.x(i, j), g.y(i, j));
      const double e = (r.rhs(i, j) - ref).cwiseAbs().maxCoeff();
      e1 += e;
      einf = std::max(einf, e);
    });
    l1.push_back(e1 / (static_cast<double>(g.ni()) * g.nj()));
    linf.push_back(einf);
  }
  const double space_order = std::log2(l1[1] / l1[2]);
  o.pass = ode_order >= 2.9 && space_order >= 4.5;
  o.detail = "rk3 order=" + detail::fixed(ode_order) + " rhs L1 " + detail::sci(l1[0]) + " " +
             detail::sci(l1[1]) + " " + detail::sci(l1[2]) + " order=" + detail::fixed(space_order) +
             " (Linf order " + detail::fixed(std::log2(linf[1] / linf[2])) + "; need >=2.9, >=4.5)";
  return o;
}

/// Strong blast: PL keeps density and pressure positive to T = 0.01 at 51^2.
/// With `full`, NPL at 101^2 must lose positivity before T = 0.005 within a
/// factor two of the reference failure times.
inline Outcome blast(bool full) {
  Outcome o{"blast-robustness", true, ""};
  const std::array<const char*, 3> ids = {"blast_wavy", "blast_random", "blast_moving"};
  const std::array<double, 3> npl_ref = {0.002898, 0.002257, 0.001486};
  for (const char* id : ids) {
    const RunResult r = detail::run(id, HjScheme::pl, 51, 51);
    const bool ok = r.ok && r.time >= 0.01 * (1.0 - 1e-12) && r.min_rho > 0.0 && r.min_p > 0.0;
    o.pass = o.pass && ok;
    o.detail += std::string(id + 6) + ": ";
    o.detail += r.ok ? "t=" + detail::sci(r.time) + " min rho=" + detail::sci(r.min_rho) +
                           " min p=" + detail::sci(r.min_p) + "; "
                     : "failed at t=" + detail::sci(r.failure_time) + "; ";
  }
  if (!full) {
    o.detail += "NPL 101^2 comparison not run (full tier)";
    return o;
  }
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const RunResult r = detail::run(ids[k], HjScheme::npl, 101, 101, 0.005);
    const bool fails = !r.ok && r.failure_time < 0.005;
    const bool close = fails && r.failure_time <= 2.0 * npl_ref[k] && r.failure_time >= 0.5 * npl_ref[k];
    o.pass = o.pass && close;
    o.detail += std::string("npl ") + (ids[k] + 6) + ": " +
                (fails ? "fails at t=" + detail::sci(r.failure_time) : std::string("survives")) +
                " (ref " + detail::sci(npl_ref[k]) + "); ";
  }
  return o;
}

/// Field loop on the wavy lattice. The divergence that the unconstrained
/// induction update would leave behind (before the curl replacement) must
/// shrink at fourth order or better inside the loop, away from its centre
/// and rim; after the replacement it sits at roundoff. A long reduced run
/// keeps A inside the reference range.
inline Outcome field_loop() {
  Outcome o{"field-loop", false, ""};
  constexpr double r_in = 0.12;
  constexpr double r_out = 0.2;
  std::vector<double> pre;
  double post = 0.0;
  for (int n : {101, 201, 401}) {
    CaseOverrides ov;
    ov.nx = n;
    ov.ny = (n + 1) / 2;
    const CaseDefinition c = make_case("field_loop_wavy", ov);
    CoupledConfig cc;
    cc.a_offset_xi = c.a_offset_xi;
    cc.a_offset_eta = c.a_offset_eta;
    const CoupledSolver solver(Mesh(c.grid), cc);
    CoupledState s = solver.initialize(c.w0, c.a0);
    const GridField g = solver.grid_at(0.0);
    const double dt =
        0.1 * std::min(g.dxi, g.deta) / fluid_speed(solver.conserved(s), g, kDefaultGamma);
    CoupledState next = rk3_advance(
        s, [&](const CoupledState& u, int stage) { return solver.rhs(u, 0.0, dt, stage); }, dt,
        [](double a, const CoupledState& x, double b, const CoupledState& y) { return lincomb(a, x, b, y); });
    next.time = dt;
    const auto div = solver.divergence(next);
    // The loop centre moves with (2, 1); one step keeps it well inside the box.
    const double cx = 2.0 * dt;
    const double cy = dt;
    double worst = 0.0;
    for_interior(g.ni(), g.nj(), [&](int i, int j) {
      const double r = std::hypot(g.x(i, j) - cx, g.y(i, j) - cy);
      if (r >= r_in && r <= r_out) worst = std::max(worst, std::abs(div.div(i, j)));
    });
    pre.push_back(worst);
    solver.correct(next, next.time);
    post = std::max(post, solver.divergence(next).max);
  }
  const double order1 = std::log2(pre[0] / pre[1]);
  const double order2 = std::log2(pre[1] / pre[2]);

  const RunResult r = detail::run("field_loop_wavy", HjScheme::pl, 51, 26);
  constexpr double lo = -2.16e-6;
  constexpr double hi = 2.7e-4;
  constexpr double slack = 0.1 * (hi - lo);
  const bool in_range = r.ok && r.a_min >= lo - slack && r.a_max <= hi + slack;

  o.pass = order1 >= 4.0 && order2 >= 4.0 && post <= 1e-10 && in_range;
  o.detail = "masked div B* " + detail::sci(pre[0]) + " " + detail::sci(pre[1]) + " " + detail::sci(pre[2]) +
             " orders " + detail::fixed(order1) + " " + detail::fixed(order2) + "; corrected max " +
             detail::sci(post) + "; A in [" + detail::sci(r.a_min) + ", " + detail::sci(r.a_max) +
             "] at t=" + detail::fixed(r.time) + " (need orders>=4, A within [" + detail::sci(lo - slack) +
             ", " + detail::sci(hi + slack) + "])";
  return o;
}

inline Outcome guarded(const std::string& name, const std::function<Outcome()>& fn) {
  try {
    return fn();
  } catch (const PhysicalStateError& e) {
    return {name, false, "physical state error: " + e.describe()};
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

/// Runs every check, printing one PASS/FAIL line each as it completes.
inline bool run_all(std::ostream& out, const Options& opt) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"hj-accuracy", hj_accuracy},
      {"free-stream", free_stream},
      {"linearity", linearity},
      {"metric-identities", metric_identities},
      {"rk3-and-spatial-order", orders},
      {"blast-robustness", [&] { return blast(opt.full); }},
      {"field-loop", field_loop},
  };
  bool all = true;
  for (const auto& [name, fn] : checks) {
    const Outcome r = guarded(name, fn);
    all = all && r.pass;
    out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << std::endl;
  }
  return all;
}

}  // namespace fsmhd::acceptance
