#pragma once

// Case execution: time-step control, the run loop for coupled MHD and
// stand-alone H-J problems, field dumps, run manifests and convergence
// tables.

#include "fsmhd/cases.hpp"
#include "fsmhd/ct.hpp"
#include "fsmhd/hj_integrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fsmhd {

inline constexpr const char* kVersion = "fsmhd 1.0.0";

struct RunConfig {
  std::string case_id;
  HjScheme scheme = HjScheme::pl;
  bool sigma_on = true;
  int nx = 0;
  int ny = 0;
  double cfl = -1.0;     // < 0: case default
  double tfinal = -1.0;  // < 0: case default
  double dt = -1.0;      // < 0: case rule; otherwise a fixed step
  double dt_max = -1.0;  // fallback when the wave speed vanishes; < 0: final time
  std::string out_dir;   // empty: no files
  int output_every = 0;  // dump every N steps; 0: final state only
  std::uint64_t seed = 1;
  double gamma = kDefaultGamma;
  double eps = weno::kEpsilon;
  bool full = false;
  double blast_field = -1.0;
  bool correct_each_stage = false;

  void validate() const {
    if (case_id.empty()) throw ConfigError("missing case id");
    if (cfl == 0.0 || (cfl > 0.0 && !std::isfinite(cfl))) throw ConfigError("CFL must be positive");
    if (cfl < 0.0 && cfl != -1.0) throw ConfigError("CFL must be positive");
    if (tfinal < 0.0 && tfinal != -1.0) throw ConfigError("final time must be non-negative");
    if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
    if (!(eps > 0.0)) throw ConfigError("WENO epsilon must be positive");
    if (output_every < 0) throw ConfigError("output cadence must be non-negative");
    if (nx < 0 || ny < 0) throw ConfigError("node counts must be positive");
  }
};

inline const char* to_string(HjScheme s) { return s == HjScheme::pl ? "pl" : "npl"; }

inline HjScheme scheme_from_string(const std::string& s) {
  if (s == "pl") return HjScheme::pl;
  if (s == "npl") return HjScheme::npl;
  throw ConfigError("scheme must be pl or npl, got '" + s + "'");
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad number for '" + key + "': '" + v + "'");
  }
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for '" + key + "': '" + v + "'");
  }
}

inline bool parse_switch(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError("bad switch for '" + key + "': '" + v + "'");
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Sets one configuration entry; keys mirror the command-line flags.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "case") c.case_id = value;
  else if (key == "scheme") c.scheme = scheme_from_string(value);
  else if (key == "sigma") c.sigma_on = parse_switch(key, value);
  else if (key == "nx") c.nx = static_cast<int>(parse_int(key, value));
  else if (key == "ny") c.ny = static_cast<int>(parse_int(key, value));
  else if (key == "cfl") c.cfl = parse_double(key, value);
  else if (key == "tfinal") c.tfinal = parse_double(key, value);
  else if (key == "dt") c.dt = parse_double(key, value);
  else if (key == "dt_max") c.dt_max = parse_double(key, value);
  else if (key == "out") c.out_dir = value;
  else if (key == "output_every") c.output_every = static_cast<int>(parse_int(key, value));
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "gamma") c.gamma = parse_double(key, value);
  else if (key == "eps") c.eps = parse_double(key, value);
  else if (key == "full") c.full = parse_switch(key, value);
  else if (key == "blast_field") c.blast_field = parse_double(key, value);
  else if (key == "correct_each_stage") c.correct_each_stage = parse_switch(key, value);
  else if (key == "version") {
    // Written by manifests; informational only.
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

/// Flat `key = value` text; '#' starts a comment.
inline RunConfig parse_config(std::istream& in, RunConfig base = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(base, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return base;
}

inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return parse_config(in, std::move(base));
}

/// Config echo in the same format parse_config reads.
inline std::string manifest_text(const RunConfig& c) {
  using detail::fmt;
  std::ostringstream o;
  o << "version = " << kVersion << "\n"
    << "case = " << c.case_id << "\n"
    << "scheme = " << to_string(c.scheme) << "\n"
    << "sigma = " << (c.sigma_on ? "on" : "off") << "\n"
    << "nx = " << c.nx << "\n"
    << "ny = " << c.ny << "\n"
    << "cfl = " << fmt(c.cfl) << "\n"
    << "tfinal = " << fmt(c.tfinal) << "\n"
    << "dt = " << fmt(c.dt) << "\n"
    << "dt_max = " << fmt(c.dt_max) << "\n"
    << "output_every = " << c.output_every << "\n"
    << "seed = " << c.seed << "\n"
    << "gamma = " << fmt(c.gamma) << "\n"
    << "eps = " << fmt(c.eps) << "\n"
    << "full = " << (c.full ? "on" : "off") << "\n"
    << "blast_field = " << fmt(c.blast_field) << "\n"
    << "correct_each_stage = " << (c.correct_each_stage ? "on" : "off") << "\n";
  return o.str();
}

struct ErrorReport {
  double l1 = 0.0;    // mean |error| over all stored nodes
  double linf = 0.0;
  double wall_seconds = 0.0;
};

struct RunResult {
  std::string case_id;
  bool ok = true;
  std::string failure;  // empty on success
  double failure_time = -1.0;
  int failure_i = -1;
  int failure_j = -1;
  int steps = 0;
  double time = 0.0;
  double wall_seconds = 0.0;
  std::optional<ErrorReport> error;
  double max_abs_v = 0.0;
  double max_abs_w = 0.0;
  double min_rho = 0.0;
  double min_p = 0.0;
  double a_min = 0.0;
  double a_max = 0.0;
  double div_max = 0.0;
  double div_l1 = 0.0;
  std::vector<std::string> files;
  // Final fields.
  GridField grid;
  std::optional<CoupledState> mhd;
  std::optional<ScalarField> phi;
};

/// Writes the node fields as CSV. `q` may be null (H-J runs): fluid columns
/// are then nan. `div` may be null.
inline void write_fields(const std::string& path, const GridField& g, const StateField* q,
                         const ScalarField& a, const ScalarField* div, double gamma = kDefaultGamma) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "i,j,x,y,rho,u,v,w,p,B1,B2,B3,A,divB\n";
  char buf[512];
  for_interior(g.ni(), g.nj(), [&](int i, int j) {
    double f[8];
    std::fill(f, f + 8, std::numeric_limits<double>::quiet_NaN());
    if (q) {
      const Vec8& c = (*q)(i, j);
      f[0] = c(kRho);
      f[1] = c(kMx) / c(kRho);
      f[2] = c(kMy) / c(kRho);
      f[3] = c(kMz) / c(kRho);
      f[4] = pressure(c, gamma);
      f[5] = c(kBx);
      f[6] = c(kBy);
      f[7] = c(kBz);
    }
    const double d = div ? (*div)(i, j) : std::numeric_limits<double>::quiet_NaN();
    std::snprintf(buf, sizeof buf,
                  "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, j,
                  g.x(i, j), g.y(i, j), f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], a(i, j), d);
    out << buf;
  });
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

/// Largest characteristic speed in computational space, max over nodes of
/// the spectral radius of each transformed flux divided by |J^-1|.
inline double fluid_speed(const StateField& q, const GridField& g, double gamma) {
  const MetricSet m = free_stream_metrics(g);
  double a = 0.0;
  for_interior(g.ni(), g.nj(), [&](int i, int j) {
    const double jinv = std::abs(m.jinv(i, j));
    a = std::max({a, spectral_radius(q(i, j), m.xi_node(i, j), gamma) / jinv,
                  spectral_radius(q(i, j), m.eta_node(i, j), gamma) / jinv});
  });
  return a;
}

/// Time step for the next step from tau; never oversteps t_final.
inline double compute_dt(const CaseDefinition& c, const RunConfig& cfg, double tau, double t_final,
                         double speed) {
  const double cfl = cfg.cfl > 0.0 ? cfg.cfl : c.cfl;
  const double h = std::min(c.grid.dxi(), c.grid.deta());
  const double dt_max = cfg.dt_max > 0.0 ? cfg.dt_max : std::max(t_final, 1e-300);
  double dt = 0.0;
  if (cfg.dt > 0.0) {
    dt = cfg.dt;
  } else {
    switch (c.rule) {
      case TimeRule::fixed:
        dt = c.fixed_dt;
        break;
      case TimeRule::power_5_3:
        // Normalised spacing 1 / (I_max - 1): the 5/3 power is not unit-free.
        dt = t_final / std::ceil(t_final / std::pow(1.0 / (c.grid.i_max - 1), 5.0 / 3.0));
        break;
      case TimeRule::cfl_fluid:
      case TimeRule::cfl_hj:
        dt = speed > 0.0 ? cfl * h / speed : dt_max;
        break;
    }
  }
  dt = std::min(dt, dt_max);
  const double remaining = t_final - tau;
  // Absorb a sliver left by roundoff into the last step.
  if (remaining <= dt * (1.0 + 1e-9)) dt = remaining;
  return dt;
}

namespace detail {

inline std::string dump_name(const RunConfig& cfg, int step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "fields_%06d.csv", step);
  return (std::filesystem::path(cfg.out_dir) / buf).string();
}

inline void prepare_output(const RunConfig& cfg, const GridField& g, RunResult& r) {
  if (cfg.out_dir.empty()) return;
  std::filesystem::create_directories(cfg.out_dir);
  const auto manifest = (std::filesystem::path(cfg.out_dir) / "manifest.txt").string();
  std::ofstream m(manifest);
  if (!m) throw std::runtime_error("cannot open '" + manifest + "' for writing");
  m << manifest_text(cfg);
  r.files.push_back(manifest);
  const auto grid = (std::filesystem::path(cfg.out_dir) / "grid.csv").string();
  write_grid_csv(g, grid);
  r.files.push_back(grid);
}

inline void record_failure(RunResult& r, const PhysicalStateError& e, double tau) {
  r.ok = false;
  r.failure = e.describe();
  r.failure_time = e.time >= 0.0 ? e.time : tau;
  r.failure_i = e.i;
  r.failure_j = e.j;
}

}  // namespace detail

inline RunResult run_mhd(const CaseDefinition& c, const RunConfig& cfg) {
  CoupledConfig cc;
  cc.flux = {cfg.gamma, cfg.eps, cfg.sigma_on};
  cc.scheme = cfg.scheme;
  cc.bc = c.bc;
  cc.farfield_q = c.farfield_q;
  cc.farfield_a = c.farfield_a;
  cc.a_offset_xi = c.a_offset_xi;
  cc.a_offset_eta = c.a_offset_eta;
  cc.correct_each_stage = cfg.correct_each_stage;
  const CoupledSolver solver(Mesh(c.grid), cc);
  const double t_final = cfg.tfinal >= 0.0 ? cfg.tfinal : c.t_final;

  RunResult r;
  r.case_id = c.id;
  const auto start = std::chrono::steady_clock::now();
  CoupledState s = solver.initialize(c.w0, c.a0);
  detail::prepare_output(cfg, solver.grid_at(0.0), r);

  auto dump = [&](const CoupledState& st) {
    if (cfg.out_dir.empty()) return;
    const GridField g = solver.grid_at(st.time);
    const StateField q = solver.conserved(st);
    const auto div = solver.divergence(st);
    const auto path = detail::dump_name(cfg, st.step);
    write_fields(path, g, &q, st.a, &div.div, cfg.gamma);
    r.files.push_back(path);
  };

  try {
    while (s.time < t_final * (1.0 - 1e-14) && t_final > 0.0) {
      double speed = 0.0;
      if (c.rule == TimeRule::cfl_fluid && cfg.dt <= 0.0)
        speed = fluid_speed(solver.conserved(s), solver.grid_at(s.time), cfg.gamma);
      const double dt = compute_dt(c, cfg, s.time, t_final, speed);
      if (!(dt > 0.0)) break;
      solver.step(s, dt);
      if (cfg.output_every > 0 && s.step % cfg.output_every == 0) dump(s);
    }
  } catch (PhysicalStateError& e) {
    e.case_id = c.id;
    detail::record_failure(r, e, s.time);
  }
  if (r.ok && (cfg.output_every == 0 || s.step % cfg.output_every != 0)) dump(s);

  r.steps = s.step;
  r.time = s.time;
  r.grid = solver.grid_at(s.time);
  const StateField q = solver.conserved(s);
  r.min_rho = r.min_p = std::numeric_limits<double>::infinity();
  r.a_min = std::numeric_limits<double>::infinity();
  r.a_max = -std::numeric_limits<double>::infinity();
  for_interior(q.ni(), q.nj(), [&](int i, int j) {
    const Vec8& v = q(i, j);
    r.max_abs_v = std::max(r.max_abs_v, std::abs(v(kMy) / v(kRho)));
    r.max_abs_w = std::max(r.max_abs_w, std::abs(v(kMz) / v(kRho)));
    r.min_rho = std::min(r.min_rho, v(kRho));
    r.min_p = std::min(r.min_p, pressure(v, cfg.gamma));
    r.a_min = std::min(r.a_min, s.a(i, j));
    r.a_max = std::max(r.a_max, s.a(i, j));
  });
  if (r.ok) {
    const auto div = solver.divergence(s);
    r.div_max = div.max;
    r.div_l1 = div.l1;
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.mhd = std::move(s);
  return r;
}

template <class Ham>
RunResult run_hj_with(const CaseDefinition& c, const RunConfig& cfg, const Ham& h) {
  const HjIntegrator<Ham> integ(Mesh(c.grid), h, cfg.scheme, c.bc, 0.0, 0.0, cfg.eps);
  const double t_final = cfg.tfinal >= 0.0 ? cfg.tfinal : c.t_final;
  RunResult r;
  r.case_id = c.id;
  const auto start = std::chrono::steady_clock::now();
  ScalarField phi = integ.sample(c.phi0);
  detail::prepare_output(cfg, integ.grid_at(0.0), r);
  double t = 0.0;
  int step = 0;
  auto dump = [&] {
    if (cfg.out_dir.empty()) return;
    const auto path = detail::dump_name(cfg, step);
    write_fields(path, integ.grid_at(t), nullptr, phi, nullptr, cfg.gamma);
    r.files.push_back(path);
  };
  while (t < t_final * (1.0 - 1e-14) && t_final > 0.0) {
    const double speed = c.rule == TimeRule::cfl_hj ? integ.lambda(phi, t) : 0.0;
    const double dt = compute_dt(c, cfg, t, t_final, speed);
    if (!(dt > 0.0)) break;
    phi = integ.step(phi, t, dt);
    t += dt;
    ++step;
    if (cfg.output_every > 0 && step % cfg.output_every == 0) dump();
  }
  if (cfg.output_every == 0 || step % cfg.output_every != 0) dump();
  r.steps = step;
  r.time = t;
  r.grid = integ.grid_at(t);
  r.a_min = std::numeric_limits<double>::infinity();
  r.a_max = -std::numeric_limits<double>::infinity();
  for_interior(phi.ni(), phi.nj(), [&](int i, int j) {
    r.a_min = std::min(r.a_min, phi(i, j));
    r.a_max = std::max(r.a_max, phi(i, j));
  });
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (c.exact) {
    ErrorReport e;
    for_interior(phi.ni(), phi.nj(), [&](int i, int j) {
      const double d = std::abs(phi(i, j) - c.exact(r.grid.x(i, j), r.grid.y(i, j), t));
      e.l1 += d;
      e.linf = std::max(e.linf, d);
    });
    e.l1 /= static_cast<double>(phi.ni()) * phi.nj();
    e.wall_seconds = r.wall_seconds;
    r.error = e;
  }
  r.phi = std::move(phi);
  return r;
}

inline CaseOverrides overrides_from(const RunConfig& cfg) {
  CaseOverrides o;
  o.nx = cfg.nx;
  o.ny = cfg.ny;
  o.seed = cfg.seed;
  o.full = cfg.full;
  o.blast_field = cfg.blast_field;
  return o;
}

/// Runs a configured case. Physical-validity failures are reported in the
/// result (ok = false); configuration problems throw ConfigError.
inline RunResult run_case(const RunConfig& cfg) {
  cfg.validate();
  const CaseDefinition c = make_case(cfg.case_id, overrides_from(cfg));
  if (c.kind == ProblemKind::mhd) return run_mhd(c, cfg);
  if (c.hamiltonian == HamiltonianKind::sine) return run_hj_with(c, cfg, SineHamiltonian{});
  return run_hj_with(c, cfg, c.linear);
}

struct ConvergenceRow {
  int nodes = 0;
  double l1 = 0.0;
  double linf = 0.0;
  double order_l1 = std::numeric_limits<double>::quiet_NaN();
  double order_linf = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
};

/// Successive 2x refinements starting from `base` nodes per direction
/// (n -> 2n - 1 keeps the domain and halves the spacing).
inline std::vector<ConvergenceRow> convergence(RunConfig cfg, int levels, int base = 41) {
  if (levels < 1) throw ConfigError("convergence needs at least one level");
  std::vector<ConvergenceRow> rows;
  int n = base;
  for (int k = 0; k < levels; ++k) {
    cfg.nx = cfg.ny = n;
    cfg.out_dir.clear();
    const RunResult r = run_case(cfg);
    if (!r.error) throw ConfigError("case '" + cfg.case_id + "' has no exact solution");
    ConvergenceRow row;
    row.nodes = n;
    row.l1 = r.error->l1;
    row.linf = r.error->linf;
    row.wall_seconds = r.wall_seconds;
    if (!rows.empty()) {
      row.order_l1 = std::log2(rows.back().l1 / row.l1);
      row.order_linf = std::log2(rows.back().linf / row.linf);
    }
    rows.push_back(row);
    n = 2 * n - 1;
  }
  return rows;
}

}  // namespace fsmhd
