#pragma once

// Test-grid generators and the free-stream-compatible metric discretisation.
//
// Node metrics are sixth-order central differences of the node coordinates.
// Half-point metrics are six-point midpoint interpolations of those nodal
// values. Together with the central flux corrections used by the flux
// assembly, the half-point operator telescopes exactly into the same sixth-order
// central difference, so the discrete metric identities reduce to commutation
// of one-dimensional difference operators and hold to roundoff.

#include "fsmhd/core.hpp"
#include "fsmhd/stencils.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace fsmhd {

enum class GridKind { identity, wavy, randomized, moving_wavy, spherical };

inline const char* to_string(GridKind k) {
  switch (k) {
    case GridKind::identity: return "identity";
    case GridKind::wavy: return "wavy";
    case GridKind::randomized: return "randomized";
    case GridKind::moving_wavy: return "moving-wavy";
    case GridKind::spherical: return "spherical";
  }
  return "?";
}

inline GridKind grid_kind_from_string(const std::string& s) {
  if (s == "identity") return GridKind::identity;
  if (s == "wavy") return GridKind::wavy;
  if (s == "randomized" || s == "random") return GridKind::randomized;
  if (s == "moving-wavy" || s == "moving_wavy" || s == "moving") return GridKind::moving_wavy;
  if (s == "spherical") return GridKind::spherical;
  throw ConfigError("unknown grid kind '" + s + "'");
}

/// Parameters of one of the analytic grid families. Indices in the formulas
/// are 1-based in the usual presentation; here node (0, 0) is the first node.
struct GridSpec {
  GridKind kind = GridKind::identity;
  int i_max = 41;
  int j_max = 41;
  double lx = 1.0;
  double ly = 1.0;
  double x_min = 0.0;
  double y_min = 0.0;
  // Wave amplitudes in grid units (so the physical amplitude is dxi * amp_x).
  double amp_x = 0.0;
  double amp_y = 0.0;
  double waves_x = 0.0;
  double waves_y = 0.0;
  double omega = 0.0;
  // Spherical (bow-shock) family.
  double r0 = 0.125;
  double r1 = 0.3;
  double r2 = 0.65;
  double theta = 5.0 * std::numbers::pi / 12.0;
  // Randomized family: displacement magnitude as a fraction of min(dxi, deta).
  double perturbation = 0.1;
  std::uint64_t seed = 1;
  bool periodic_xi = true;
  bool periodic_eta = true;

  double dxi() const { return lx / (i_max - 1); }
  double deta() const { return ly / (j_max - 1); }
  bool moving() const { return kind == GridKind::moving_wavy; }
  /// Stored node counts; a periodic direction drops the duplicated last node.
  int ni() const { return periodic_xi ? i_max - 1 : i_max; }
  int nj() const { return periodic_eta ? j_max - 1 : j_max; }

  void validate() const {
    if (i_max < 7 || j_max < 7) throw ConfigError("grid needs at least 7 nodes per direction");
    if (!(lx > 0.0) || !(ly > 0.0)) throw ConfigError("grid extents must be positive");
    if (kind == GridKind::randomized && !(perturbation >= 0.0 && perturbation < 0.5))
      throw ConfigError("randomized perturbation must lie in [0, 0.5)");
  }
};

/// Node coordinates at one instant, padded with kGhost layers.
struct GridField {
  ScalarField x;
  ScalarField y;
  double time = 0.0;
  double dxi = 1.0;
  double deta = 1.0;
  bool periodic_xi = true;
  bool periodic_eta = true;

  int ni() const { return x.ni(); }
  int nj() const { return x.nj(); }
};

/// A realised grid family: analytic positions at arbitrary index and time.
/// The random displacements of the randomized family are drawn once here, so
/// every snapshot of the same Mesh is bit-identical.
class Mesh {
 public:
  explicit Mesh(GridSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    if (spec_.kind == GridKind::randomized) draw_perturbations();
  }

  const GridSpec& spec() const { return spec_; }
  int ni() const { return spec_.ni(); }
  int nj() const { return spec_.nj(); }

  /// Closed-form position of node (i, j) at time tau; any integer index.
  std::pair<double, double> position(int i, int j, double tau) const {
    const auto& s = spec_;
    const double dxi = s.dxi();
    const double deta = s.deta();
    switch (s.kind) {
      case GridKind::identity:
        return {s.x_min + i * dxi, s.y_min + j * deta};
      case GridKind::wavy:
      case GridKind::moving_wavy: {
        double scale = 1.0;
        if (s.kind == GridKind::moving_wavy)
          scale = 1.0 + 0.1 * std::sin(2.0 * std::numbers::pi * s.omega * tau);
        const double x =
            s.x_min + dxi * (i + s.amp_x * scale * std::sin(s.waves_y * j * deta / s.ly));
        const double y =
            s.y_min + deta * (j + s.amp_y * scale * std::sin(s.waves_x * i * dxi / s.lx));
        return {x, y};
      }
      case GridKind::randomized: {
        double x = s.x_min + i * dxi;
        double y = s.y_min + j * deta;
        if (i > 0 && i < s.i_max - 1 && j > 0 && j < s.j_max - 1) {
          const auto& d = offsets_[static_cast<std::size_t>(j * s.i_max + i)];
          x += d.first;
          y += d.second;
        }
        return {x, y};
      }
      case GridKind::spherical: {
        const double xi = dxi * i;
        const double eta = deta * j;
        const double angle = std::numbers::pi + s.theta * (1.0 - 2.0 * eta);
        return {(s.r1 - (s.r1 - s.r0) * xi) * std::cos(angle),
                (s.r2 - (s.r2 - s.r0) * xi) * std::sin(angle)};
      }
    }
    return {0.0, 0.0};
  }

  /// Position of a padded-array node: periodic directions wrap onto the
  /// stored nodes and add the period shift, others use the closed form.
  std::pair<double, double> padded_position(int i, int j, double tau) const {
    double ox = 0.0;
    double oy = 0.0;
    if (spec_.periodic_xi) {
      const int n = ni();
      const int k = floor_div(i, n);
      i -= k * n;
      ox += k * spec_.lx;
    }
    if (spec_.periodic_eta) {
      const int n = nj();
      const int k = floor_div(j, n);
      j -= k * n;
      oy += k * spec_.ly;
    }
    auto [x, y] = position(i, j, tau);
    return {x + ox, y + oy};
  }

  /// Padded node coordinates at time tau. Throws GridError if the discrete
  /// Jacobian vanishes or changes sign.
  GridField generate(double tau) const {
    GridField g;
    g.x = ScalarField(ni(), nj());
    g.y = ScalarField(ni(), nj());
    g.time = tau;
    g.dxi = spec_.dxi();
    g.deta = spec_.deta();
    g.periodic_xi = spec_.periodic_xi;
    g.periodic_eta = spec_.periodic_eta;
    for (int j = -kGhost; j < nj() + kGhost; ++j)
      for (int i = -kGhost; i < ni() + kGhost; ++i) {
        auto [x, y] = padded_position(i, j, tau);
        g.x(i, j) = x;
        g.y(i, j) = y;
      }
    check_nondegenerate(g);
    return g;
  }

  static int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }

  static void check_nondegenerate(const GridField& g);

 private:
  void draw_perturbations() {
    const auto& s = spec_;
    offsets_.assign(static_cast<std::size_t>(s.i_max * s.j_max), {0.0, 0.0});
    std::mt19937_64 rng(s.seed);
    const double mag = s.perturbation * std::min(s.dxi(), s.deta());
    for (int j = 0; j < s.j_max; ++j)
      for (int i = 0; i < s.i_max; ++i) {
        // One draw per node in row-major order keeps the table independent of
        // which nodes end up perturbed.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double a = 2.0 * std::numbers::pi * u;
        offsets_[static_cast<std::size_t>(j * s.i_max + i)] = {mag * std::cos(a),
                                                               mag * std::sin(a)};
      }
  }

  GridSpec spec_;
  std::vector<std::pair<double, double>> offsets_;
};

inline GridField generate(const GridSpec& spec, double tau) { return Mesh(spec).generate(tau); }

namespace detail {

inline double d6_xi(const ScalarField& f, int i, int j) {
  return stencil::central7(stencil::kD6, [&](int l) { return f(i + l, j); });
}
inline double d6_eta(const ScalarField& f, int i, int j) {
  return stencil::central7(stencil::kD6, [&](int l) { return f(i, j + l); });
}

}  // namespace detail

/// Jacobian determinant x_xi y_eta - x_eta y_xi from sixth-order central
/// differences at node (i, j); needs three ghost layers around it.
inline double discrete_jacobian_inverse(const GridField& g, int i, int j) {
  const double xx = detail::d6_xi(g.x, i, j) / g.dxi;
  const double yx = detail::d6_xi(g.y, i, j) / g.dxi;
  const double xe = detail::d6_eta(g.x, i, j) / g.deta;
  const double ye = detail::d6_eta(g.y, i, j) / g.deta;
  return xx * ye - xe * yx;
}

inline void Mesh::check_nondegenerate(const GridField& g) {
  const double ref = discrete_jacobian_inverse(g, 0, 0);
  if (!(std::abs(ref) > 0.0) || !std::isfinite(ref)) throw GridError("degenerate mesh", 0, 0);
  for_interior(g.ni(), g.nj(), [&](int i, int j) {
    const double jinv = discrete_jacobian_inverse(g, i, j);
    if (!(jinv * ref > 0.0)) throw GridError("discrete Jacobian changes sign", i, j);
  });
}

/// Coefficients of a transformed flux: f~ = kt q + kx f + ky g.
struct DirectionalMetric {
  double kt = 0.0;
  double kx = 0.0;
  double ky = 0.0;
};

/// Metric terms for one grid snapshot (and mesh velocity, if moving).
/// Node quantities are valid on [-3, n+3); half-point quantities are stored at
/// the index of their left node and valid on [-1, n).
struct MetricSet {
  ScalarField x_xi, y_xi, x_eta, y_eta;
  ScalarField jinv;
  ScalarField x_tau, y_tau;
  Field2D<DirectionalMetric> xi_node;
  Field2D<DirectionalMetric> eta_node;
  Field2D<DirectionalMetric> xi_half;   // at (i+1/2, j)
  Field2D<DirectionalMetric> eta_half;  // at (i, j+1/2)
  double dxi = 1.0;
  double deta = 1.0;

  int ni() const { return jinv.ni(); }
  int nj() const { return jinv.nj(); }
};

/// Builds the free-stream-compatible metric set. Mesh velocity fields may be
/// empty for a stationary grid.
inline MetricSet free_stream_metrics(const GridField& g, const ScalarField* x_tau = nullptr,
                                     const ScalarField* y_tau = nullptr) {
  const int ni = g.ni();
  const int nj = g.nj();
  if (ni < 6 || nj < 6) throw ConfigError("metric stencils need at least 6 nodes per direction");
  MetricSet m;
  m.dxi = g.dxi;
  m.deta = g.deta;
  m.x_xi = m.y_xi = m.x_eta = m.y_eta = m.jinv = ScalarField(ni, nj);
  m.x_tau = x_tau ? *x_tau : ScalarField(ni, nj);
  m.y_tau = y_tau ? *y_tau : ScalarField(ni, nj);
  m.xi_node = m.eta_node = m.xi_half = m.eta_half = Field2D<DirectionalMetric>(ni, nj);

  constexpr int r = 3;
  for (int j = -r; j < nj + r; ++j)
    for (int i = -r; i < ni + r; ++i) {
      const double xx = detail::d6_xi(g.x, i, j) / g.dxi;
      const double yx = detail::d6_xi(g.y, i, j) / g.dxi;
      const double xe = detail::d6_eta(g.x, i, j) / g.deta;
      const double ye = detail::d6_eta(g.y, i, j) / g.deta;
      m.x_xi(i, j) = xx;
      m.y_xi(i, j) = yx;
      m.x_eta(i, j) = xe;
      m.y_eta(i, j) = ye;
      m.jinv(i, j) = xx * ye - xe * yx;
      const double xt = m.x_tau(i, j);
      const double yt = m.y_tau(i, j);
      m.xi_node(i, j) = {xe * yt - ye * xt, ye, -xe};
      m.eta_node(i, j) = {xt * yx - yt * xx, -yx, xx};
    }

  auto interp = [](auto&& at) {
    DirectionalMetric d;
    d.kt = stencil::half6(stencil::kMid6, [&](int l) { return at(l).kt; });
    d.kx = stencil::half6(stencil::kMid6, [&](int l) { return at(l).kx; });
    d.ky = stencil::half6(stencil::kMid6, [&](int l) { return at(l).ky; });
    return d;
  };
  for (int j = -1; j < nj + 1; ++j)
    for (int i = -1; i < ni + 1; ++i) {
      if (j >= 0 && j < nj)
        m.xi_half(i, j) = interp([&](int l) -> const DirectionalMetric& { return m.xi_node(i + l, j); });
      if (i >= 0 && i < ni)
        m.eta_half(i, j) =
            interp([&](int l) -> const DirectionalMetric& { return m.eta_node(i, j + l); });
    }
  return m;
}

/// Rate of change of the Jacobian determinant from the temporal metric
/// identity: -D_xi(x_eta y_tau - y_eta x_tau) - D_eta(x_tau y_xi - y_tau x_xi),
/// with the same sixth-order differences the flux telescopes into.
inline ScalarField temporal_jacobian_rate(const MetricSet& m) {
  ScalarField rate(m.ni(), m.nj());
  for_interior(m.ni(), m.nj(), [&](int i, int j) {
    const double a =
        stencil::central7(stencil::kD6, [&](int l) { return m.xi_node(i + l, j).kt; }) / m.dxi;
    const double b =
        stencil::central7(stencil::kD6, [&](int l) { return m.eta_node(i, j + l).kt; }) / m.deta;
    rate(i, j) = -(a + b);
  });
  return rate;
}

/// Max-norm residuals of the two spatial metric identities, each divided by
/// the metric scale max|k| / min(dxi, deta).
struct MetricIdentityResidual {
  double ix = 0.0;
  double iy = 0.0;
};

inline MetricIdentityResidual metric_identity_residual(const MetricSet& m) {
  MetricIdentityResidual r;
  double scale = 0.0;
  for_interior(m.ni(), m.nj(), [&](int i, int j) {
    auto dx = [&](auto get) {
      return stencil::central7(stencil::kD6, [&](int l) { return get(m.xi_node(i + l, j)); }) /
                 m.dxi +
             stencil::central7(stencil::kD6, [&](int l) { return get(m.eta_node(i, j + l)); }) /
                 m.deta;
    };
    r.ix = std::max(r.ix, std::abs(dx([](const DirectionalMetric& d) { return d.kx; })));
    r.iy = std::max(r.iy, std::abs(dx([](const DirectionalMetric& d) { return d.ky; })));
    scale = std::max({scale, std::abs(m.xi_node(i, j).kx), std::abs(m.xi_node(i, j).ky),
                      std::abs(m.eta_node(i, j).kx), std::abs(m.eta_node(i, j).ky)});
  });
  const double s = scale / std::min(m.dxi, m.deta);
  if (s > 0.0) {
    r.ix /= s;
    r.iy /= s;
  }
  return r;
}

/// Derivative at the half point i+1/2 of a 1D line of samples, computed as the
/// midpoint interpolation of sixth-order nodal derivatives. `at(l)` must be
/// valid for l in [-5, 6].
template <class Sample>
double half_point_derivative(Sample&& at, double spacing) {
  return stencil::half6(stencil::kMid6, [&](int l) {
           return stencil::central7(stencil::kD6, [&](int k) { return at(l + k); });
         }) /
         spacing;
}

/// Mesh velocity for RK3 stage `stage` (0, 1, 2) of the step tau_n -> tau_n + dt.
/// The difference quotients make every stage an exact Euler step between the
/// analytic stage positions x^n, x(tau_n + dt), x(tau_n + dt/2), x^{n+1}.
struct MeshVelocity {
  ScalarField x_tau;
  ScalarField y_tau;
};

inline MeshVelocity stage_mesh_velocity(const Mesh& mesh, double tau_n, double dt, int stage) {
  if (dt == 0.0) throw ConfigError("stage mesh velocity needs a nonzero time step");
  if (stage < 0 || stage > 2) throw ConfigError("RK3 stage index must be 0, 1 or 2");
  MeshVelocity v{ScalarField(mesh.ni(), mesh.nj()), ScalarField(mesh.ni(), mesh.nj())};
  if (!mesh.spec().moving()) return v;
  for (int j = -kGhost; j < mesh.nj() + kGhost; ++j)
    for (int i = -kGhost; i < mesh.ni() + kGhost; ++i) {
      const auto pn = mesh.padded_position(i, j, tau_n);
      const auto p1 = mesh.padded_position(i, j, tau_n + dt);
      const auto p2 = mesh.padded_position(i, j, tau_n + 0.5 * dt);
      const auto pe = mesh.padded_position(i, j, tau_n + dt);
      double vx = 0.0;
      double vy = 0.0;
      switch (stage) {
        case 0:
          vx = (p1.first - pn.first) / dt;
          vy = (p1.second - pn.second) / dt;
          break;
        case 1:
          vx = (4.0 * p2.first - 3.0 * pn.first - p1.first) / dt;
          vy = (4.0 * p2.second - 3.0 * pn.second - p1.second) / dt;
          break;
        default:
          vx = (3.0 * pe.first - pn.first - 2.0 * p2.first) / (2.0 * dt);
          vy = (3.0 * pe.second - pn.second - 2.0 * p2.second) / (2.0 * dt);
          break;
      }
      v.x_tau(i, j) = vx;
      v.y_tau(i, j) = vy;
    }
  return v;
}

/// Time at which RK3 stage `stage` evaluates its right-hand side.
inline double rk3_stage_time(double tau_n, double dt, int stage) {
  switch (stage) {
    case 0: return tau_n;
    case 1: return tau_n + dt;
    default: return tau_n + 0.5 * dt;
  }
}

/// Writes the stored nodes as CSV (`i,j,x,y`, row-major, 17 significant digits).
inline void write_grid_csv(const GridField& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "i,j,x,y\n";
  char buf[128];
  for_interior(g.ni(), g.nj(), [&](int i, int j) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", i, j, g.x(i, j), g.y(i, j));
    out << buf;
  });
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace fsmhd
