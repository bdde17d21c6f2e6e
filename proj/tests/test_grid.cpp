#include "fsmhd/cases.hpp"
#include "fsmhd/grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

namespace {

using namespace fsmhd;
constexpr double kPi = std::numbers::pi;

GridSpec hj_wavy(int n = 41) { return make_case("hj_accuracy", {.nx = n}).grid; }

TEST(Grid, IdentityNodesSitOnTheLattice) {
  GridSpec s;
  s.i_max = 11;
  s.j_max = 9;
  s.lx = 2.0;
  s.ly = 1.0;
  const GridField g = generate(s, 0.0);
  for (int j = -3; j < g.nj() + 3; ++j)
    for (int i = -3; i < g.ni() + 3; ++i) {
      EXPECT_DOUBLE_EQ(g.x(i, j), 0.2 * i);
      EXPECT_DOUBLE_EQ(g.y(i, j), 0.125 * j);
    }
}

TEST(Grid, WavyWithoutAmplitudeIsShiftedCartesian) {
  const GridSpec s = cases::wavy(21, 21, 4.0, 2.0, 0.0, 0.0, 16.0);
  const GridField g = generate(s, 0.0);
  for (int j = 0; j < g.nj(); ++j)
    for (int i = 0; i < g.ni(); ++i) {
      EXPECT_NEAR(g.x(i, j), -2.0 + 0.2 * i, 1e-15);
      EXPECT_NEAR(g.y(i, j), -1.0 + 0.1 * j, 1e-15);
    }
}

TEST(Grid, FirstWavyNodeIsTheDomainCorner) {
  const GridField g = generate(hj_wavy(), 0.0);
  EXPECT_DOUBLE_EQ(g.x(0, 0), -kPi);
  EXPECT_DOUBLE_EQ(g.y(0, 0), -kPi);
}

TEST(Grid, WavyFormulaAtAnInteriorNode) {
  const GridSpec s = hj_wavy();
  const GridField g = generate(s, 0.0);
  const double d = 2.0 * kPi / 40.0;
  // Physical amplitudes 0.01 and -0.02; phase runs over 2 pi across the box.
  EXPECT_NEAR(g.x(5, 7), -kPi + 5 * d + 0.01 * std::sin(7 * d), 1e-14);
  EXPECT_NEAR(g.y(5, 7), -kPi + 7 * d - 0.02 * std::sin(5 * d), 1e-14);
}

TEST(Grid, PeriodicGhostsAreShiftedImages) {
  const Mesh mesh(make_case("freestream_random").grid);
  const GridField g = mesh.generate(0.0);
  const int n = g.ni();
  for (int j = 0; j < g.nj(); ++j)
    for (int k = 1; k <= kGhost; ++k) {
      EXPECT_DOUBLE_EQ(g.x(-k, j), g.x(n - k, j) - 1.0);
      EXPECT_DOUBLE_EQ(g.y(-k, j), g.y(n - k, j));
      EXPECT_DOUBLE_EQ(g.x(n - 1 + k, j), g.x(k - 1, j) + 1.0);
    }
}

TEST(Grid, RandomizedGridIsReproducibleAndSeedDependent) {
  GridSpec s = make_case("freestream_random").grid;
  const GridField a = generate(s, 0.0);
  const GridField b = generate(s, 0.0);
  EXPECT_EQ(a.x.raw(), b.x.raw());
  EXPECT_EQ(a.y.raw(), b.y.raw());
  s.seed = 12345;
  const GridField c = generate(s, 0.0);
  EXPECT_NE(a.x.raw(), c.x.raw());
}

TEST(Grid, RandomizedDisplacementHasTheRequestedMagnitude) {
  const GridSpec s = make_case("freestream_random").grid;
  const GridField g = generate(s, 0.0);
  const double h = std::min(s.dxi(), s.deta());
  double largest = 0.0;
  for (int j = 0; j < g.nj(); ++j)
    for (int i = 0; i < g.ni(); ++i) {
      const double dx = g.x(i, j) - (s.x_min + i * s.dxi());
      const double dy = g.y(i, j) - (s.y_min + j * s.deta());
      largest = std::max(largest, std::hypot(dx, dy));
    }
  EXPECT_LE(largest, s.perturbation * h * (1.0 + 1e-12));
  EXPECT_GT(largest, 0.5 * s.perturbation * h);
}

TEST(Grid, SphericalEndsLieOnTheBoundingArcs) {
  const GridSpec s = make_case("freestream_sphere").grid;
  const GridField g = generate(s, 0.0);
  for (int j = 0; j < g.nj(); ++j) {
    const double x0 = g.x(0, j) / s.r1;
    const double y0 = g.y(0, j) / s.r2;
    EXPECT_NEAR(x0 * x0 + y0 * y0, 1.0, 1e-14);
    EXPECT_NEAR(std::hypot(g.x(g.ni() - 1, j), g.y(g.ni() - 1, j)), s.r0, 1e-14);
  }
}

TEST(Grid, FoldedLatticeIsRejectedWithLocation) {
  GridSpec s = cases::wavy(21, 21, 1.0, 1.0, 0.2, 0.2, 8.0 * kPi);
  try {
    generate(s, 0.0);
    FAIL() << "expected GridError";
  } catch (const GridError& e) {
    EXPECT_NE(std::string(e.what()).find("node ("), std::string::npos);
    EXPECT_GE(e.i(), -kGhost);
    EXPECT_GE(e.j(), -kGhost);
  }
}

TEST(Grid, InvalidSpecsAreRejected) {
  GridSpec s;
  s.i_max = 5;
  EXPECT_THROW(Mesh{s}, ConfigError);
  s.i_max = 21;
  s.lx = 0.0;
  EXPECT_THROW(Mesh{s}, ConfigError);
}

TEST(Metrics, IdentityMapHasUnitMetrics) {
  GridSpec s;
  s.i_max = s.j_max = 17;
  const GridField g = generate(s, 0.0);
  const MetricSet m = free_stream_metrics(g);
  for (int j = 0; j < g.nj(); ++j)
    for (int i = 0; i < g.ni(); ++i) {
      EXPECT_NEAR(m.xi_half(i, j).kx, 1.0, 1e-13);
      EXPECT_NEAR(m.xi_half(i, j).ky, 0.0, 1e-13);
      EXPECT_NEAR(m.eta_half(i, j).kx, 0.0, 1e-13);
      EXPECT_NEAR(m.eta_half(i, j).ky, 1.0, 1e-13);
    }
  for (int j = 0; j < g.nj(); ++j)
    for (int i = 0; i < g.ni(); ++i) EXPECT_NEAR(m.jinv(i, j), 1.0, 1e-13);
}

TEST(Metrics, HalfPointDerivativeIsExactForQuintics) {
  // x = xi^5 on unit spacing: derivative at i + 1/2 is 5 (i + 1/2)^4.
  for (int i = -2; i <= 3; ++i) {
    const double d = half_point_derivative([&](int l) { return std::pow(static_cast<double>(i + l), 5); }, 1.0);
    EXPECT_NEAR(d, 5.0 * std::pow(i + 0.5, 4), 1e-10 * std::max(1.0, std::pow(i + 0.5, 4)));
  }
  for (int degree = 0; degree <= 5; ++degree) {
    const double d = half_point_derivative([&](int l) { return std::pow(0.3 + 0.1 * l, degree); }, 0.1);
    const double exact = degree == 0 ? 0.0 : degree * std::pow(0.35, degree - 1);
    EXPECT_NEAR(d, exact, 1e-12) << "degree " << degree;
  }
}

TEST(Metrics, IdentitiesVanishOnEveryGenerator) {
  for (const char* id : {"freestream_wavy", "freestream_random", "freestream_moving", "freestream_sphere",
                         "hj_accuracy", "field_loop_wavy", "blast_random"}) {
    const Mesh mesh(make_case(id).grid);
    for (double tau : {0.0, 0.37}) {
      const auto r = metric_identity_residual(free_stream_metrics(mesh.generate(tau)));
      EXPECT_LE(r.ix, 1e-13) << id;
      EXPECT_LE(r.iy, 1e-13) << id;
    }
  }
}

TEST(Metrics, NodalJacobianMatchesTheDeterminant) {
  const GridField g = generate(make_case("freestream_random").grid, 0.0);
  const MetricSet m = free_stream_metrics(g);
  for (int j = 0; j < g.nj(); ++j)
    for (int i = 0; i < g.ni(); ++i) {
      EXPECT_DOUBLE_EQ(m.jinv(i, j), discrete_jacobian_inverse(g, i, j));
      EXPECT_GT(m.jinv(i, j), 0.0);
      EXPECT_DOUBLE_EQ(m.xi_node(i, j).kx, m.y_eta(i, j));
      EXPECT_DOUBLE_EQ(m.xi_node(i, j).ky, -m.x_eta(i, j));
      EXPECT_DOUBLE_EQ(m.eta_node(i, j).kx, -m.y_xi(i, j));
      EXPECT_DOUBLE_EQ(m.eta_node(i, j).ky, m.x_xi(i, j));
    }
}

TEST(Metrics, StationaryGridHasZeroJacobianRate) {
  const MetricSet m = free_stream_metrics(generate(make_case("freestream_wavy").grid, 0.0));
  const ScalarField r = temporal_jacobian_rate(m);
  for (int j = 0; j < r.nj(); ++j)
    for (int i = 0; i < r.ni(); ++i) EXPECT_EQ(r(i, j), 0.0);
}

TEST(Metrics, RigidTranslationHasZeroJacobianRate) {
  GridSpec s = make_case("freestream_wavy").grid;
  const GridField g = generate(s, 0.0);
  ScalarField xt(g.ni(), g.nj(), kGhost, 0.7);
  ScalarField yt(g.ni(), g.nj(), kGhost, -0.3);
  const ScalarField r = temporal_jacobian_rate(free_stream_metrics(g, &xt, &yt));
  for (int j = 0; j < r.nj(); ++j)
    for (int i = 0; i < r.ni(); ++i) EXPECT_NEAR(r(i, j), 0.0, 1e-12);
}

TEST(Metrics, JacobianRateConvergesToTheMeshChange) {
  // Over one RK3 step the stage rates, combined with RK3 weights, approach
  // the change of the discrete J^-1 between the end points as dt shrinks.
  const Mesh mesh(make_case("freestream_moving").grid);
  const double t0 = 0.21;
  auto mismatch = [&](double dt) {
    const GridField g0 = mesh.generate(t0);
    const GridField g1 = mesh.generate(t0 + dt);
    auto rate = [&](int stage) {
      const auto v = stage_mesh_velocity(mesh, t0, dt, stage);
      return temporal_jacobian_rate(
          free_stream_metrics(mesh.generate(rk3_stage_time(t0, dt, stage)), &v.x_tau, &v.y_tau));
    };
    const ScalarField r0 = rate(0);
    const ScalarField r1 = rate(1);
    const ScalarField r2 = rate(2);
    double worst = 0.0;
    for (int j = 0; j < g0.nj(); ++j)
      for (int i = 0; i < g0.ni(); ++i) {
        const double change = dt * (r0(i, j) + r1(i, j) + 4.0 * r2(i, j)) / 6.0;
        const double exact = discrete_jacobian_inverse(g1, i, j) - discrete_jacobian_inverse(g0, i, j);
        worst = std::max(worst, std::abs(change - exact));
      }
    return worst;
  };
  const double coarse = mismatch(0.02);
  const double fine = mismatch(0.01);
  EXPECT_LT(fine, coarse / 5.0);
}

TEST(MeshVelocity, StationaryGridGivesZero) {
  const Mesh mesh(make_case("freestream_wavy").grid);
  for (int stage = 0; stage < 3; ++stage) {
    const auto v = stage_mesh_velocity(mesh, 0.3, 0.05, stage);
    for (double x : v.x_tau.raw()) EXPECT_EQ(x, 0.0);
  }
}

TEST(MeshVelocity, StagesCombineToExactEulerSteps) {
  // Stage k velocity times dt reproduces the stage position differences
  // implied by the Shu-Osher combination.
  const Mesh mesh(make_case("freestream_moving").grid);
  const double t0 = 0.4;
  const double dt = 0.02;
  const auto xn = mesh.generate(t0).x;
  const auto x1 = mesh.generate(t0 + dt).x;
  const auto x2 = mesh.generate(t0 + 0.5 * dt).x;
  const auto v0 = stage_mesh_velocity(mesh, t0, dt, 0).x_tau;
  const auto v1 = stage_mesh_velocity(mesh, t0, dt, 1).x_tau;
  const auto v2 = stage_mesh_velocity(mesh, t0, dt, 2).x_tau;
  for (int j = 0; j < mesh.nj(); ++j)
    for (int i = 0; i < mesh.ni(); ++i) {
      const double s1 = xn(i, j) + dt * v0(i, j);
      EXPECT_NEAR(s1, x1(i, j), 1e-14);
      const double s2 = 0.75 * xn(i, j) + 0.25 * (s1 + dt * v1(i, j));
      EXPECT_NEAR(s2, x2(i, j), 1e-14);
      const double s3 = xn(i, j) / 3.0 + 2.0 / 3.0 * (s2 + dt * v2(i, j));
      EXPECT_NEAR(s3, x1(i, j), 1e-14);
    }
}

TEST(MeshVelocity, RejectsZeroStepAndBadStage) {
  const Mesh mesh(make_case("freestream_moving").grid);
  EXPECT_THROW(stage_mesh_velocity(mesh, 0.0, 0.0, 0), ConfigError);
  EXPECT_THROW(stage_mesh_velocity(mesh, 0.0, 0.1, 3), ConfigError);
}

TEST(GridCsv, WritesHeaderAndAllNodes) {
  const GridSpec s = make_case("freestream_moving").grid;
  const GridField g = generate(s, 0.0);
  const auto path = std::filesystem::temp_directory_path() / "fsmhd_grid_test.csv";
  write_grid_csv(g, path.string());
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "i,j,x,y");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, g.ni() * g.nj());
  std::filesystem::remove(path);
}

}  // namespace
