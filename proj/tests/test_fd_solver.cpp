#include "fsmhd/boundary.hpp"
#include "fsmhd/cases.hpp"
#include "fsmhd/fd_solver.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

namespace {

using namespace fsmhd;

Vec8 free_stream_q() {
  Primitive w;
  w.rho = kDefaultGamma * kDefaultGamma;
  w.p = kDefaultGamma;
  w.u = 1.0;
  w.bx = 1.0;
  w.by = 1.0;
  return primitive_to_conserved(w);
}

Vec8 density_state(double rho) {
  Primitive w;
  w.rho = rho;
  w.p = 1.0;
  w.u = 0.5;
  w.bx = 0.75;
  w.by = 0.3;
  return primitive_to_conserved(w);
}

std::array<Vec8, 6> six(auto&& f) {
  std::array<Vec8, 6> s;
  for (int l = 0; l < 6; ++l) s[l] = f(l - 2);
  return s;
}

double max_abs(const StateField& f) {
  double m = 0.0;
  for_interior(f.ni(), f.nj(), [&](int i, int j) { m = std::max(m, f(i, j).cwiseAbs().maxCoeff()); });
  return m;
}

TEST(CentralCorrection, SecondDifferenceOfASquare) {
  const auto f = six([](int l) { return Vec8::Constant(static_cast<double>(l * l)); });
  auto at = [&](int l) -> const Vec8& { return f[l + 2]; };
  EXPECT_NEAR(stencil::half6(stencil::kSecond, at)(0), 2.0, 1e-14);
  EXPECT_NEAR(stencil::half6(stencil::kFourth, at)(0), 0.0, 1e-14);
  EXPECT_NEAR(central_correction(f)(3), -2.0 / 24.0, 1e-15);
}

TEST(CentralCorrection, FourthDifferenceOfAQuartic) {
  const auto f = six([](int l) { return Vec8::Constant(std::pow(l, 4)); });
  auto at = [&](int l) -> const Vec8& { return f[l + 2]; };
  EXPECT_NEAR(stencil::half6(stencil::kFourth, at)(0), 24.0, 1e-13);
}

TEST(CentralCorrection, ConstantFluxHasNoCorrection) {
  const auto f = six([](int) { return Vec8::Constant(3.7); });
  EXPECT_LT(central_correction(f).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(InterfaceFlux, ConstantStateOnCartesianLineIsThePhysicalFlux) {
  const Vec8 q = free_stream_q();
  const auto qs = six([&](int) { return q; });
  const std::array<DirectionalMetric, 6> nm = {{{0, 1, 0}, {0, 1, 0}, {0, 1, 0}, {0, 1, 0}, {0, 1, 0}, {0, 1, 0}}};
  const auto r = interface_flux(qs, nm, {0.0, 1.0, 0.0}, 3.0);
  EXPECT_EQ(r.sigma, 1.0);
  EXPECT_LT((r.flux - physical_flux(q, Axis::x)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(InterfaceFlux, ConstantStateIsLinearInTheMetrics) {
  // For uniform q the flux is f~(q; half metric) + correction of the nodal
  // fluxes, whatever alpha is.
  const Vec8 q = free_stream_q();
  const auto qs = six([&](int) { return q; });
  std::array<DirectionalMetric, 6> nm;
  for (int l = 0; l < 6; ++l) nm[l] = {0.1 * l, 1.0 + 0.05 * l * l, -0.3 + 0.02 * l * l * l};
  const DirectionalMetric half{0.25, 1.1, -0.2};
  std::array<Vec8, 6> nf;
  for (int l = 0; l < 6; ++l) nf[l] = transformed_flux(q, nm[l]);
  const Vec8 expected = transformed_flux(q, half) + central_correction(nf);
  for (double alpha : {0.0, 1.0, 50.0}) {
    const auto r = interface_flux(qs, nm, half, alpha);
    EXPECT_LT((r.flux - expected).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Sigma, IdenticalStatesGiveOneExactly) {
  const auto qs = six([](int) { return density_state(1.3); });
  EXPECT_EQ(sigma(qs), 1.0);
  EXPECT_EQ(sigma(qs, 0.6, 0.8), 1.0);
}

TEST(Sigma, ApproachesOneUnderRefinement) {
  auto defect = [](double h) {
    const auto qs = six([&](int l) { return density_state(1.0 + 0.2 * std::sin(0.7 + l * h)); });
    return 1.0 - sigma(qs);
  };
  const double coarse = defect(2e-3);
  const double fine = defect(1e-3);
  EXPECT_GT(coarse, 0.0);
  EXPECT_GE(coarse / fine, 8.0);
}

TEST(Sigma, SmallAtAStrongJump) {
  const auto qs = six([](int l) { return density_state(l <= 0 ? 1.0 : 0.125); });
  EXPECT_LE(sigma(qs), 0.1);
  EXPECT_GE(sigma(qs), 0.0);
}

TEST(MhdRhs, FreeStreamIsPreservedOnEveryStationaryGrid) {
  const Vec8 q0 = free_stream_q();
  for (const char* id : {"freestream_wavy", "freestream_random", "freestream_sphere"}) {
    const GridField g = generate(make_case(id).grid, 0.0);
    const MetricSet m = free_stream_metrics(g);
    const StateField q(g.ni(), g.nj(), kGhost, q0);
    const MhdRhs r = mhd_rhs(q, m);
    const double scale = max_abs(r.flux_xi) / m.dxi + max_abs(r.flux_eta) / m.deta;
    EXPECT_LE(max_abs(r.rhs), 1e-13 * scale) << id;
    EXPECT_GT(scale, 1.0);
  }
}

TEST(MhdRhs, FreeStreamOnAMovingGridFollowsTheJacobianRate) {
  // With uniform q, d(J^-1 q)/dtau = q dJ^-1/dtau from the temporal identity.
  const Vec8 q0 = free_stream_q();
  const Mesh mesh(make_case("freestream_moving").grid);
  for (int stage = 0; stage < 3; ++stage) {
    const auto v = stage_mesh_velocity(mesh, 0.3, 0.01, stage);
    const MetricSet m = free_stream_metrics(mesh.generate(rk3_stage_time(0.3, 0.01, stage)), &v.x_tau, &v.y_tau);
    const StateField q(m.ni(), m.nj(), kGhost, q0);
    const MhdRhs r = mhd_rhs(q, m);
    const ScalarField rate = temporal_jacobian_rate(m);
    const double scale = max_abs(r.flux_xi) / m.dxi;
    double worst = 0.0;
    double largest_rate = 0.0;
    for_interior(m.ni(), m.nj(), [&](int i, int j) {
      worst = std::max(worst, (r.rhs(i, j) - rate(i, j) * q0).cwiseAbs().maxCoeff());
      largest_rate = std::max(largest_rate, std::abs(rate(i, j)));
    });
    EXPECT_LE(worst, 1e-13 * scale) << "stage " << stage;
    EXPECT_GT(largest_rate, 1e-3);
  }
}

TEST(MhdRhs, PeriodicDomainConservesTheIntegral) {
  const GridField g = generate(make_case("freestream_random").grid, 0.0);
  const MetricSet m = free_stream_metrics(g);
  StateField q(g.ni(), g.nj());
  for_interior(g.ni(), g.nj(), [&](int i, int j) {
    const double s = 2.0 * std::numbers::pi;
    Primitive w;
    w.rho = 1.0 + 0.3 * std::sin(s * g.x(i, j)) * std::cos(s * g.y(i, j));
    w.u = 0.4;
    w.v = -0.2 * std::sin(s * g.y(i, j));
    w.p = 1.0 + 0.2 * std::cos(s * (g.x(i, j) + g.y(i, j)));
    w.bx = 0.5;
    w.by = 0.3 * std::cos(s * g.x(i, j));
    q(i, j) = primitive_to_conserved(w);
  });
  fill_state_ghosts(q, BoundarySpec{}, g);
  const MhdRhs r = mhd_rhs(q, m);
  Vec8 total = Vec8::Zero();
  for_interior(g.ni(), g.nj(), [&](int i, int j) { total += r.rhs(i, j); });
  EXPECT_LT(total.cwiseAbs().maxCoeff(), 1e-10 * max_abs(r.rhs) * g.ni() * g.nj());
  EXPECT_GT(max_abs(r.rhs), 1e-3);
}

TEST(MhdRhs, AlphaIsTheGlobalSpectralRadius) {
  const GridField g = generate(make_case("freestream_wavy").grid, 0.0);
  const MetricSet m = free_stream_metrics(g);
  const Vec8 q0 = free_stream_q();
  const StateField q(g.ni(), g.nj(), kGhost, q0);
  const MhdRhs r = mhd_rhs(q, m);
  double expected = 0.0;
  for_interior(g.ni(), g.nj(), [&](int i, int j) { expected = std::max(expected, spectral_radius(q0, m.xi_node(i, j))); });
  EXPECT_GE(r.alpha_xi, expected);
  EXPECT_LE(r.alpha_xi, expected * 1.2);
}

TEST(MhdRhs, NonPhysicalNodeIsReportedWithItsLocation) {
  const GridField g = generate(make_case("freestream_wavy").grid, 0.0);
  const MetricSet m = free_stream_metrics(g);
  StateField q(g.ni(), g.nj(), kGhost, free_stream_q());
  q(5, 7)(kEnergy) = 0.0;
  try {
    mhd_rhs(q, m);
    FAIL() << "expected PhysicalStateError";
  } catch (const PhysicalStateError& e) {
    EXPECT_EQ(e.i, 5);
    EXPECT_EQ(e.j, 7);
  }
}

}  // namespace
