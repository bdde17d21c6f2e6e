#include "fsmhd/cases.hpp"
#include "fsmhd/hj_integrator.hpp"
#include "fsmhd/hj_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace {

using namespace fsmhd;
constexpr double kPi = std::numbers::pi;

template <class Fn>
ScalarField sample_padded(const GridField& g, Fn&& f) {
  ScalarField out(g.ni(), g.nj());
  for (int j = -kGhost; j < g.nj() + kGhost; ++j)
    for (int i = -kGhost; i < g.ni() + kGhost; ++i) out(i, j) = f(g.x(i, j), g.y(i, j));
  return out;
}

GridField cartesian(int n = 21, double lx = 1.0, double ly = 1.0) {
  GridSpec s;
  s.i_max = s.j_max = n;
  s.lx = lx;
  s.ly = ly;
  return generate(s, 0.0);
}

GridField randomized() { return generate(make_case("freestream_random").grid, 0.0); }
GridField wavy() { return generate(make_case("freestream_wavy").grid, 0.0); }

TEST(SectorGeometry, CartesianNodeHasRightAngles) {
  const SectorGeometry s = sector_geometry(cartesian(), 4, 6);
  for (int m = 0; m < 4; ++m) {
    EXPECT_NEAR(s.theta[m], kPi / 2.0, 1e-15);
    EXPECT_NEAR(s.gamma[m], 2.0, 1e-15);
  }
  // Normals run along e_eta+, e_xi-, e_eta-, e_xi+.
  EXPECT_NEAR(s.normal[0][1], 1.0, 1e-15);
  EXPECT_NEAR(s.normal[1][0], -1.0, 1e-15);
  EXPECT_NEAR(s.normal[2][1], -1.0, 1e-15);
  EXPECT_NEAR(s.normal[3][0], 1.0, 1e-15);
}

TEST(SectorGeometry, AnglesPartitionTheFullTurn) {
  const GridField g = randomized();
  for_interior(g.ni(), g.nj(), [&](int i, int j) {
    const auto s = sector_geometry(g, i, j);
    EXPECT_NEAR(s.theta[0] + s.theta[1] + s.theta[2] + s.theta[3], 2.0 * kPi, 1e-12);
  });
}

TEST(SectorGeometry, MatchesADotProductOracle) {
  const GridField g = wavy();
  for (auto [i, j] : {std::pair{3, 5}, std::pair{17, 2}, std::pair{30, 29}}) {
    const auto s = sector_geometry(g, i, j);
    const std::array<std::array<int, 2>, 4> nb = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
    for (int m = 0; m < 4; ++m) {
      const double ax = g.x(i + nb[m][0], j + nb[m][1]) - g.x(i, j);
      const double ay = g.y(i + nb[m][0], j + nb[m][1]) - g.y(i, j);
      const int n = (m + 1) % 4;
      const double bx = g.x(i + nb[n][0], j + nb[n][1]) - g.x(i, j);
      const double by = g.y(i + nb[n][0], j + nb[n][1]) - g.y(i, j);
      const double angle = std::acos((ax * bx + ay * by) / (std::hypot(ax, ay) * std::hypot(bx, by)));
      EXPECT_NEAR(s.theta[m], angle, 1e-12);
    }
  }
}

TEST(SectorGeometry, WeightedNormalsSumToZero) {
  // sum_m gamma_m n_m = 0 is what makes the dissipation vanish for a common
  // gradient.
  const GridField g = randomized();
  for_interior(g.ni(), g.nj(), [&](int i, int j) {
    const auto s = sector_geometry(g, i, j);
    double sx = 0.0;
    double sy = 0.0;
    for (int m = 0; m < 4; ++m) {
      sx += s.gamma[m] * s.normal[m][0];
      sy += s.gamma[m] * s.normal[m][1];
    }
    EXPECT_NEAR(sx, 0.0, 1e-12);
    EXPECT_NEAR(sy, 0.0, 1e-12);
  });
}

TEST(SectorGeometry, ReflexSectorIsRejected) {
  GridField g = cartesian();
  const double h = g.dxi;
  g.x(5, 5) += 0.9 * h;
  g.y(5, 5) += 0.9 * h;
  try {
    sector_geometry(g, 5, 5);
    FAIL() << "expected GridError";
  } catch (const GridError& e) {
    EXPECT_EQ(e.i(), 5);
    EXPECT_EQ(e.j(), 5);
  }
}

TEST(SectorGradients, LinearDataIsExactOnTheRandomizedGrid) {
  const GridField g = randomized();
  const ScalarField phi = sample_padded(g, [](double x, double y) { return 3.0 * x - 2.0 * y + 7.0; });
  for_interior(g.ni(), g.nj(), [&](int i, int j) {
    for (const auto& grad : sector_gradients(node_derivatives(phi, g, i, j))) {
      EXPECT_NEAR(grad[0], 3.0, 1e-12);
      EXPECT_NEAR(grad[1], -2.0, 1e-12);
    }
  });
}

TEST(SectorGradients, CartesianGridUsesOneSidedDerivatives) {
  const GridField g = cartesian(21, 1.0, 2.0);
  const ScalarField phi = sample_padded(g, [](double x, double y) { return std::sin(3.0 * x) * std::cos(2.0 * y); });
  const int i = 7;
  const int j = 11;
  std::array<double, 7> lx;
  std::array<double, 7> ly;
  for (int l = -3; l <= 3; ++l) {
    lx[l + 3] = phi(i + l, j);
    ly[l + 3] = phi(i, j + l);
  }
  const double pxm = weno::weno5_hj_derivative(lx, g.dxi, weno::Side::minus).value;
  const double pxp = weno::weno5_hj_derivative(lx, g.dxi, weno::Side::plus).value;
  const double pym = weno::weno5_hj_derivative(ly, g.deta, weno::Side::minus).value;
  const double pyp = weno::weno5_hj_derivative(ly, g.deta, weno::Side::plus).value;
  const auto s = sector_gradients(node_derivatives(phi, g, i, j));
  const std::array<std::array<double, 2>, 4> expected = {{{pxp, pyp}, {pxm, pyp}, {pxm, pym}, {pxp, pym}}};
  for (int m = 0; m < 4; ++m) {
    EXPECT_NEAR(s[m][0], expected[m][0], 1e-12);
    EXPECT_NEAR(s[m][1], expected[m][1], 1e-12);
  }
}

TEST(SectorGradients, ConstantDataGivesZero) {
  const GridField g = wavy();
  const ScalarField phi(g.ni(), g.nj(), kGhost, -4.5);
  for (const auto& grad : sector_gradients(node_derivatives(phi, g, 9, 4))) {
    EXPECT_NEAR(grad[0], 0.0, 1e-13);
    EXPECT_NEAR(grad[1], 0.0, 1e-13);
  }
}

TEST(MonotoneHamiltonian, ConsistentForACommonGradient) {
  const GridField g = randomized();
  const SineHamiltonian h;
  const SectorGradient same = {{{0.7, -1.3}, {0.7, -1.3}, {0.7, -1.3}, {0.7, -1.3}}};
  for (auto [i, j] : {std::pair{2, 3}, std::pair{20, 30}}) {
    const auto s = sector_geometry(g, i, j);
    EXPECT_NEAR(monotone_hamiltonian(s, same, h, i, j, 0.2, -0.1, 5.0),
                std::sin(0.7 - 1.3) - (0.2 * 0.7 + 0.1 * 1.3), 1e-12);
  }
}

TEST(MonotoneHamiltonian, ZeroHamiltonianWithEqualGradientsVanishes) {
  const auto s = sector_geometry(cartesian(), 3, 3);
  const SectorGradient same = {{{2.0, 1.0}, {2.0, 1.0}, {2.0, 1.0}, {2.0, 1.0}}};
  EXPECT_NEAR(monotone_hamiltonian(s, same, LinearHamiltonian{}, 3, 3, 0.0, 0.0, 3.0), 0.0, 1e-14);
}

TEST(MonotoneHamiltonian, CartesianReducesToLaxFriedrichs) {
  // theta = pi/2, gamma = 2: H(mean) - (2 lambda / pi) (p+ - p- + q+ - q-).
  const auto s = sector_geometry(cartesian(), 3, 3);
  const double pp = 0.9, pm = 0.4, qp = -0.2, qm = 0.5;
  const SectorGradient g = {{{pp, qp}, {pm, qp}, {pm, qm}, {pp, qm}}};
  const SineHamiltonian h;
  const double lambda = 0.8;
  const double expected = std::sin(0.5 * (pp + pm) + 0.5 * (qp + qm)) - 2.0 * lambda / kPi * ((pp - pm) + (qp - qm));
  EXPECT_NEAR(monotone_hamiltonian(s, g, h, 3, 3, 0.0, 0.0, lambda), expected, 1e-14);
}

TEST(LambdaBound, AdvectionUsesTheLargestVelocity) {
  const GridField g = cartesian();
  ScalarField u(g.ni(), g.nj());
  ScalarField v(g.ni(), g.nj());
  for_interior(g.ni(), g.nj(), [&](int i, int j) {
    u(i, j) = 0.1 * i - 1.0;
    v(i, j) = 0.05 * j;
  });
  const Field2D<SectorGradient> grads(g.ni(), g.nj());
  const AdvectionHamiltonian h{&u, &v};
  EXPECT_DOUBLE_EQ(lambda_bound(grads, h, {}, {}), 1.0);
}

TEST(LambdaBound, SineHamiltonianIsBoundedByOne) {
  const GridField g = wavy();
  const ScalarField phi = sample_padded(g, [](double x, double y) { return std::sin(x) * std::cos(y); });
  Field2D<SectorGradient> grads(g.ni(), g.nj());
  for_interior(g.ni(), g.nj(), [&](int i, int j) { grads(i, j) = sector_gradients(node_derivatives(phi, g, i, j)); });
  const double lambda = lambda_bound(grads, SineHamiltonian{}, {}, {});
  EXPECT_LE(lambda, 1.0);
  EXPECT_GT(lambda, 0.5);
}

TEST(LambdaBound, RigidTranslationWithTheFlowCancels) {
  const GridField g = cartesian();
  const ScalarField u(g.ni(), g.nj(), kGhost, 0.6);
  const ScalarField v(g.ni(), g.nj(), kGhost, -0.4);
  const Field2D<SectorGradient> grads(g.ni(), g.nj());
  EXPECT_EQ(lambda_bound(grads, AdvectionHamiltonian{&u, &v}, u, v), 0.0);
}

TEST(SineHamiltonian, CosineRange) {
  auto r = SineHamiltonian::cos_range(0.1, 0.2);
  EXPECT_DOUBLE_EQ(r.first, std::cos(0.2));
  EXPECT_DOUBLE_EQ(r.second, std::cos(0.1));
  r = SineHamiltonian::cos_range(-0.5, 0.5);
  EXPECT_EQ(r.second, 1.0);
  EXPECT_DOUBLE_EQ(r.first, std::cos(0.5));
  r = SineHamiltonian::cos_range(3.0, 3.5);
  EXPECT_EQ(r.first, -1.0);
  r = SineHamiltonian::cos_range(0.0, 7.0);
  EXPECT_EQ(r.first, -1.0);
  EXPECT_EQ(r.second, 1.0);
}

TEST(HjRhs, LinearDataGivesMinusHExactly) {
  for (const GridField& g : {wavy(), randomized()}) {
    const ScalarField phi = sample_padded(g, [](double x, double y) { return 1.5 * x + 0.5 * y - 2.0; });
    const HjRhs r = hj_rhs(phi, g, SineHamiltonian{});
    for_interior(g.ni(), g.nj(), [&](int i, int j) { EXPECT_NEAR(r.rhs(i, j), -std::sin(2.0), 1e-12); });
  }
}

TEST(HjRhs, ConstantDataIsStationary) {
  const GridField g = wavy();
  const ScalarField phi(g.ni(), g.nj(), kGhost, 3.0);
  const HjRhs pl = hj_rhs(phi, g, LinearHamiltonian{1.0, -2.0});
  const HjRhs npl = hj_rhs_npl(phi, g, LinearHamiltonian{1.0, -2.0});
  for_interior(g.ni(), g.nj(), [&](int i, int j) {
    EXPECT_NEAR(pl.rhs(i, j), 0.0, 1e-13);
    EXPECT_NEAR(npl.rhs(i, j), 0.0, 1e-13);
  });
}

TEST(HjRhsNpl, AgreesWithPlOnCartesianLinearData) {
  const GridField g = cartesian(21, 2.0, 1.0);
  const ScalarField phi = sample_padded(g, [](double x, double y) { return -0.7 * x + 2.0 * y; });
  const LinearHamiltonian h{0.3, -1.1};
  const HjRhs pl = hj_rhs(phi, g, h);
  const HjRhs npl = hj_rhs_npl(phi, g, h);
  for_interior(g.ni(), g.nj(), [&](int i, int j) { EXPECT_NEAR(pl.rhs(i, j), npl.rhs(i, j), 1e-13); });
}

TEST(HjRhsNpl, LinearDataIsNotExactOnTheWavyGrid) {
  const GridField g = wavy();
  const ScalarField phi = sample_padded(g, [](double x, double y) { return x - y; });
  // H(1, -1) = 0, so the exact right-hand side vanishes.
  const LinearHamiltonian h{1.0, 1.0};
  const HjRhs r = hj_rhs_npl(phi, g, h);
  double worst = 0.0;
  for_interior(g.ni(), g.nj(), [&](int i, int j) { worst = std::max(worst, std::abs(r.rhs(i, j))); });
  EXPECT_GT(worst, 1e-6);
}

TEST(HjIntegrator, MovingGridKeepsLinearDataExact) {
  const Mesh mesh(make_case("freestream_moving").grid);
  const double c1 = 2.0;
  const double c2 = -3.0;
  const LinearHamiltonian h{0.5, 0.25};
  const HjIntegrator integ(mesh, h, HjScheme::pl, {}, c1 * mesh.spec().lx, c2 * mesh.spec().ly);
  ScalarField phi = integ.sample([&](double x, double y) { return c1 * x + c2 * y; });
  double t = 0.0;
  for (int n = 0; n < 10; ++n) {
    phi = integ.step(phi, t, 0.01);
    t += 0.01;
  }
  const GridField g = integ.grid_at(t);
  for_interior(g.ni(), g.nj(), [&](int i, int j) {
    EXPECT_NEAR(phi(i, j), c1 * g.x(i, j) + c2 * g.y(i, j) - t * h.value(0, 0, c1, c2), 1e-12);
  });
}

}  // namespace
