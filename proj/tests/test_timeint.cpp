#include <wbfv/wbfv.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace wbfv;

namespace {
ModelSpec plain(PressureLaw law, double gamma = 0.0) {
  ModelSpec m;
  m.pressure = law;
  m.damping.gamma = gamma;
  return m;
}
} // namespace

TEST(SspRk3, ShuOsherCoefficients) {
  EXPECT_EQ(SspRk3::blend[0], 1.0);
  EXPECT_EQ(SspRk3::blend[1], 0.25);
  EXPECT_EQ(SspRk3::blend[2], 2.0 / 3.0);
}

TEST(SspRk3, StationaryStateIsUnchanged) {
  const Scheme scheme(Grid(16, 0.0, 1.0), plain(PressureLaw(2.0)), ReconstructionOrder::third, FluxKind::kinetic);
  const FieldState s = scheme.initialize([](double) { return 0.8; }, [](double) { return 0.0; });
  const FieldState next = ssp_rk3_step(scheme, s, 1e-2);
  for (int i = 0; i < 16; ++i) {
    EXPECT_DOUBLE_EQ(next.rho[i], s.rho[i]);
    EXPECT_EQ(next.mom[i], 0.0);
    EXPECT_DOUBLE_EQ(next.K[i], s.K[i]);
  }
  EXPECT_DOUBLE_EQ(next.t, 1e-2);
}

TEST(SspRk3, LinearDampingFollowsThirdOrderTaylorPolynomial) {
  // Uniform flow feels only -gamma m, so one step multiplies m by 1 - z + z^2/2 - z^3/6.
  const double gamma = 3.0, dt = 0.05;
  const Scheme scheme(Grid(8, 0.0, 1.0), plain(PressureLaw(1.0), gamma), ReconstructionOrder::third, FluxKind::llf);
  const FieldState s = scheme.initialize([](double) { return 0.5; }, [](double) { return 0.5 * 0.4; });
  const FieldState next = ssp_rk3_step(scheme, s, dt);
  const double z = gamma * dt;
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(next.mom[i], 0.2 * (1.0 - z + z * z / 2.0 - z * z * z / 6.0), 1e-15);
}

TEST(SspRk3, SteadyStateStepKeepsDensity) {
  for (const char* id : {"ex31", "ex32"}) {
    ScenarioConfig c = builtin_scenario(id);
    c.initial = "steady";
    c.cells = 50;
    const Scheme scheme = make_scheme(c);
    const FieldState s = initial_state(c, scheme);
    const FieldState next = ssp_rk3_step(scheme, s, compute_dt(scheme, s, c.cfl));
    EXPECT_LE(l1_error(next.rho, s.rho, scheme.grid().dx()), 1e-15) << id;
  }
}

TEST(ComputeDt, IsothermalRestState) {
  const Scheme scheme(Grid(10, 0.0, 1.0), plain(PressureLaw(1.0)), ReconstructionOrder::third, FluxKind::llf);
  const FieldState s = scheme.initialize([](double) { return 2.0; }, [](double) { return 0.0; });
  // Signal speed sqrt(P') = 1 and w_min = 1/12.
  EXPECT_NEAR(compute_dt(scheme, s, 0.6), 0.6 * 0.1 / 12.0, 1e-16);
}

TEST(ComputeDt, KineticUsesEquilibriumHalfWidth) {
  const Scheme scheme(Grid(10, 0.0, 1.0), plain(PressureLaw(2.0)), ReconstructionOrder::first, FluxKind::kinetic);
  const FieldState s = scheme.initialize([](double) { return 1.0; }, [](double) { return 0.5; });
  // |u| + sqrt(3 P / rho) = 0.5 + sqrt(3), first order w_min = 1.
  EXPECT_NEAR(compute_dt(scheme, s, 1.0), 0.1 / (0.5 + std::sqrt(3.0)), 1e-15);
}

TEST(ComputeDt, VacuumFallsBackToFloorSpeed) {
  const Scheme scheme(Grid(10, 0.0, 1.0), plain(PressureLaw(2.0)), ReconstructionOrder::first, FluxKind::kinetic);
  FieldState s(10);
  // Empty domain: speed floor 3^((m - 1) / 4).
  EXPECT_NEAR(compute_dt(scheme, s, 1.0), 0.1 / std::pow(3.0, 0.25), 1e-15);
}

namespace {
FieldState random_state(const Scheme& scheme, std::mt19937& gen, bool allow_vacuum) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = scheme.grid().size();
  FieldState s(n);
  std::vector<double> nodes(3 * n);
  for (int i = 0; i < n; ++i) {
    s.rho[i] = (allow_vacuum && u(gen) < 0.25) ? 0.0 : 0.01 + u(gen);
    s.mom[i] = s.rho[i] * (4.0 * u(gen) - 2.0);
    nodes[3 * i] = nodes[3 * i + 1] = nodes[3 * i + 2] = std::max(s.rho[i], kLogDensityFloor);
  }
  const auto field = discrete_convolution(nodes, scheme.grid(), scheme.model().potential, scheme.interaction());
  s.K = compute_K(nodes, field, scheme.law());
  return s;
}
} // namespace

TEST(SspRk3, PositivityOnRandomStates) {
  std::mt19937 gen(59);
  for (int t = 0; t < 1000; ++t) {
    const bool isothermal = t % 2 == 0;
    ModelSpec m = plain(PressureLaw(isothermal ? 1.0 : 2.0));
    m.potential = ExternalPotential::quadratic();
    const auto order = t % 4 < 2 ? ReconstructionOrder::third : ReconstructionOrder::fifth;
    const Scheme scheme(Grid(16, -2.0, 2.0), m, order, isothermal ? FluxKind::llf : FluxKind::kinetic);
    const FieldState s = random_state(scheme, gen, !isothermal);
    const double dt = compute_dt(scheme, s, 0.9);
    FieldState next;
    ASSERT_NO_THROW(next = ssp_rk3_step(scheme, s, dt)) << "trial " << t;
    for (double r : next.rho) ASSERT_GE(r, 0.0) << "trial " << t;
  }
}
