#include <cmath>

#include "diskcurv/curvature.hpp"
#include "diskcurv/errors.hpp"
#include "diskcurv/solver.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace diskcurv;

namespace {

struct Fixture {
  DiskMesh mesh;
  SolveConfig config;
  explicit Fixture(int nr = 24, int na = 96, GroupKind kind = GroupKind::cyclic, int k = 2)
      : mesh(nr, na) {
    config.group = SymmetryGroup::make(mesh, kind, k);
  }
  ScalarField K(const CurvatureSpec& s) const { return sample_disk(s, mesh); }
  BoundaryTrace H(const CurvatureSpec& s) const { return sample_circle(s, mesh); }
  ScalarField K(double c) const { return ScalarField::constant(mesh.node_count(), c); }
  BoundaryTrace H(double c) const { return BoundaryTrace::constant(mesh.boundary_count(), c); }
};

double mass_area(const DiskMesh& m, const ScalarField& k, const ScalarField& u) {
  return std::exp(log_area_integral(m, k, u));
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("feasible initializer accepts zero when both masses are positive") {
  Fixture f;
  const ScalarField phi = feasible_initializer(f.mesh, f.K(1.0), f.H(1.0), f.config.group);
  CHECK(phi.values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("feasible initializer lifts an off-center positive patch") {
  Fixture f;
  const auto base = f.K(-0.1);
  ScalarField k = base;
  const auto nodes = f.mesh.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (std::hypot(nodes[i].x - 0.5, nodes[i].y) < 0.15 || std::hypot(nodes[i].x + 0.5, nodes[i].y) < 0.15) {
      k[i] = 1.0;
    }
  }
  BoundaryTrace h = f.H(-0.2);
  for (std::size_t b = 0; b < f.mesh.boundary_count(); ++b) {
    const auto& p = nodes[static_cast<std::size_t>(f.mesh.boundary_nodes()[b])];
    if (std::abs(p.y) < 0.1) h[b] = 1.0;
  }
  const ScalarField phi = feasible_initializer(f.mesh, k, h, f.config.group);
  CHECK(log_area_integral(f.mesh, k, phi) > -1e300);
  CHECK(std::isfinite(log_boundary_integral(f.mesh, h, phi)));
  CHECK(symmetry_residual(phi, f.config.group) == 0.0);
}

TEST_CASE("negative curvatures are infeasible") {
  Fixture f;
  CHECK_THROWS_AS(feasible_initializer(f.mesh, f.K(-1.0), f.H(-1.0), f.config.group), InfeasibleProblemError);
  CHECK_THROWS_AS(minimize_joint(f.mesh, f.K(-1.0), f.H(-1.0), f.config), InfeasibleProblemError);
  CHECK_THROWS_AS(solve_limit_0(f.mesh, f.H(-1.0), f.config), InfeasibleProblemError);
  CHECK_THROWS_AS(solve_limit_2pi(f.mesh, f.K(0.0), f.config), InfeasibleProblemError);
}

TEST_CASE("the solver requires a fixed-point-free group and symmetric data") {
  Fixture f;
  SolveConfig bad = f.config;
  bad.group = SymmetryGroup::trivial(f.mesh);
  CHECK_THROWS_AS(minimize_joint(f.mesh, f.K(1.0), f.H(1.0), bad), ConfigError);
  CHECK_THROWS_AS(minimize_joint(f.mesh, f.K(CurvatureSpec::angular_mode(1.0, 0.5, 1)), f.H(1.0), f.config),
                  ConfigError);
  SolveConfig tol = f.config;
  tol.gradient_tolerance = 0.0;
  CHECK_THROWS_AS(minimize_joint(f.mesh, f.K(1.0), f.H(1.0), tol), ConfigError);
}

TEST_CASE("constant curvature: zero is not stationary for the lumped measures") {
  Fixture f;
  const double rho = oracle::constant_field_rho(1.0, 1.0);
  const ScalarField g = grad_u(f.mesh, f.K(1.0), f.H(1.0), f.K(0.0), rho);
  const Vector& w = f.mesh.quadrature().area_weights;
  const int centre = 0;
  CHECK(g[centre] == doctest::Approx(-2.0 * rho * w[centre] / f.mesh.area()).epsilon(1e-12));
  const SolveResult r = minimize_fixed_rho(f.mesh, f.K(1.0), f.H(1.0), rho, f.K(0.0), f.config);
  CHECK(r.converged);
  CHECK(r.u_min.values().maxCoeff() - r.u_min.values().minCoeff() > 0.1);
}

TEST_CASE("constant curvature joint solve approaches the spherical cap") {
  Fixture f(48, 192);
  const SolveResult r = minimize_joint(f.mesh, f.K(1.0), f.H(1.0), f.config);
  REQUIRE(r.converged);
  CHECK(r.regime == Regime::interior);
  CHECK(std::abs(r.rho_min - oracle::spherical_cap_rho(1.0)) < 1e-3);
  CHECK(r.diagnostics.gauss_bonnet_residual < 1e-8);
  CHECK(r.diagnostics.rho_constraint_residual < 1e-8);
  CHECK(r.diagnostics.symmetry_residual < 1e-10);
  CHECK(r.normalization_gap < 1e-6);
  CHECK(mass_area(f.mesh, f.K(1.0), r.u_solution) == doctest::Approx(r.rho_min).epsilon(1e-9));
  for (std::size_t i = 1; i < r.energy_history.size(); ++i) {
    CHECK(r.energy_history[i] <= r.energy_history[i - 1]);
  }
}

TEST_CASE("outer scan agrees with the joint solve") {
  Fixture f;
  const SolveResult joint = minimize_joint(f.mesh, f.K(1.0), f.H(1.0), f.config);
  SolveConfig scan = f.config;
  scan.rho_strategy = RhoStrategy::outer_scan;
  const SolveResult outer = minimize_joint(f.mesh, f.K(1.0), f.H(1.0), scan);
  REQUIRE(outer.converged);
  CHECK(outer.rho_min == doctest::Approx(joint.rho_min).epsilon(1e-8));
  CHECK(outer.energy.total == doctest::Approx(joint.energy.total).epsilon(1e-10));
  CHECK(parse_rho_strategy("outer-scan") == RhoStrategy::outer_scan);
  CHECK_THROWS_AS(parse_rho_strategy("grid"), ConfigError);
}

TEST_CASE("small boundary curvature pushes rho towards 2pi but stays interior") {
  Fixture f;
  const SolveResult r = minimize_joint(f.mesh, f.K(1.0), f.H(0.01), f.config);
  REQUIRE(r.converged);
  CHECK(r.rho_min > 6.0);
  CHECK(r.rho_min < kTwoPi);
  CHECK(r.diagnostics.gauss_bonnet_residual < 1e-6);
  CHECK(std::abs(r.rho_min - oracle::spherical_cap_rho(0.01)) < 5e-3);
}

TEST_CASE("solve is deterministic") {
  Fixture f;
  const auto k = f.K(CurvatureSpec::angular_mode(1.0, 0.6, 2));
  const auto h = f.H(CurvatureSpec::angular_mode(0.5, 0.3, 4));
  const SolveResult a = minimize_joint(f.mesh, k, h, f.config);
  const SolveResult b = minimize_joint(f.mesh, k, h, f.config);
  CHECK(a.rho_min == b.rho_min);
  CHECK(a.iterations == b.iterations);
  CHECK((a.u_solution.values().array() == b.u_solution.values().array()).all());
}

TEST_CASE("limit 0 with h = 1 gives zero") {
  Fixture f;
  const SolveResult r = solve_limit_0(f.mesh, f.H(1.0), f.config);
  CHECK(r.converged);
  CHECK(r.regime == Regime::limit_zero);
  CHECK(r.u_solution.values().cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("limit 0 with angular and sign-changing h") {
  Fixture f;
  for (const auto& spec : {CurvatureSpec::angular_mode(1.0, 0.5, 2), CurvatureSpec::angular_mode(0.2, 1.0, 2)}) {
    const SolveResult r = solve_limit_0(f.mesh, f.H(spec), f.config);
    CHECK(r.converged);
    CHECK(r.diagnostics.weak_residual_boundary < 1e-7);
    CHECK(r.diagnostics.gauss_bonnet_residual < 1e-8);
  }
}

TEST_CASE("limit 2pi with K = 1 is the bubble, radial bump converges") {
  Fixture f;
  const SolveResult r = solve_limit_2pi(f.mesh, f.K(1.0), f.config);
  CHECK(r.converged);
  double err = 0.0;
  const auto nodes = f.mesh.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    err = std::max(err, std::abs(r.u_solution[i] - oracle::bubble(std::hypot(nodes[i].x, nodes[i].y))));
  }
  CHECK(err < 1e-2);
  const SolveResult bump = solve_limit_2pi(f.mesh, f.K(CurvatureSpec::radial_bump(0.2, 1.0, 0.5, 0.2)), f.config);
  CHECK(bump.converged);
  CHECK(bump.diagnostics.weak_residual_interior < 1e-7);
}

TEST_CASE("normalization constants") {
  Fixture f;
  const SolveResult r = minimize_joint(f.mesh, f.K(1.0), f.H(1.0), f.config);
  const Normalization n = normalization_constants(f.mesh, f.K(1.0), f.H(1.0), r.u_min, r.rho_min);
  CHECK(n.area_mass == doctest::Approx(r.rho_min).epsilon(1e-12));
  CHECK(n.constant == doctest::Approx(n.boundary_constant).epsilon(1e-8));
  CHECK_THROWS_AS(normalize_solution(f.mesh, f.K(1.0), f.H(1.0), f.K(0.0), r.rho_min), InconsistentMinimizerError);
  CHECK_THROWS_AS(normalization_constants(f.mesh, f.K(1.0), f.H(1.0), r.u_min, 0.0), DomainError);
}

TEST_CASE("endpoint check near 0 and 2pi") {
  Fixture f;
  const EndpointReport zero = endpoint_exclusion_check(f.mesh, f.K(1.0), f.H(1.0), f.K(0.0), Side::zero);
  REQUIRE(zero.hypothesis_holds);
  CHECK(zero.excluded);
  for (std::size_t i = 0; i < zero.rho.size(); ++i) {
    if (zero.rho[i] <= 1e-2) CHECK(zero.difference[i] < 0.0);
    CHECK(zero.main_term[i] == doctest::Approx(2.0 * zero.rho[i] * std::log(zero.rho[i])));
  }
  Vector bubble(static_cast<Eigen::Index>(f.mesh.node_count()));
  const auto nodes = f.mesh.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) bubble[static_cast<Eigen::Index>(i)] = oracle::bubble(std::hypot(nodes[i].x, nodes[i].y));
  const EndpointReport two = endpoint_exclusion_check(f.mesh, f.K(1.0), f.H(1.0), ScalarField(bubble), Side::two_pi);
  CHECK(two.excluded);
  CHECK(two.difference.back() < 0.0);
}

TEST_CASE("endpoint check reports a failed hypothesis without throwing") {
  Fixture f;
  ScalarField k = f.K(-1.0);
  const EndpointReport r = endpoint_exclusion_check(f.mesh, k, f.H(1.0), f.K(0.0), Side::zero);
  CHECK_FALSE(r.hypothesis_holds);
  CHECK_FALSE(r.excluded);
  CHECK(r.message.find("hypothesis") != std::string::npos);
}

TEST_CASE("boundary curvature negative on average collapses toward 2pi") {
  Fixture f;
  const SolveResult r = minimize_joint(f.mesh, f.K(1.0), f.H(CurvatureSpec::angular_mode(-0.3, 0.5, 2)), f.config);
  CHECK_FALSE(r.converged);
  CHECK(r.regime == Regime::collapsed_two_pi);
  REQUIRE(r.endpoint.has_value());
  CHECK(r.endpoint->side == Side::two_pi);
}

}
