#include <cmath>
#include <random>

#include "diskcurv/curvature.hpp"
#include "diskcurv/energy.hpp"
#include "diskcurv/errors.hpp"
#include "diskcurv/inequality.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace diskcurv;

namespace {

const DiskMesh& mesh48() {
  static const DiskMesh mesh(48, 192);
  return mesh;
}

ScalarField bubble_field(const DiskMesh& mesh) {
  Vector v(static_cast<Eigen::Index>(mesh.node_count()));
  const auto nodes = mesh.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = oracle::bubble(std::hypot(nodes[i].x, nodes[i].y));
  }
  return ScalarField(v);
}

ScalarField ones(const DiskMesh& m) { return ScalarField::constant(m.node_count(), 1.0); }
BoundaryTrace bones(const DiskMesh& m) { return BoundaryTrace::constant(m.boundary_count(), 1.0); }
ScalarField zeros(const DiskMesh& m) { return ScalarField::constant(m.node_count(), 0.0); }

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("f at the endpoints and at pi") {
  CHECK(f_correction(0.0) == doctest::Approx(8.0 * oracle::pi * std::log(2.0 * oracle::pi)).epsilon(1e-15));
  CHECK(f_correction(kTwoPi) ==
        doctest::Approx(4.0 * oracle::pi + 4.0 * oracle::pi * std::log(2.0 * oracle::pi)).epsilon(1e-15));
  CHECK(f_correction(kPi) == doctest::Approx(6.0 * oracle::pi * std::log(oracle::pi) + 2.0 * oracle::pi).epsilon(1e-14));
  CHECK(std::abs(f_correction(1e-12) - f_correction(0.0)) < 1e-9);
  CHECK(std::abs(f_correction(kTwoPi - 1e-12) - f_correction(kTwoPi)) < 1e-9);
  CHECK_THROWS_AS(f_correction(-0.1), DomainError);
  CHECK_THROWS_AS(f_correction_derivative(0.0), EndpointDerivativeError);
}

TEST_CASE("f change is accurate for tiny steps") {
  for (double rho : {0.3, kPi, 6.0}) {
    for (double d : {1e-3, -1e-7, 1e-11}) {
      const double slope = f_correction_derivative(rho);
      CHECK(f_correction_change(rho, d) == doctest::Approx(slope * d).epsilon(1e-2));
    }
    CHECK(f_correction_change(rho, 0.1) == doctest::Approx(oracle::f_formula(rho + 0.1) - oracle::f_formula(rho)).epsilon(1e-12));
  }
  CHECK(f_correction_change(0.0, 1e-3) == doctest::Approx(oracle::f_formula(1e-3) - f_correction(0.0)).epsilon(1e-9));
}

TEST_CASE("log integrals of constant and bubble fields") {
  const DiskMesh& m = mesh48();
  CHECK(log_area_integral(m, ones(m), zeros(m)) == doctest::Approx(std::log(m.area())).epsilon(1e-14));
  CHECK(std::abs(log_area_integral(m, ones(m), zeros(m)) - std::log(oracle::pi)) < 1e-3);
  const ScalarField c = ScalarField::constant(m.node_count(), 0.7);
  CHECK(log_area_integral(m, ones(m), c) == doctest::Approx(0.7 + std::log(m.area())).epsilon(1e-14));
  CHECK(log_boundary_integral(m, bones(m), c) ==
        doctest::Approx(0.35 + std::log(m.boundary_length())).epsilon(1e-14));
  const double mass = oracle::radial([](double r) { return std::exp(oracle::bubble(r)); });
  CHECK(mass == doctest::Approx(2.0 * oracle::pi).epsilon(1e-12));
  CHECK(std::abs(log_area_integral(m, ones(m), bubble_field(m)) - std::log(mass)) < 2e-3);
  const BoundaryTrace h = sample_circle(CurvatureSpec::angular_mode(1.0, 0.5, 2), m);
  CHECK(std::abs(log_boundary_integral(m, h, zeros(m)) - std::log(2.0 * oracle::pi)) < 1e-3);
}

TEST_CASE("log integrals reject non-positive masses") {
  const DiskMesh m(6, 24);
  CHECK_THROWS_AS(log_area_integral(m, ScalarField::constant(m.node_count(), -1.0), zeros(m)),
                  OutsideAdmissibleError);
  CHECK_THROWS_AS(log_boundary_integral(m, BoundaryTrace::constant(m.boundary_count(), 0.0), zeros(m)),
                  OutsideAdmissibleError);
}

TEST_CASE("energy at u = 0, rho = pi assembles from the log integrals") {
  const DiskMesh& m = mesh48();
  const EnergyBreakdown e = energy(m, ones(m), bones(m), zeros(m), kPi);
  const double expected = -2.0 * oracle::pi * std::log(m.area()) -
                          4.0 * oracle::pi * std::log(m.boundary_length()) + oracle::f_formula(oracle::pi);
  CHECK(e.total == doctest::Approx(expected).epsilon(1e-13));
  const double continuum = -2.0 * oracle::pi * std::log(oracle::pi) -
                           4.0 * oracle::pi * std::log(2.0 * oracle::pi) + oracle::f_formula(oracle::pi);
  CHECK(std::abs(e.total - continuum) < 1e-2);
  CHECK(e.dirichlet == 0.0);
  CHECK(e.total == doctest::Approx(e.dirichlet + e.area_log + e.boundary_linear + e.boundary_log + e.f_rho));
}

TEST_CASE("limit energies") {
  const DiskMesh& m = mesh48();
  const double l = m.boundary_length();
  const double zero_gap = -8.0 * oracle::pi * std::log(l) + 8.0 * oracle::pi * std::log(2.0 * oracle::pi);
  CHECK(energy_limit0(m, bones(m), zeros(m)) == doctest::Approx(zero_gap).epsilon(1e-12));
  CHECK(std::abs(energy_limit0(m, bones(m), zeros(m))) < 1e-2);
  const ScalarField c = ScalarField::constant(m.node_count(), -1.3);
  CHECK(std::abs(energy_limit0(m, bones(m), c) - energy_limit0(m, bones(m), zeros(m))) < 1e-10);
  const ScalarField mob = mobius_field(m, {0.3, 0.0});
  CHECK(std::abs(energy_limit0(m, bones(m), mob)) < 2e-2);

  // K = 1, u = c: -4pi log(pi) + 4pi + 4pi log 2pi for every c.
  const double c_value = 4.0 * oracle::pi + 4.0 * oracle::pi * std::log(2.0);
  CHECK(std::abs(energy_limit2pi(m, ones(m), c) - c_value) < 1e-2);
  CHECK(energy_limit2pi(m, ones(m), c) == doctest::Approx(energy_limit2pi(m, ones(m), zeros(m))).epsilon(1e-12));

  // Bubble: 1/2 int |grad u|^2 + 2 int_S1 u - 4pi log int e^u + f(2pi).
  const double dir = 0.5 * oracle::radial([](double r) { return std::pow(oracle::bubble_slope(r), 2); });
  const double bubble_ref = dir + 2.0 * 2.0 * oracle::pi * oracle::bubble(1.0) -
                            4.0 * oracle::pi * std::log(2.0 * oracle::pi) + f_correction(kTwoPi);
  CHECK(std::abs(energy_limit2pi(m, ones(m), bubble_field(m)) - bubble_ref) < 1e-2);
}

TEST_CASE("shift invariance of I") {
  const DiskMesh m(16, 64);
  const BoundaryTrace h = sample_circle(CurvatureSpec::angular_mode(1.0, 0.5, 2), m);
  const ScalarField k = sample_disk(CurvatureSpec::radial_bump(0.5, 1.0, 0.4, 0.2), m);
  const ScalarField u = random_smooth_field(m, 11);
  for (double rho : {0.0, 0.5, kPi, 5.9, kTwoPi}) {
    const double base = energy(m, k, h, u, rho).total;
    ScalarField s = u;
    s.values().array() += 2.75;
    CHECK(std::abs(energy(m, k, h, s, rho).total - base) <= 1e-9 * (1.0 + std::abs(base)));
  }
}

TEST_CASE("gradients match central differences") {
  const DiskMesh m(8, 32);
  const BoundaryTrace h = sample_circle(CurvatureSpec::angular_mode(1.0, 0.5, 2), m);
  const ScalarField k = sample_disk(CurvatureSpec::radial_bump(0.5, 1.0, 0.4, 0.2), m);
  const ScalarField u = random_smooth_field(m, 5, 0.5);
  const double rho = 2.2;
  const ScalarField g = grad_u(m, k, h, u, rho);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Vector d(static_cast<Eigen::Index>(m.node_count()));
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = normal(rng);
  const double eps = 1e-5;
  ScalarField up = u, um = u;
  up.values() += eps * d;
  um.values() -= eps * d;
  const double fd = (energy(m, k, h, up, rho).total - energy(m, k, h, um, rho).total) / (2.0 * eps);
  CHECK(fd == doctest::Approx(g.values().dot(d)).epsilon(1e-7));
  const double fr = (energy(m, k, h, u, rho + eps).total - energy(m, k, h, u, rho - eps).total) / (2.0 * eps);
  CHECK(fr == doctest::Approx(grad_rho(m, k, h, u, rho)).epsilon(1e-7));
  CHECK_THROWS_AS(grad_rho(m, k, h, u, 0.0), EndpointDerivativeError);
}

TEST_CASE("gradient sums to zero along constants") {
  const DiskMesh m(8, 32);
  const ScalarField u = random_smooth_field(m, 9);
  const ScalarField g = grad_u(m, ones(m), bones(m), u, 1.0);
  CHECK(std::abs(g.values().sum()) < 1e-12);
}

TEST_CASE("bubble is a critical point of the rho = 2pi energy under refinement") {
  double prev = 0.0;
  for (int level = 0; level < 3; ++level) {
    const DiskMesh m(12 << level, 48 << level);
    const H1Riesz riesz(m);
    const ScalarField g = grad_u(m, ones(m), BoundaryTrace::constant(m.boundary_count(), 0.0), bubble_field(m), kTwoPi);
    const double n = riesz.dual_norm(g.values());
    if (level > 0) CHECK(n < 0.5 * prev);
    prev = n;
  }
}

TEST_CASE("optimal rho solves the rho-stationarity equation") {
  const double r = optimal_rho(std::log(oracle::pi), std::log(2.0 * oracle::pi));
  CHECK(r == doctest::Approx(oracle::constant_field_rho(1.0, 1.0)).epsilon(1e-13));
  CHECK(r == doctest::Approx((4.0 - 2.0 * std::sqrt(3.0)) * oracle::pi).epsilon(1e-13));
  for (double la : {-3.0, 0.0, 2.0}) {
    for (double lb : {-1.0, 1.5, 4.0}) {
      const double x = optimal_rho(la, lb);
      const double q = kTwoPi - x;
      CHECK(q * q / x == doctest::Approx(std::exp(2.0 * lb - la)).epsilon(1e-10));
    }
  }
}

TEST_CASE("line differences agree with direct evaluation") {
  const DiskMesh m(8, 32);
  const BoundaryTrace h = sample_circle(CurvatureSpec::angular_mode(1.0, 0.5, 2), m);
  const ScalarField k = ones(m);
  const EnergyFunctional f(m, k, h);
  const ScalarField u = random_smooth_field(m, 2, 0.3);
  const ScalarField d = random_smooth_field(m, 4, 0.3);
  const EnergyPoint p = f.evaluate(u.values(), 2.0);
  const LineData line = f.line(p, d.values());
  for (double alpha : {1e-6, 1e-2, 0.7}) {
    double change = 0.0;
    REQUIRE(f.change(line, alpha, 2.1, 0.1, change));
    const double direct = f.breakdown(f.evaluate(u.values() + alpha * d.values(), 2.1)).total -
                          f.breakdown(p).total;
    CHECK(change == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
  }
}

}
