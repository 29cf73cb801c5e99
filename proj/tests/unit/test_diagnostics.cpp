#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "diskcurv/curvature.hpp"
#include "diskcurv/diagnostics.hpp"
#include "diskcurv/errors.hpp"
#include "diskcurv/parallel.hpp"
#include "diskcurv/studies.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace diskcurv;

namespace {

ScalarField bubble_field(const DiskMesh& m) {
  ScalarField u = ScalarField::constant(m.node_count(), 0.0);
  const auto nodes = m.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) u[i] = oracle::bubble(std::hypot(nodes[i].x, nodes[i].y));
  return u;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("flat disk with unit boundary curvature satisfies everything") {
  DiskMesh m(16, 64);
  const ScalarField zero = ScalarField::constant(m.node_count(), 0.0);
  const BoundaryTrace one = BoundaryTrace::constant(m.boundary_count(), 1.0);
  CHECK(gauss_bonnet_residual(m, zero, one, zero) < 1e-12);
  const WeakResidual w = weak_residual(m, zero, one, zero);
  CHECK(w.interior < 1e-13);
  CHECK(w.boundary < 1e-13);
}

TEST_CASE("weak residual detects a non-solution") {
  DiskMesh m(16, 64);
  ScalarField u = ScalarField::constant(m.node_count(), 0.0);
  const auto nodes = m.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) u[i] = 0.3 * nodes[i].x * nodes[i].y;
  const WeakResidual w = weak_residual(m, ScalarField::constant(m.node_count(), 0.0),
                                       BoundaryTrace::constant(m.boundary_count(), 1.0), u);
  CHECK(w.interior + w.boundary > 1e-3);
}

TEST_CASE("bubble residual decreases with refinement") {
  double prev = 0.0;
  for (int n : {8, 16, 32}) {
    DiskMesh m(n, 4 * n);
    const WeakResidual w = weak_residual(m, ScalarField::constant(m.node_count(), 1.0),
                                         BoundaryTrace::constant(m.boundary_count(), 0.0), bubble_field(m));
    if (prev > 0.0) CHECK(w.interior < 0.5 * prev);
    prev = w.interior;
  }
}

TEST_CASE("rho constraint residual") {
  DiskMesh m(12, 48);
  const ScalarField zero = ScalarField::constant(m.node_count(), 0.0);
  const ScalarField k = ScalarField::constant(m.node_count(), 1.0);
  const BoundaryTrace h = BoundaryTrace::constant(m.boundary_count(), 1.0);
  const double rho = optimal_rho(log_area_integral(m, k, zero), log_boundary_integral(m, h, zero));
  CHECK(rho_constraint_residual(m, k, h, zero, rho) < 1e-12);
  CHECK(rho_constraint_residual(m, k, h, zero, 1.0) > 1e-2);
  CHECK(rho_constraint_residual(m, k, h, zero, 0.0) == 0.0);
}

TEST_CASE("exact solution verification") {
  DiskMesh m(24, 96);
  SolveConfig c;
  c.group = SymmetryGroup::cyclic(m, 2);
  const VerificationReport r = verify_exact_solutions(m, c);
  CHECK(r.geodesic.passed);
  CHECK(r.gaussian.passed);
  CHECK(exact_bubble(0.0, 0.0) == doctest::Approx(2.0 * std::log(2.0)));
}

TEST_CASE("refinement study rejects short or unordered ladders") {
  RefinementProblem p;
  SolveConfig c;
  CHECK_THROWS_AS(refinement_study(p, {{12, 48}}, c), PreconditionError);
  CHECK_THROWS_AS(refinement_study(p, {{12, 48}, {24, 96}, {24, 192}}, c), PreconditionError);
  const auto ladder = doubling_ladder({6, 24}, 3);
  REQUIRE(ladder.size() == 3);
  CHECK(ladder[2].n_radial == 24);
  CHECK(ladder[2].n_angular == 96);
  CHECK(parse_refinement_target("limit-2pi") == RefinementTarget::limit_two_pi);
  CHECK_THROWS_AS(parse_refinement_target("both"), ConfigError);
}

TEST_CASE("refinement study on the bubble") {
  RefinementProblem p;
  p.target = RefinementTarget::limit_two_pi;
  p.h = CurvatureSpec::constant(0.0);
  p.exact_field = exact_bubble;
  p.exact_rho = kTwoPi;
  const RefinementTable t = refinement_study(p, doubling_ladder({6, 24}, 3), SolveConfig{});
  REQUIRE(t.complete);
  REQUIRE(t.field_order.size() == 2);
  CHECK(t.field_order[1] > 1.5);
  std::ostringstream csv;
  write_refinement_csv(t, csv);
  CHECK(csv.str().rfind("n_radial,n_angular,converged,rho,rho_error,rho_order,field_error", 0) == 0);
}

TEST_CASE("perturbation sweep") {
  DiskMesh m(12, 48);
  SolveConfig c;
  c.group = SymmetryGroup::cyclic(m, 2);
  const ScalarField k0 = ScalarField::constant(m.node_count(), 1.0);
  const BoundaryTrace h0 = BoundaryTrace::constant(m.boundary_count(), 1.0);
  const auto bump = default_bump();
  const SweepResult s = perturbation_sweep(m, k0, h0, sample_disk(bump, m), sample_circle(bump, m),
                                           {0.0, 0.05, 0.2}, c);
  REQUIRE(s.entries.size() == 3);
  CHECK(s.entries[0].retained);
  CHECK(s.entries[0].hypothesis);
  CHECK(s.monotone);
  CHECK(s.max_feasible_epsilon >= 0.05);
  std::ostringstream csv;
  write_sweep_csv(s, csv);
  CHECK(csv.str().rfind("epsilon,converged,rho,gb_residual,weak_residual", 0) == 0);

  const ScalarField negative = ScalarField::constant(m.node_count(), -1.0);
  CHECK_THROWS_AS(perturbation_sweep(m, negative, h0, k0, h0, {0.0}, c), ConfigError);
  CHECK_THROWS_AS(perturbation_sweep(m, k0, h0, sample_disk(CurvatureSpec::angular_mode(0, 1, 1), m), h0, {0.0}, c),
                  ConfigError);
}

TEST_CASE("sweep flags epsilons where the hypothesis fails") {
  DiskMesh m(12, 48);
  SolveConfig c;
  c.group = SymmetryGroup::cyclic(m, 2);
  const ScalarField k0 = ScalarField::constant(m.node_count(), 1.0);
  const BoundaryTrace h0 = BoundaryTrace::constant(m.boundary_count(), 1.0);
  const SweepResult s = perturbation_sweep(m, k0, h0, ScalarField::constant(m.node_count(), 0.0),
                                           BoundaryTrace::constant(m.boundary_count(), 1.0), {0.0, 1.5}, c);
  REQUIRE(s.entries.size() == 2);
  CHECK(s.entries[0].retained);
  CHECK_FALSE(s.entries[1].hypothesis);
  CHECK_FALSE(s.entries[1].retained);
  CHECK(s.max_feasible_epsilon == 0.0);
}

TEST_CASE("coercivity probe") {
  DiskMesh m(16, 64);
  const SymmetryGroup g = SymmetryGroup::cyclic(m, 2);
  const ScalarField k = ScalarField::constant(m.node_count(), 1.0);
  const BoundaryTrace h = BoundaryTrace::constant(m.boundary_count(), 1.0);
  const auto dirs = symmetric_probe_directions(m, g, 7, 3);
  REQUIRE(dirs.size() >= 5);
  for (const auto& d : dirs) {
    CHECK(symmetry_residual(d, g) < 1e-12);
    double lo = 1e300, hi = 0.0;
    for (double rho : {kPi / 2, kPi, 3 * kPi / 2}) {
      const CoercivityFit fit = coercivity_probe(m, k, h, rho, d, default_probe_grid(), g);
      CHECK(fit.a > 0.0);
      lo = std::min(lo, fit.a);
      hi = std::max(hi, fit.a);
    }
    CHECK((hi - lo) / hi <= 0.5);
  }
  CHECK_THROWS_AS(coercivity_probe(m, k, h, kPi, ScalarField::constant(m.node_count(), 2.0),
                                   default_probe_grid(), g),
                  PreconditionError);
  CHECK_THROWS_AS(coercivity_probe(m, k, h, kPi, dirs[0], {0.0, 1.0}, g), PreconditionError);
}

TEST_CASE("parallel_for covers every index and rethrows") {
  set_thread_count(4);
  CHECK(thread_count() == 4);
  std::vector<int> out(100, 0);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(2 * i));
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i >= 3) throw std::runtime_error("x"); }),
                  std::runtime_error);
  CHECK_THROWS_AS(set_thread_count(-1), ConfigError);
  set_thread_count(0);
}

}
