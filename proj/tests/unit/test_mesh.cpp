#include <cmath>
#include <sstream>

#include "diskcurv/errors.hpp"
#include "diskcurv/mesh.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace diskcurv;

namespace {

ScalarField nodal(const DiskMesh& mesh, double (*f)(double, double)) {
  Vector v(static_cast<Eigen::Index>(mesh.node_count()));
  const auto nodes = mesh.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) v[static_cast<Eigen::Index>(i)] = f(nodes[i].x, nodes[i].y);
  return ScalarField(v);
}

BoundaryTrace angular(const DiskMesh& mesh, double (*g)(double)) {
  Vector v(static_cast<Eigen::Index>(mesh.boundary_count()));
  const auto nodes = mesh.nodes();
  const auto bnodes = mesh.boundary_nodes();
  for (std::size_t b = 0; b < bnodes.size(); ++b) {
    const auto& p = nodes[static_cast<std::size_t>(bnodes[b])];
    v[static_cast<Eigen::Index>(b)] = g(std::atan2(p.y, p.x));
  }
  return BoundaryTrace(v);
}

}  // namespace

TEST_SUITE("mesh") {

TEST_CASE("smallest mesh has a center node, two rings and a boundary ring") {
  const DiskMesh mesh = build_mesh(2, 8, 1);
  CHECK(mesh.node_count() == 17);
  CHECK(mesh.boundary_count() == 8);
  for (int b : mesh.boundary_nodes()) {
    const auto& p = mesh.nodes()[static_cast<std::size_t>(b)];
    CHECK(std::hypot(p.x, p.y) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("invalid resolutions are configuration errors") {
  CHECK_THROWS_AS(build_mesh(1, 8, 1), ConfigError);
  CHECK_THROWS_AS(build_mesh(4, 6, 1), ConfigError);
  CHECK_THROWS_AS(build_mesh(4, 12, 5), ConfigError);
  CHECK_THROWS_AS(build_mesh(4, 12, 0), ConfigError);
}

TEST_CASE("rotation by 2pi/3 maps the node set onto itself") {
  const DiskMesh mesh = build_mesh(4, 12, 3);
  const double c = std::cos(2.0 * oracle::pi / 3.0), s = std::sin(2.0 * oracle::pi / 3.0);
  for (const auto& p : mesh.nodes()) {
    const double x = c * p.x - s * p.y, y = s * p.x + c * p.y;
    double best = 1e9;
    for (const auto& q : mesh.nodes()) best = std::min(best, std::hypot(q.x - x, q.y - y));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("area converges to pi at second order, boundary length is exact") {
  double prev_area = 0.0;
  for (int level = 0; level < 3; ++level) {
    const DiskMesh mesh(12 << level, 48 << level);
    const double err = std::abs(mesh.area() - oracle::pi);
    CHECK(std::abs(area_integral(mesh, ScalarField::constant(mesh.node_count(), 1.0)) -
                   mesh.area()) < 1e-12);
    if (level > 0) CHECK(prev_area / err > 3.5);
    prev_area = err;
    CHECK(mesh.boundary_length() == doctest::Approx(2.0 * oracle::pi).epsilon(1e-14));
    CHECK(boundary_integral(mesh, BoundaryTrace::constant(mesh.boundary_count(), 1.0)) ==
          doctest::Approx(mesh.boundary_length()).epsilon(1e-14));
  }
}

TEST_CASE("integrals of simple fields") {
  const DiskMesh mesh(48, 192);
  CHECK(std::abs(area_integral(mesh, nodal(mesh, [](double x, double) { return x; }))) < 1e-12);
  const double r2 = area_integral(mesh, nodal(mesh, [](double x, double y) { return x * x + y * y; }));
  CHECK(std::abs(r2 - oracle::pi / 2.0) < 2e-3);
  CHECK(std::abs(boundary_integral(mesh, angular(mesh, [](double t) { return std::cos(t); }))) < 1e-12);
  const double c2 = boundary_integral(mesh, angular(mesh, [](double t) { return std::cos(t) * std::cos(t); }));
  CHECK(std::abs(c2 - oracle::pi) < 1e-3);
}

TEST_CASE("dirichlet energy of constants, a linear field and the bubble") {
  const DiskMesh mesh(48, 192);
  CHECK(std::abs(dirichlet_energy(mesh, ScalarField::constant(mesh.node_count(), 3.0))) < 1e-10);
  const double lin = dirichlet_energy(mesh, nodal(mesh, [](double x, double) { return x; }));
  CHECK(std::abs(lin - oracle::pi) < 2e-3);
  const double ref = oracle::radial([](double r) {
    const double d = oracle::bubble_slope(r);
    return d * d;
  });
  const double d = dirichlet_energy(mesh, nodal(mesh, [](double x, double y) {
    return oracle::bubble(std::hypot(x, y));
  }));
  CHECK(std::abs(d - ref) < 5e-3 * ref);
}

TEST_CASE("linear field dirichlet error decreases at second order") {
  double prev = 0.0;
  for (int level = 0; level < 3; ++level) {
    const DiskMesh mesh(8 << level, 32 << level);
    const double err = std::abs(dirichlet_energy(mesh, nodal(mesh, [](double x, double) { return x; })) - oracle::pi);
    if (level > 0) CHECK(prev / err > 3.5);
    prev = err;
  }
}

TEST_CASE("auxiliary neumann solution is r^2 - 1/2") {
  const DiskMesh mesh(48, 192);
  const ScalarField w = solve_auxiliary_neumann(mesh);
  CHECK(std::abs(area_mean(mesh, w)) < 1e-12);
  double err = 0.0;
  const auto nodes = mesh.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    err = std::max(err, std::abs(w[i] - (nodes[i].x * nodes[i].x + nodes[i].y * nodes[i].y - 0.5)));
  }
  CHECK(err < 5e-3);
}

TEST_CASE("riesz map inverts the H1 norm") {
  const DiskMesh mesh(12, 48);
  const H1Riesz riesz(mesh);
  const ScalarField f = nodal(mesh, [](double x, double y) { return x * y + 0.3 * x; });
  const Vector g = riesz.solve(f.values());
  CHECK(riesz.norm(g) == doctest::Approx(riesz.dual_norm(f.values())).epsilon(1e-10));
}

TEST_CASE("mesh csv headers") {
  const DiskMesh mesh(2, 8);
  std::ostringstream nodes, tris;
  write_nodes_csv(mesh, nodes);
  write_triangles_csv(mesh, tris);
  CHECK(nodes.str().rfind("node_id,x,y", 0) == 0);
  CHECK(tris.str().rfind("t_id,n0,n1,n2", 0) == 0);
}

}
