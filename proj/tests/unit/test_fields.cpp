#include <cmath>
#include <sstream>

#include "diskcurv/curvature.hpp"
#include "diskcurv/errors.hpp"
#include "diskcurv/symmetry.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace diskcurv;

namespace {

BoundaryTrace mode_trace(const DiskMesh& mesh, int m) {
  return sample_circle(CurvatureSpec::angular_mode(0.0, 1.0, m), mesh);
}

ScalarField mode_field(const DiskMesh& mesh, int m) {
  return sample_disk(CurvatureSpec::angular_mode(0.0, 1.0, m), mesh);
}

}  // namespace

TEST_SUITE("fields_symmetry") {

TEST_CASE("fields reject non-finite values and size mismatches") {
  ScalarField f = ScalarField::constant(5, 1.0);
  CHECK_NOTHROW(require_valid(f, 5, "f"));
  CHECK_THROWS_AS(require_valid(f, 6, "f"), InvalidFieldError);
  f[2] = std::nan("");
  CHECK_THROWS_AS(require_valid(f, 5, "f"), InvalidFieldError);
}

TEST_CASE("constant curvatures sample to constant vectors") {
  const DiskMesh mesh(6, 24);
  const auto [k, h] = sample_curvatures(CurvatureSpec::constant(1.0), CurvatureSpec::constant(1.0), mesh);
  CHECK(k.values().minCoeff() == 1.0);
  CHECK(k.values().maxCoeff() == 1.0);
  CHECK(h.values().minCoeff() == 1.0);
  CHECK(h.size() == mesh.boundary_count());
}

TEST_CASE("angular mode on the boundary matches the formula at nodes") {
  const DiskMesh mesh(4, 16);
  const BoundaryTrace h = sample_circle(CurvatureSpec::angular_mode(1.0, 0.5, 2), mesh);
  const auto nodes = mesh.nodes();
  for (std::size_t b = 0; b < mesh.boundary_count(); ++b) {
    const auto& p = nodes[static_cast<std::size_t>(mesh.boundary_nodes()[b])];
    CHECK(h[b] == doctest::Approx(1.0 + 0.5 * std::cos(2.0 * std::atan2(p.y, p.x))).epsilon(1e-14));
  }
}

TEST_CASE("radial bump spec") {
  const CurvatureSpec s = CurvatureSpec::radial_bump(0.5, 2.0, 0.3, 0.1);
  CHECK(s.evaluate(0.3, 0.0) == doctest::Approx(2.5));
  CHECK(s.evaluate(0.0, 0.4) == doctest::Approx(0.5 + 2.0 * std::exp(-1.0)));
  CHECK_THROWS_AS(CurvatureSpec::radial_bump(0.0, 1.0, 0.0, 0.0), ConfigError);
  CHECK_THROWS_AS(parse_curvature_kind("wavy"), ConfigError);
  CHECK(parse_curvature_kind(to_string(CurvatureKind::angular_mode)) == CurvatureKind::angular_mode);
}

TEST_CASE("symmetrizing cos theta under Z2 gives zero") {
  const DiskMesh mesh(8, 32);
  const auto g = SymmetryGroup::cyclic(mesh, 2);
  const BoundaryTrace s = symmetrize(mode_trace(mesh, 1), g);
  CHECK(s.values().cwiseAbs().maxCoeff() < 1e-14);
  const ScalarField c = ScalarField::constant(mesh.node_count(), 2.5);
  CHECK((symmetrize(c, g).values().array() == 2.5).all());
}

TEST_CASE("is_symmetric on modes") {
  const DiskMesh mesh(8, 48);
  const auto z2 = SymmetryGroup::cyclic(mesh, 2);
  const auto z3 = SymmetryGroup::cyclic(mesh, 3);
  const auto d3 = SymmetryGroup::dihedral(mesh, 3);
  CHECK(is_symmetric(ScalarField::constant(mesh.node_count(), 1.0), z3, 0.0));
  CHECK_FALSE(is_symmetric(mode_field(mesh, 1), z2, 1e-12));
  CHECK(is_symmetric(mode_field(mesh, 3), z3, 1e-12));
  CHECK(is_symmetric(mode_trace(mesh, 3), z3, 1e-12));
  CHECK(is_symmetric(mode_field(mesh, 3), d3, 1e-12));
}

TEST_CASE("symmetrize is a projection that commutes with group elements") {
  const DiskMesh mesh(6, 24);
  const auto d2 = SymmetryGroup::dihedral(mesh, 2);
  Vector v(static_cast<Eigen::Index>(mesh.node_count()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::sin(0.37 * static_cast<double>(i));
  const ScalarField once = symmetrize(ScalarField(v), d2);
  const ScalarField twice = symmetrize(once, d2);
  CHECK((once.values() - twice.values()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(symmetry_residual(once, d2) < 1e-15);
  CHECK(area_integral(mesh, once) == doctest::Approx(area_integral(mesh, ScalarField(v))).epsilon(1e-12));
}

TEST_CASE("group orders and fixed points") {
  const DiskMesh mesh(6, 24);
  CHECK(SymmetryGroup::cyclic(mesh, 2).order() == 2);
  CHECK(SymmetryGroup::dihedral(mesh, 3).order() == 6);
  CHECK(validate_fixed_point_free(SymmetryGroup::cyclic(mesh, 2), mesh));
  CHECK(validate_fixed_point_free(SymmetryGroup::dihedral(mesh, 3), mesh));
  CHECK_FALSE(validate_fixed_point_free(SymmetryGroup::trivial(mesh), mesh));
  CHECK_THROWS_AS(SymmetryGroup::cyclic(mesh, 5), ConfigError);
  CHECK(isometry_defect(SymmetryGroup::dihedral(mesh, 3), mesh) < 1e-12);
}

TEST_CASE("spec symmetry follows mode divisibility") {
  const DiskMesh mesh(6, 24);
  const auto z2 = SymmetryGroup::cyclic(mesh, 2);
  CHECK(spec_is_symmetric(CurvatureSpec::angular_mode(1.0, 1.0, 2), z2, mesh, false));
  CHECK_FALSE(spec_is_symmetric(CurvatureSpec::angular_mode(1.0, 1.0, 3), z2, mesh, true));
  CHECK(spec_is_symmetric(CurvatureSpec::angular_mode(1.0, 0.0, 3), z2, mesh, true));
}

TEST_CASE("curvature tables round-trip and report bad rows") {
  const DiskMesh mesh(4, 16);
  const ScalarField k = sample_disk(CurvatureSpec::radial_bump(0.1, 1.0, 0.5, 0.2), mesh);
  std::stringstream buf;
  write_disk_table(k, buf);
  const ScalarField back = read_disk_table(buf, mesh.node_count(), "k.csv");
  CHECK((back.values() - k.values()).cwiseAbs().maxCoeff() == 0.0);

  const BoundaryTrace h = mode_trace(mesh, 2);
  std::stringstream hb;
  write_circle_table(h, hb);
  CHECK((read_circle_table(hb, mesh.boundary_count(), "h.csv").values() - h.values()).norm() == 0.0);

  std::stringstream bad("node_id,value\n0,1\n0,2\n");
  try {
    read_disk_table(bad, 2, "bad.csv");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.csv:3") != std::string::npos);
  }
  std::stringstream header("id,v\n");
  CHECK_THROWS_AS(read_circle_table(header, 1, "h.csv"), ConfigError);
}

TEST_CASE("tabulated spec with wrong length is rejected") {
  const DiskMesh mesh(4, 16);
  CHECK_THROWS_AS(sample_disk(CurvatureSpec::tabulated({1.0, 2.0}), mesh), ConfigError);
}

}
