#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "diskcurv/field.hpp"
#include "diskcurv/mesh.hpp"
#include "diskcurv/symmetry.hpp"

namespace diskcurv {

enum class CurvatureKind { constant, radial_bump, angular_mode, tabulated };

std::string to_string(CurvatureKind kind);
CurvatureKind parse_curvature_kind(const std::string& name);

// A curvature function sampled at mesh nodes.
//   constant:      base
//   radial_bump:   base + amplitude * exp(-((r - center_radius) / width)^2)
//   angular_mode:  base + amplitude * cos(mode * theta)
//   tabulated:     table[i] (node id for K, boundary index for h)
// On the boundary circle r = 1 the radial bump is a constant.
struct CurvatureSpec {
  CurvatureKind kind = CurvatureKind::constant;
  double base = 0.0;
  double amplitude = 0.0;
  int mode = 0;
  double center_radius = 0.0;
  double width = 0.25;
  std::vector<double> table;

  static CurvatureSpec constant(double value);
  static CurvatureSpec radial_bump(double base, double amplitude, double center_radius,
                                   double width);
  static CurvatureSpec angular_mode(double base, double amplitude, int mode);
  static CurvatureSpec tabulated(std::vector<double> values);

  double evaluate(double x, double y) const;
};

// Whether the spec is invariant under the group: angular modes need k | mode;
// tabulated specs are sampled and checked on the mesh at tolerance 1e-12.
bool spec_is_symmetric(const CurvatureSpec& spec, const SymmetryGroup& group,
                       const DiskMesh& mesh, bool on_boundary);

ScalarField sample_disk(const CurvatureSpec& spec, const DiskMesh& mesh);
BoundaryTrace sample_circle(const CurvatureSpec& spec, const DiskMesh& mesh);
std::pair<ScalarField, BoundaryTrace> sample_curvatures(const CurvatureSpec& k_spec,
                                                        const CurvatureSpec& h_spec,
                                                        const DiskMesh& mesh);

// Tabulated curvature files: `node_id,value` for K and `boundary_index,value`
// for h. Values are written in shortest round-trip form.
void write_disk_table(const ScalarField& k, std::ostream& out);
void write_circle_table(const BoundaryTrace& h, std::ostream& out);
ScalarField read_disk_table(std::istream& in, std::size_t node_count, const std::string& source);
BoundaryTrace read_circle_table(std::istream& in, std::size_t boundary_count,
                                const std::string& source);

}  // namespace diskcurv
