#include "diskcurv/curvature.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "diskcurv/csv.hpp"
#include "diskcurv/errors.hpp"

namespace diskcurv {

std::string to_string(CurvatureKind kind) {
  switch (kind) {
    case CurvatureKind::constant:
      return "constant";
    case CurvatureKind::radial_bump:
      return "radial-bump";
    case CurvatureKind::angular_mode:
      return "angular-mode";
    case CurvatureKind::tabulated:
      return "tabulated";
  }
  return "unknown";
}

CurvatureKind parse_curvature_kind(const std::string& name) {
  if (name == "constant") return CurvatureKind::constant;
  if (name == "radial-bump") return CurvatureKind::radial_bump;
  if (name == "angular-mode") return CurvatureKind::angular_mode;
  if (name == "tabulated") return CurvatureKind::tabulated;
  throw ConfigError("unknown curvature kind '" + name +
                    "' (expected constant, radial-bump, angular-mode or tabulated)");
}

CurvatureSpec CurvatureSpec::constant(double value) {
  CurvatureSpec s;
  s.kind = CurvatureKind::constant;
  s.base = value;
  return s;
}

CurvatureSpec CurvatureSpec::radial_bump(double base, double amplitude, double center_radius,
                                         double width) {
  if (!(width > 0.0)) throw ConfigError("radial-bump width must be positive");
  CurvatureSpec s;
  s.kind = CurvatureKind::radial_bump;
  s.base = base;
  s.amplitude = amplitude;
  s.center_radius = center_radius;
  s.width = width;
  return s;
}

CurvatureSpec CurvatureSpec::angular_mode(double base, double amplitude, int mode) {
  CurvatureSpec s;
  s.kind = CurvatureKind::angular_mode;
  s.base = base;
  s.amplitude = amplitude;
  s.mode = mode;
  return s;
}

CurvatureSpec CurvatureSpec::tabulated(std::vector<double> values) {
  CurvatureSpec s;
  s.kind = CurvatureKind::tabulated;
  s.table = std::move(values);
  return s;
}

double CurvatureSpec::evaluate(double x, double y) const {
  switch (kind) {
    case CurvatureKind::constant:
      return base;
    case CurvatureKind::radial_bump: {
      const double z = (std::hypot(x, y) - center_radius) / width;
      return base + amplitude * std::exp(-z * z);
    }
    case CurvatureKind::angular_mode: {
      const double r = std::hypot(x, y);
      if (r == 0.0) return mode == 0 ? base + amplitude : base;
      return base + amplitude * std::cos(mode * std::atan2(y, x));
    }
    case CurvatureKind::tabulated:
      throw ConfigError("tabulated curvature has no closed-form evaluation");
  }
  return base;
}

ScalarField sample_disk(const CurvatureSpec& spec, const DiskMesh& mesh) {
  const auto n = mesh.node_count();
  if (spec.kind == CurvatureKind::tabulated) {
    if (spec.table.size() != n) {
      throw ConfigError("tabulated K has " + std::to_string(spec.table.size()) +
                        " values, mesh has " + std::to_string(n) + " nodes");
    }
    Vector v = Eigen::Map<const Vector>(spec.table.data(), static_cast<Eigen::Index>(n));
    ScalarField out(std::move(v));
    require_valid(out, n, "tabulated K");
    return out;
  }
  Vector v(static_cast<Eigen::Index>(n));
  const auto nodes = mesh.nodes();
  for (std::size_t i = 0; i < n; ++i) {
    v[static_cast<Eigen::Index>(i)] = spec.evaluate(nodes[i].x, nodes[i].y);
  }
  ScalarField out(std::move(v));
  require_valid(out, n, "sampled K");
  return out;
}

BoundaryTrace sample_circle(const CurvatureSpec& spec, const DiskMesh& mesh) {
  const auto nb = mesh.boundary_count();
  if (spec.kind == CurvatureKind::tabulated) {
    if (spec.table.size() != nb) {
      throw ConfigError("tabulated h has " + std::to_string(spec.table.size()) +
                        " values, mesh has " + std::to_string(nb) + " boundary nodes");
    }
    Vector v = Eigen::Map<const Vector>(spec.table.data(), static_cast<Eigen::Index>(nb));
    BoundaryTrace out(std::move(v));
    require_valid(out, nb, "tabulated h");
    return out;
  }
  Vector v(static_cast<Eigen::Index>(nb));
  const auto nodes = mesh.nodes();
  const auto bnodes = mesh.boundary_nodes();
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& p = nodes[static_cast<std::size_t>(bnodes[b])];
    v[static_cast<Eigen::Index>(b)] = spec.evaluate(p.x, p.y);
  }
  BoundaryTrace out(std::move(v));
  require_valid(out, nb, "sampled h");
  return out;
}

std::pair<ScalarField, BoundaryTrace> sample_curvatures(const CurvatureSpec& k_spec,
                                                        const CurvatureSpec& h_spec,
                                                        const DiskMesh& mesh) {
  return {sample_disk(k_spec, mesh), sample_circle(h_spec, mesh)};
}

bool spec_is_symmetric(const CurvatureSpec& spec, const SymmetryGroup& group,
                       const DiskMesh& mesh, bool on_boundary) {
  switch (spec.kind) {
    case CurvatureKind::constant:
    case CurvatureKind::radial_bump:
      return true;
    case CurvatureKind::angular_mode:
      // cos(m theta) is even, so reflections through the x-axis family are
      // automatic once the rotations are.
      return spec.amplitude == 0.0 || spec.mode % group.k() == 0;
    case CurvatureKind::tabulated:
      if (on_boundary) return is_symmetric(sample_circle(spec, mesh), group, 1e-12);
      return is_symmetric(sample_disk(spec, mesh), group, 1e-12);
  }
  return false;
}

void write_disk_table(const ScalarField& k, std::ostream& out) {
  out << "node_id,value\n";
  for (std::size_t i = 0; i < k.size(); ++i) out << i << ',' << format_double(k[i]) << '\n';
}

void write_circle_table(const BoundaryTrace& h, std::ostream& out) {
  out << "boundary_index,value\n";
  for (std::size_t i = 0; i < h.size(); ++i) out << i << ',' << format_double(h[i]) << '\n';
}

namespace {

Vector read_table(std::istream& in, std::size_t expected, const std::string& source,
                  const char* id_column) {
  const CsvTable table = read_csv(in, source);
  if (table.header.size() != 2 || table.header[0] != id_column || table.header[1] != "value") {
    throw ConfigError(source + ": expected header '" + id_column + ",value'");
  }
  if (table.rows.size() != expected) {
    throw ConfigError(source + ": expected " + std::to_string(expected) + " rows, got " +
                      std::to_string(table.rows.size()));
  }
  Vector values(static_cast<Eigen::Index>(expected));
  std::vector<char> seen(expected, 0);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string ctx = source + ":" + std::to_string(r + 2);
    const long long id = parse_integer(table.rows[r][0], ctx);
    if (id < 0 || static_cast<std::size_t>(id) >= expected || seen[static_cast<std::size_t>(id)]) {
      throw ConfigError(ctx + ": invalid or duplicate index " + std::to_string(id));
    }
    seen[static_cast<std::size_t>(id)] = 1;
    values[static_cast<Eigen::Index>(id)] = parse_double(table.rows[r][1], ctx);
  }
  return values;
}

}  // namespace

ScalarField read_disk_table(std::istream& in, std::size_t node_count, const std::string& source) {
  ScalarField k(read_table(in, node_count, source, "node_id"));
  require_valid(k, node_count, source);
  return k;
}

BoundaryTrace read_circle_table(std::istream& in, std::size_t boundary_count,
                                const std::string& source) {
  BoundaryTrace h(read_table(in, boundary_count, source, "boundary_index"));
  require_valid(h, boundary_count, source);
  return h;
}

}  // namespace diskcurv
