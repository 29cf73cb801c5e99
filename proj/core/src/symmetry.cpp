#include "diskcurv/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "diskcurv/errors.hpp"

namespace diskcurv {

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::trivial:
      return "trivial";
    case GroupKind::cyclic:
      return "cyclic";
    case GroupKind::dihedral:
      return "dihedral";
  }
  return "unknown";
}

GroupKind parse_group_kind(const std::string& name) {
  if (name == "trivial") return GroupKind::trivial;
  if (name == "cyclic") return GroupKind::cyclic;
  if (name == "dihedral") return GroupKind::dihedral;
  throw ConfigError("unknown group kind '" + name + "' (expected trivial, cyclic or dihedral)");
}

SymmetryGroup SymmetryGroup::trivial(const DiskMesh& mesh) {
  return SymmetryGroup(mesh, GroupKind::trivial, 1);
}

SymmetryGroup SymmetryGroup::cyclic(const DiskMesh& mesh, int k) {
  return SymmetryGroup(mesh, GroupKind::cyclic, k);
}

SymmetryGroup SymmetryGroup::dihedral(const DiskMesh& mesh, int k) {
  return SymmetryGroup(mesh, GroupKind::dihedral, k);
}

SymmetryGroup SymmetryGroup::make(const DiskMesh& mesh, GroupKind kind, int k) {
  return SymmetryGroup(mesh, kind, k);
}

SymmetryGroup::SymmetryGroup(const DiskMesh& mesh, GroupKind kind, int k)
    : kind_(kind),
      k_(kind == GroupKind::trivial ? 1 : k),
      node_count_(mesh.node_count()),
      boundary_count_(mesh.boundary_count()) {
  const int n = mesh.n_angular();
  if (kind != GroupKind::trivial) {
    if (k < 1) throw ConfigError("group parameter k must be >= 1, got " + std::to_string(k));
    const int divisor = kind == GroupKind::dihedral ? 2 * k : k;
    if (n % divisor != 0) {
      throw ConfigError("incompatible group/mesh: n_angular=" + std::to_string(n) +
                        " is not divisible by " + std::to_string(divisor) + " for " +
                        to_string(kind) + " group with k=" + std::to_string(k));
    }
  }

  const int shift = n / k_;
  const auto nodes = static_cast<int>(node_count_);

  // Rotation by m * 2pi/k shifts every ring by m * n/k positions.
  auto rotation = [&](int m) {
    std::vector<int> perm(static_cast<std::size_t>(nodes));
    perm[0] = 0;
    for (int v = 1; v < nodes; ++v) {
      perm[static_cast<std::size_t>(v)] =
          mesh.node_index(mesh.ring_of(v), mesh.angular_of(v) + m * shift);
    }
    return perm;
  };
  // Reflection theta -> -theta, then rotation by m * 2pi/k. A node at angular
  // position i + o maps to -(i + o), i.e. index -i - 2o.
  auto reflection = [&](int m) {
    std::vector<int> perm(static_cast<std::size_t>(nodes));
    perm[0] = 0;
    for (int v = 1; v < nodes; ++v) {
      const int ring = mesh.ring_of(v);
      const int twice_offset = static_cast<int>(2.0 * mesh.ring_offset(ring));
      perm[static_cast<std::size_t>(v)] =
          mesh.node_index(ring, -mesh.angular_of(v) - twice_offset + m * shift);
    }
    return perm;
  };

  for (int m = 0; m < k_; ++m) node_perms_.push_back(rotation(m));
  if (kind == GroupKind::dihedral) {
    for (int m = 0; m < k_; ++m) node_perms_.push_back(reflection(m));
  }

  for (const auto& perm : node_perms_) {
    std::vector<int> bperm(boundary_count_);
    for (std::size_t b = 0; b < boundary_count_; ++b) {
      bperm[b] = mesh.boundary_index_of(perm[static_cast<std::size_t>(mesh.boundary_nodes()[b])]);
    }
    boundary_perms_.push_back(std::move(bperm));
  }
  build_orbits();
}

void SymmetryGroup::build_orbits() {
  auto orbits_of = [](const std::vector<std::vector<int>>& perms, std::size_t count) {
    std::vector<std::vector<int>> orbits;
    std::vector<char> seen(count, 0);
    for (std::size_t i = 0; i < count; ++i) {
      if (seen[i]) continue;
      std::set<int> members;
      for (const auto& perm : perms) members.insert(perm[i]);
      for (int m : members) seen[static_cast<std::size_t>(m)] = 1;
      orbits.emplace_back(members.begin(), members.end());
    }
    return orbits;
  };
  node_orbits_ = orbits_of(node_perms_, node_count_);
  boundary_orbits_ = orbits_of(boundary_perms_, boundary_count_);
}

std::string SymmetryGroup::describe() const {
  if (empty()) return "none";
  if (kind_ == GroupKind::trivial) return "trivial";
  return to_string(kind_) + " k=" + std::to_string(k_);
}

namespace {

void check_compatible(const SymmetryGroup& group, std::size_t size, std::size_t expected,
                      const char* what) {
  if (group.empty()) throw ConfigError(std::string(what) + ": symmetry group is not initialized");
  if (size != expected) {
    throw ConfigError(std::string(what) + ": field length " + std::to_string(size) +
                      " does not match the mesh the group was built on (" +
                      std::to_string(expected) + ")");
  }
}

void average_orbits(Vector& values, const std::vector<std::vector<int>>& orbits) {
  for (const auto& orbit : orbits) {
    if (orbit.size() == 1) continue;
    double sum = 0.0;
    for (int i : orbit) sum += values[i];
    const double mean = sum / static_cast<double>(orbit.size());
    for (int i : orbit) values[i] = mean;
  }
}

double residual(const Vector& values, const std::vector<std::vector<int>>& perms) {
  double worst = 0.0;
  for (const auto& perm : perms) {
    for (std::size_t i = 0; i < perm.size(); ++i) {
      const double d =
          std::abs(values[static_cast<Eigen::Index>(i)] - values[perm[i]]);
      worst = std::max(worst, d);
    }
  }
  return worst;
}

}  // namespace

void symmetrize_in_place(Vector& nodal_values, const SymmetryGroup& group) {
  check_compatible(group, static_cast<std::size_t>(nodal_values.size()), group.node_count(),
                   "symmetrize");
  average_orbits(nodal_values, group.node_orbits());
}

ScalarField symmetrize(const ScalarField& field, const SymmetryGroup& group) {
  check_compatible(group, field.size(), group.node_count(), "symmetrize");
  Vector values = field.values();
  average_orbits(values, group.node_orbits());
  return ScalarField(std::move(values));
}

BoundaryTrace symmetrize(const BoundaryTrace& trace, const SymmetryGroup& group) {
  check_compatible(group, trace.size(), group.boundary_count(), "symmetrize");
  Vector values = trace.values();
  average_orbits(values, group.boundary_orbits());
  return BoundaryTrace(std::move(values));
}

double symmetry_residual(const ScalarField& field, const SymmetryGroup& group) {
  check_compatible(group, field.size(), group.node_count(), "symmetry_residual");
  std::vector<std::vector<int>> perms;
  for (int g = 0; g < group.order(); ++g) perms.push_back(group.node_permutation(g));
  return residual(field.values(), perms);
}

double symmetry_residual(const BoundaryTrace& trace, const SymmetryGroup& group) {
  check_compatible(group, trace.size(), group.boundary_count(), "symmetry_residual");
  std::vector<std::vector<int>> perms;
  for (int g = 0; g < group.order(); ++g) perms.push_back(group.boundary_permutation(g));
  return residual(trace.values(), perms);
}

bool is_symmetric(const ScalarField& field, const SymmetryGroup& group, double tol) {
  return symmetry_residual(field, group) <= tol;
}

bool is_symmetric(const BoundaryTrace& trace, const SymmetryGroup& group, double tol) {
  return symmetry_residual(trace, group) <= tol;
}

bool validate_fixed_point_free(const SymmetryGroup& group, const DiskMesh& mesh) {
  if (group.empty() || group.order() < 2) return false;
  if (group.node_count() != mesh.node_count()) return false;
  for (std::size_t b = 0; b < mesh.boundary_count(); ++b) {
    bool moved = false;
    for (int g = 0; g < group.order() && !moved; ++g) {
      moved = group.boundary_permutation(g)[b] != static_cast<int>(b);
    }
    if (!moved) return false;
  }
  return true;
}

double isometry_defect(const SymmetryGroup& group, const DiskMesh& mesh) {
  std::set<std::array<int, 3>> triangle_set;
  for (auto t : mesh.triangles()) {
    std::sort(t.begin(), t.end());
    triangle_set.insert(t);
  }
  const auto nodes = mesh.nodes();
  auto dist = [&](int a, int b) {
    return std::hypot(nodes[static_cast<std::size_t>(a)].x - nodes[static_cast<std::size_t>(b)].x,
                      nodes[static_cast<std::size_t>(a)].y - nodes[static_cast<std::size_t>(b)].y);
  };
  double worst = 0.0;
  for (int g = 0; g < group.order(); ++g) {
    const auto& perm = group.node_permutation(g);
    for (const auto& t : mesh.triangles()) {
      std::array<int, 3> image{perm[static_cast<std::size_t>(t[0])],
                               perm[static_cast<std::size_t>(t[1])],
                               perm[static_cast<std::size_t>(t[2])]};
      std::array<int, 3> sorted = image;
      std::sort(sorted.begin(), sorted.end());
      if (!triangle_set.contains(sorted)) return std::numeric_limits<double>::infinity();
      for (int e = 0; e < 3; ++e) {
        const double before = dist(t[e], t[(e + 1) % 3]);
        const double after = dist(image[e], image[(e + 1) % 3]);
        worst = std::max(worst, std::abs(before - after));
      }
    }
  }
  return worst;
}

}  // namespace diskcurv
