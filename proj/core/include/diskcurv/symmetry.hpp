#pragma once

#include <string>
#include <vector>

#include "diskcurv/field.hpp"
#include "diskcurv/mesh.hpp"

namespace diskcurv {

enum class GroupKind { trivial, cyclic, dihedral };

std::string to_string(GroupKind kind);
GroupKind parse_group_kind(const std::string& name);

// A finite group of disk isometries realized as node permutations of one
// particular mesh. Cyclic Z_k: rotations by multiples of 2pi/k. Dihedral D_k:
// those rotations plus the k reflections through lines at angles pi*m/k.
class SymmetryGroup {
 public:
  SymmetryGroup() = default;

  static SymmetryGroup trivial(const DiskMesh& mesh);
  static SymmetryGroup cyclic(const DiskMesh& mesh, int k);
  static SymmetryGroup dihedral(const DiskMesh& mesh, int k);
  static SymmetryGroup make(const DiskMesh& mesh, GroupKind kind, int k);

  GroupKind kind() const noexcept { return kind_; }
  int k() const noexcept { return k_; }
  // Number of group elements (k for cyclic, 2k for dihedral, 1 for trivial).
  int order() const noexcept { return static_cast<int>(node_perms_.size()); }
  bool empty() const noexcept { return node_perms_.empty(); }
  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t boundary_count() const noexcept { return boundary_count_; }
  std::string describe() const;

  // image[i] = index of g(x_i); element 0 is the identity.
  const std::vector<int>& node_permutation(int element) const {
    return node_perms_[static_cast<std::size_t>(element)];
  }
  const std::vector<int>& boundary_permutation(int element) const {
    return boundary_perms_[static_cast<std::size_t>(element)];
  }

  // Orbits of nodes / boundary indices, each sorted ascending.
  const std::vector<std::vector<int>>& node_orbits() const noexcept { return node_orbits_; }
  const std::vector<std::vector<int>>& boundary_orbits() const noexcept {
    return boundary_orbits_;
  }

 private:
  SymmetryGroup(const DiskMesh& mesh, GroupKind kind, int k);
  void build_orbits();

  GroupKind kind_ = GroupKind::trivial;
  int k_ = 1;
  std::size_t node_count_ = 0;
  std::size_t boundary_count_ = 0;
  std::vector<std::vector<int>> node_perms_;
  std::vector<std::vector<int>> boundary_perms_;
  std::vector<std::vector<int>> node_orbits_;
  std::vector<std::vector<int>> boundary_orbits_;
};

// Orbit average. The result is exactly invariant: every member of an orbit
// receives the same double, computed once in a fixed summation order.
ScalarField symmetrize(const ScalarField& field, const SymmetryGroup& group);
BoundaryTrace symmetrize(const BoundaryTrace& trace, const SymmetryGroup& group);
void symmetrize_in_place(Vector& nodal_values, const SymmetryGroup& group);

// max over g, x of |f(x) - f(g x)|.
double symmetry_residual(const ScalarField& field, const SymmetryGroup& group);
double symmetry_residual(const BoundaryTrace& trace, const SymmetryGroup& group);

bool is_symmetric(const ScalarField& field, const SymmetryGroup& group, double tol);
bool is_symmetric(const BoundaryTrace& trace, const SymmetryGroup& group, double tol);

// True iff every boundary node is moved by some group element. The trivial
// group is rejected.
bool validate_fixed_point_free(const SymmetryGroup& group, const DiskMesh& mesh);

// Checks that every permutation maps triangles to triangles and preserves
// edge lengths to `tol`; returns the worst edge-length discrepancy, or +inf
// if adjacency is broken.
double isometry_defect(const SymmetryGroup& group, const DiskMesh& mesh);

}  // namespace diskcurv
