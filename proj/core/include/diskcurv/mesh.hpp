#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "diskcurv/field.hpp"

namespace diskcurv {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

using Triangle = std::array<int, 3>;
using Edge = std::array<int, 2>;

// Interior rule: lumped vertex rule (area/3 per vertex), exact for affine
// integrands on each triangle. Boundary rule: trapezoid in arc length along
// the unit circle, exact for affine functions of the arc parameter.
struct QuadratureRule {
  std::vector<double> triangle_areas;
  std::vector<Point2> triangle_centroids;
  std::vector<double> edge_lengths;  // arc length of each boundary edge
  Vector area_weights;               // per node
  Vector boundary_weights;           // per boundary index
};

// P1 stiffness matrix for u -> int <grad u, grad v>, plus the per-triangle
// gradients of the barycentric coordinates used to evaluate the quadratic
// form as a sum of nonnegative element terms.
struct StiffnessOperator {
  SparseMatrix matrix;
  std::vector<std::array<Eigen::Vector2d, 3>> barycentric_gradients;
};

// Polar triangulation of the closed unit disk: one center node plus
// n_radial concentric rings of n_angular nodes each, ring j at radius
// j / n_radial. Odd rings are rotated by half an angular step so that every
// strip triangle is isosceles and reflections about the x-axis permute nodes.
class DiskMesh {
 public:
  DiskMesh(int n_radial, int n_angular);

  int n_radial() const noexcept { return n_radial_; }
  int n_angular() const noexcept { return n_angular_; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t boundary_count() const noexcept { return boundary_nodes_.size(); }

  std::span<const Point2> nodes() const noexcept { return nodes_; }
  std::span<const Triangle> triangles() const noexcept { return triangles_; }
  std::span<const int> boundary_nodes() const noexcept { return boundary_nodes_; }
  std::span<const Edge> boundary_edges() const noexcept { return boundary_edges_; }

  // Ring 0 is the center node; the angular index is ignored there.
  int node_index(int ring, int angular) const;
  int ring_of(int node) const;
  int angular_of(int node) const;
  // Angular offset of a ring in units of the angular step: 0 or 1/2.
  double ring_offset(int ring) const noexcept { return (ring % 2 == 1) ? 0.5 : 0.0; }
  // -1 for interior nodes.
  int boundary_index_of(int node) const { return boundary_index_[static_cast<std::size_t>(node)]; }

  const QuadratureRule& quadrature() const noexcept { return quadrature_; }
  const StiffnessOperator& stiffness() const noexcept { return stiffness_; }

  double area() const noexcept { return area_; }
  double boundary_length() const noexcept { return boundary_length_; }

  // Boundary weights scattered to a node-length vector (zero on interior nodes).
  const Vector& boundary_weights_on_nodes() const noexcept { return boundary_weights_nodes_; }

  // Nodal field from the boundary values (interior entries zero).
  Vector scatter_boundary(const Vector& boundary_values) const;
  BoundaryTrace trace(const ScalarField& field) const;

 private:
  void build_nodes();
  void build_triangles();
  void build_quadrature();
  void build_stiffness();

  int n_radial_;
  int n_angular_;
  std::vector<Point2> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<int> boundary_nodes_;
  std::vector<Edge> boundary_edges_;
  std::vector<int> boundary_index_;
  QuadratureRule quadrature_;
  StiffnessOperator stiffness_;
  Vector boundary_weights_nodes_;
  double area_ = 0.0;
  double boundary_length_ = 0.0;
};

// Validates n_radial >= 2, n_angular >= 8 and n_angular % group_order == 0.
DiskMesh build_mesh(int n_radial, int n_angular, int group_order = 1);

double area_integral(const DiskMesh& mesh, const ScalarField& field);
double boundary_integral(const DiskMesh& mesh, const BoundaryTrace& trace);

// int |grad u|^2 (no factor 1/2), summed element by element.
double dirichlet_energy(const DiskMesh& mesh, const ScalarField& field);
// Same quadratic form restricted to the triangles flagged in `mask`.
double dirichlet_energy(const DiskMesh& mesh, const ScalarField& field,
                        std::span<const char> triangle_mask);
double stiffness_form(const DiskMesh& mesh, const ScalarField& u, const ScalarField& v);

double area_mean(const DiskMesh& mesh, const ScalarField& field);
double boundary_mean(const DiskMesh& mesh, const BoundaryTrace& trace);
ScalarField remove_area_mean(const DiskMesh& mesh, const ScalarField& field);

// Discrete solution of -Lap w = -4pi/|D|, dw/dn = 4pi/|S^1| with zero disk
// mean. On the unit disk this is r^2 - 1/2.
ScalarField solve_auxiliary_neumann(const DiskMesh& mesh);

// Riesz map of the discrete H^1 inner product (stiffness + lumped mass).
// Used as the optimizer preconditioner and for dual-norm residuals.
class H1Riesz {
 public:
  explicit H1Riesz(const DiskMesh& mesh);

  Vector solve(const Vector& functional) const;
  // sqrt(r^T (S + M)^{-1} r)
  double dual_norm(const Vector& functional) const;
  // sqrt(u^T (S + M) u)
  double norm(const Vector& field) const;

 private:
  SparseMatrix gram_;
  Eigen::SimplicialLDLT<SparseMatrix> factor_;
};

// CSV export: `node_id,x,y,is_boundary` and `t_id,n0,n1,n2`.
void write_nodes_csv(const DiskMesh& mesh, std::ostream& out);
void write_triangles_csv(const DiskMesh& mesh, std::ostream& out);

}  // namespace diskcurv
