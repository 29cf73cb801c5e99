#include "diskcurv/mesh.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "diskcurv/csv.hpp"
#include "diskcurv/errors.hpp"

namespace diskcurv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double signed_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

}  // namespace

DiskMesh::DiskMesh(int n_radial, int n_angular) : n_radial_(n_radial), n_angular_(n_angular) {
  if (n_radial < 2) {
    throw ConfigError("n_radial must be >= 2, got " + std::to_string(n_radial));
  }
  if (n_angular < 8) {
    throw ConfigError("n_angular must be >= 8, got " + std::to_string(n_angular));
  }
  build_nodes();
  build_triangles();
  build_quadrature();
  build_stiffness();
}

int DiskMesh::node_index(int ring, int angular) const {
  if (ring == 0) return 0;
  const int a = ((angular % n_angular_) + n_angular_) % n_angular_;
  return 1 + (ring - 1) * n_angular_ + a;
}

int DiskMesh::ring_of(int node) const { return node == 0 ? 0 : 1 + (node - 1) / n_angular_; }

int DiskMesh::angular_of(int node) const { return node == 0 ? 0 : (node - 1) % n_angular_; }

void DiskMesh::build_nodes() {
  const std::size_t count = 1 + static_cast<std::size_t>(n_radial_) * n_angular_;
  nodes_.reserve(count);
  nodes_.push_back({0.0, 0.0});
  for (int ring = 1; ring <= n_radial_; ++ring) {
    const double r = static_cast<double>(ring) / n_radial_;
    for (int i = 0; i < n_angular_; ++i) {
      const double theta = kTwoPi * (i + ring_offset(ring)) / n_angular_;
      Point2 p{r * std::cos(theta), r * std::sin(theta)};
      if (ring == n_radial_) {
        const double len = std::hypot(p.x, p.y);
        p.x /= len;
        p.y /= len;
      }
      nodes_.push_back(p);
    }
  }
  boundary_index_.assign(count, -1);
  boundary_nodes_.reserve(static_cast<std::size_t>(n_angular_));
  for (int i = 0; i < n_angular_; ++i) {
    const int node = node_index(n_radial_, i);
    boundary_index_[static_cast<std::size_t>(node)] = i;
    boundary_nodes_.push_back(node);
  }
  for (int i = 0; i < n_angular_; ++i) {
    boundary_edges_.push_back({node_index(n_radial_, i), node_index(n_radial_, i + 1)});
  }
}

void DiskMesh::build_triangles() {
  triangles_.reserve(static_cast<std::size_t>(n_angular_) * (2 * n_radial_ - 1));
  for (int i = 0; i < n_angular_; ++i) {
    triangles_.push_back({0, node_index(1, i), node_index(1, i + 1)});
  }
  for (int ring = 1; ring < n_radial_; ++ring) {
    const bool outer_ahead = ring_offset(ring + 1) > ring_offset(ring);
    for (int i = 0; i < n_angular_; ++i) {
      const int in0 = node_index(ring, i);
      const int in1 = node_index(ring, i + 1);
      const int out0 = node_index(ring + 1, i);
      const int out1 = node_index(ring + 1, i + 1);
      if (outer_ahead) {
        // angular order: in0 < out0 < in1 < out1
        triangles_.push_back({in0, in1, out0});
        triangles_.push_back({out0, in1, out1});
      } else {
        // angular order: out0 < in0 < out1 < in1
        triangles_.push_back({in0, in1, out1});
        triangles_.push_back({out0, in0, out1});
      }
    }
  }
  for (auto& t : triangles_) {
    const auto& a = nodes_[static_cast<std::size_t>(t[0])];
    const auto& b = nodes_[static_cast<std::size_t>(t[1])];
    const auto& c = nodes_[static_cast<std::size_t>(t[2])];
    const double s = signed_area(a, b, c);
    if (s == 0.0) throw NumericError("degenerate triangle in disk mesh");
    if (s < 0.0) std::swap(t[1], t[2]);
  }
}

void DiskMesh::build_quadrature() {
  const std::size_t n = nodes_.size();
  quadrature_.area_weights = Vector::Zero(static_cast<Eigen::Index>(n));
  quadrature_.triangle_areas.reserve(triangles_.size());
  quadrature_.triangle_centroids.reserve(triangles_.size());
  area_ = 0.0;
  for (const auto& t : triangles_) {
    const auto& a = nodes_[static_cast<std::size_t>(t[0])];
    const auto& b = nodes_[static_cast<std::size_t>(t[1])];
    const auto& c = nodes_[static_cast<std::size_t>(t[2])];
    const double area = signed_area(a, b, c);
    quadrature_.triangle_areas.push_back(area);
    quadrature_.triangle_centroids.push_back({(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0});
    for (int v : t) quadrature_.area_weights[v] += area / 3.0;
    area_ += area;
  }

  // Boundary edges are arcs of the unit circle; each has length 2pi / n_angular.
  const double arc = kTwoPi / n_angular_;
  quadrature_.edge_lengths.assign(boundary_edges_.size(), arc);
  quadrature_.boundary_weights = Vector::Zero(static_cast<Eigen::Index>(boundary_nodes_.size()));
  boundary_length_ = 0.0;
  for (std::size_t e = 0; e < boundary_edges_.size(); ++e) {
    const double len = quadrature_.edge_lengths[e];
    quadrature_.boundary_weights[boundary_index_of(boundary_edges_[e][0])] += 0.5 * len;
    quadrature_.boundary_weights[boundary_index_of(boundary_edges_[e][1])] += 0.5 * len;
    boundary_length_ += len;
  }
  boundary_weights_nodes_ = scatter_boundary(quadrature_.boundary_weights);
}

void DiskMesh::build_stiffness() {
  const auto n = static_cast<Eigen::Index>(nodes_.size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(triangles_.size() * 9);
  stiffness_.barycentric_gradients.reserve(triangles_.size());
  for (std::size_t k = 0; k < triangles_.size(); ++k) {
    const auto& t = triangles_[k];
    const double area = quadrature_.triangle_areas[k];
    std::array<Eigen::Vector2d, 3> grads;
    for (int a = 0; a < 3; ++a) {
      // Gradient of the barycentric coordinate of vertex a: rotated opposite edge.
      const auto& p = nodes_[static_cast<std::size_t>(t[(a + 1) % 3])];
      const auto& q = nodes_[static_cast<std::size_t>(t[(a + 2) % 3])];
      grads[a] = Eigen::Vector2d(p.y - q.y, q.x - p.x) / (2.0 * area);
    }
    stiffness_.barycentric_gradients.push_back(grads);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        triplets.emplace_back(t[a], t[b], area * grads[a].dot(grads[b]));
      }
    }
  }
  stiffness_.matrix.resize(n, n);
  stiffness_.matrix.setFromTriplets(triplets.begin(), triplets.end());
  stiffness_.matrix.makeCompressed();
}

Vector DiskMesh::scatter_boundary(const Vector& boundary_values) const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(nodes_.size()));
  for (std::size_t i = 0; i < boundary_nodes_.size(); ++i) {
    out[boundary_nodes_[i]] = boundary_values[static_cast<Eigen::Index>(i)];
  }
  return out;
}

BoundaryTrace DiskMesh::trace(const ScalarField& field) const {
  require_valid(field, node_count(), "trace");
  Vector values(static_cast<Eigen::Index>(boundary_nodes_.size()));
  for (std::size_t i = 0; i < boundary_nodes_.size(); ++i) {
    values[static_cast<Eigen::Index>(i)] = field[static_cast<std::size_t>(boundary_nodes_[i])];
  }
  return BoundaryTrace(std::move(values));
}

DiskMesh build_mesh(int n_radial, int n_angular, int group_order) {
  if (group_order < 1) {
    throw ConfigError("group_order must be >= 1, got " + std::to_string(group_order));
  }
  if (n_angular % group_order != 0) {
    throw ConfigError("n_angular=" + std::to_string(n_angular) +
                      " is not divisible by group_order=" + std::to_string(group_order));
  }
  return DiskMesh(n_radial, n_angular);
}

double area_integral(const DiskMesh& mesh, const ScalarField& field) {
  require_valid(field, mesh.node_count(), "area_integral");
  return mesh.quadrature().area_weights.dot(field.values());
}

double boundary_integral(const DiskMesh& mesh, const BoundaryTrace& trace) {
  require_valid(trace, mesh.boundary_count(), "boundary_integral");
  return mesh.quadrature().boundary_weights.dot(trace.values());
}

namespace {

double element_energy(const DiskMesh& mesh, const Vector& u, std::size_t k) {
  const auto& t = mesh.triangles()[k];
  const auto& g = mesh.stiffness().barycentric_gradients[k];
  // Differences against vertex 0 make the element term exactly invariant
  // under constant shifts up to the rounding of the differences.
  const Eigen::Vector2d grad = (u[t[1]] - u[t[0]]) * g[1] + (u[t[2]] - u[t[0]]) * g[2];
  return mesh.quadrature().triangle_areas[k] * grad.squaredNorm();
}

}  // namespace

double dirichlet_energy(const DiskMesh& mesh, const ScalarField& field) {
  require_valid(field, mesh.node_count(), "dirichlet_energy");
  double sum = 0.0;
  for (std::size_t k = 0; k < mesh.triangles().size(); ++k) {
    sum += element_energy(mesh, field.values(), k);
  }
  return sum;
}

double dirichlet_energy(const DiskMesh& mesh, const ScalarField& field,
                        std::span<const char> triangle_mask) {
  require_valid(field, mesh.node_count(), "dirichlet_energy");
  if (triangle_mask.size() != mesh.triangles().size()) {
    throw PreconditionError("dirichlet_energy: triangle mask has wrong length");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < mesh.triangles().size(); ++k) {
    if (triangle_mask[k]) sum += element_energy(mesh, field.values(), k);
  }
  return sum;
}

double stiffness_form(const DiskMesh& mesh, const ScalarField& u, const ScalarField& v) {
  require_valid(u, mesh.node_count(), "stiffness_form");
  require_valid(v, mesh.node_count(), "stiffness_form");
  return u.values().dot(mesh.stiffness().matrix * v.values());
}

double area_mean(const DiskMesh& mesh, const ScalarField& field) {
  return area_integral(mesh, field) / mesh.area();
}

double boundary_mean(const DiskMesh& mesh, const BoundaryTrace& trace) {
  return boundary_integral(mesh, trace) / mesh.boundary_length();
}

ScalarField remove_area_mean(const DiskMesh& mesh, const ScalarField& field) {
  const double mean = area_mean(mesh, field);
  return ScalarField(field.values().array() - mean);
}

ScalarField solve_auxiliary_neumann(const DiskMesh& mesh) {
  const auto& w = mesh.quadrature().area_weights;
  // Weak form: int <grad w, grad v> = -(4pi/|D|) int v + (4pi/|S^1|) int_S1 v.
  // With the discrete |D| and |S^1| the right-hand side sums to zero exactly
  // in exact arithmetic, so pinning one node yields the compatible solution.
  const double interior_source = -2.0 * kTwoPi / mesh.area();
  const double boundary_flux = 2.0 * kTwoPi / mesh.boundary_length();
  Vector rhs = interior_source * w + boundary_flux * mesh.boundary_weights_on_nodes();

  SparseMatrix a = mesh.stiffness().matrix;
  const Eigen::Index pinned = 0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      if (it.row() == pinned || it.col() == pinned) {
        it.valueRef() = (it.row() == it.col()) ? 1.0 : 0.0;
      }
    }
  }
  rhs[pinned] = 0.0;

  Eigen::SimplicialLDLT<SparseMatrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw NumericError("solve_auxiliary_neumann: factorization failed");
  }
  Vector sol = solver.solve(rhs);
  if (solver.info() != Eigen::Success || !sol.allFinite()) {
    throw NumericError("solve_auxiliary_neumann: solve failed");
  }
  return remove_area_mean(mesh, ScalarField(std::move(sol)));
}

H1Riesz::H1Riesz(const DiskMesh& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.node_count());
  SparseMatrix mass(n, n);
  mass.reserve(Eigen::VectorXi::Constant(n, 1));
  for (Eigen::Index i = 0; i < n; ++i) mass.insert(i, i) = mesh.quadrature().area_weights[i];
  gram_ = mesh.stiffness().matrix + mass;
  factor_.compute(gram_);
  if (factor_.info() != Eigen::Success) {
    throw NumericError("H1Riesz: factorization of stiffness + mass failed");
  }
}

Vector H1Riesz::solve(const Vector& functional) const {
  Vector out = factor_.solve(functional);
  if (factor_.info() != Eigen::Success) throw NumericError("H1Riesz: solve failed");
  return out;
}

double H1Riesz::dual_norm(const Vector& functional) const {
  const double sq = functional.dot(solve(functional));
  return std::sqrt(std::max(sq, 0.0));
}

double H1Riesz::norm(const Vector& field) const {
  return std::sqrt(std::max(field.dot(gram_ * field), 0.0));
}

void write_nodes_csv(const DiskMesh& mesh, std::ostream& out) {
  out << "node_id,x,y,is_boundary\n";
  const auto nodes = mesh.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out << i << ',' << format_double(nodes[i].x) << ',' << format_double(nodes[i].y) << ','
        << (mesh.boundary_index_of(static_cast<int>(i)) >= 0 ? 1 : 0) << '\n';
  }
}

void write_triangles_csv(const DiskMesh& mesh, std::ostream& out) {
  out << "t_id,n0,n1,n2\n";
  const auto tris = mesh.triangles();
  for (std::size_t k = 0; k < tris.size(); ++k) {
    out << k << ',' << tris[k][0] << ',' << tris[k][1] << ',' << tris[k][2] << '\n';
  }
}

}  // namespace diskcurv
