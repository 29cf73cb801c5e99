#include "diskcurv/diagnostics.hpp"

#include <cmath>

#include "diskcurv/errors.hpp"

namespace diskcurv {

double gauss_bonnet_residual(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                             const ScalarField& u) {
  require_valid(k, mesh.node_count(), "K");
  require_valid(h, mesh.boundary_count(), "h");
  require_valid(u, mesh.node_count(), "u");
  const Vector& w = mesh.quadrature().area_weights;
  const Vector& b = mesh.quadrature().boundary_weights;
  const Vector tr = mesh.trace(u).values();
  const double area = (w.array() * k.values().array() * u.values().array().exp()).sum();
  const double boundary = (b.array() * h.values().array() * (0.5 * tr.array()).exp()).sum();
  return std::abs(area + boundary - kTwoPi);
}

Vector weak_residual_vector(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                            const ScalarField& u) {
  require_valid(k, mesh.node_count(), "K");
  require_valid(h, mesh.boundary_count(), "h");
  require_valid(u, mesh.node_count(), "u");
  const Vector& w = mesh.quadrature().area_weights;
  const Vector& b_nodes = mesh.boundary_weights_on_nodes();
  const Vector h_nodes = mesh.scatter_boundary(h.values());
  Vector r = mesh.stiffness().matrix * u.values();
  r.array() -= 2.0 * w.array() * k.values().array() * u.values().array().exp();
  r.array() += 2.0 * b_nodes.array() * (1.0 - h_nodes.array() * (0.5 * u.values().array()).exp());
  return r;
}

WeakResidual weak_residual(const DiskMesh& mesh, const H1Riesz& riesz, const ScalarField& k,
                           const BoundaryTrace& h, const ScalarField& u) {
  const Vector r = weak_residual_vector(mesh, k, h, u);
  Vector interior = r;
  Vector boundary = Vector::Zero(r.size());
  for (int node : mesh.boundary_nodes()) {
    boundary[node] = r[node];
    interior[node] = 0.0;
  }
  return {riesz.dual_norm(interior), riesz.dual_norm(boundary)};
}

WeakResidual weak_residual(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                           const ScalarField& u) {
  const H1Riesz riesz(mesh);
  return weak_residual(mesh, riesz, k, h, u);
}

double rho_constraint_residual(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                               const ScalarField& u, double rho) {
  if (!(rho > 0.0 && rho < kTwoPi)) return 0.0;
  const double la = log_area_integral(mesh, k, u);
  const double lb = log_boundary_integral(mesh, h, u);
  const double q = kTwoPi - rho;
  // log of (q^2 / rho) / (B^2 / A); expm1 keeps small defects accurate.
  const double log_ratio = 2.0 * std::log(q) - std::log(rho) - (2.0 * lb - la);
  return std::abs(std::expm1(log_ratio));
}

DiagnosticsReport diagnose(const DiskMesh& mesh, const H1Riesz& riesz, const ScalarField& k,
                           const BoundaryTrace& h, const ScalarField& u_min,
                           const ScalarField& u_solution, double rho, const SymmetryGroup& group) {
  DiagnosticsReport report;
  report.gauss_bonnet_residual = gauss_bonnet_residual(mesh, k, h, u_solution);
  const WeakResidual weak = weak_residual(mesh, riesz, k, h, u_solution);
  report.weak_residual_interior = weak.interior;
  report.weak_residual_boundary = weak.boundary;
  report.rho_constraint_residual = rho_constraint_residual(mesh, k, h, u_min, rho);
  report.symmetry_residual = symmetry_residual(u_min, group);
  const EnergyFunctional functional(mesh, k, h);
  report.energy = functional.breakdown(functional.evaluate(u_min.values(), rho));
  return report;
}

}  // namespace diskcurv
