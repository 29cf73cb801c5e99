#pragma once

#include "diskcurv/energy.hpp"
#include "diskcurv/field.hpp"
#include "diskcurv/mesh.hpp"
#include "diskcurv/symmetry.hpp"

namespace diskcurv {

struct DiagnosticsReport {
  double gauss_bonnet_residual = 0.0;
  double weak_residual_interior = 0.0;
  double weak_residual_boundary = 0.0;
  double rho_constraint_residual = 0.0;
  double symmetry_residual = 0.0;
  EnergyBreakdown energy;
};

// |int K e^u + int h e^{u/2} - 2pi|
double gauss_bonnet_residual(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                             const ScalarField& u);

// Residual functional of the weak form tested against every hat function,
//   r_i = int <grad u, grad phi_i> - 2 int K e^u phi_i + 2 int_{S^1} phi_i
//         - 2 int_{S^1} h e^{u/2} phi_i,
// split into interior and boundary test functions and measured in the dual
// of the discrete H^1 norm.
struct WeakResidual {
  double interior = 0.0;
  double boundary = 0.0;
};
Vector weak_residual_vector(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                            const ScalarField& u);
WeakResidual weak_residual(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                           const ScalarField& u);
WeakResidual weak_residual(const DiskMesh& mesh, const H1Riesz& riesz, const ScalarField& k,
                           const BoundaryTrace& h, const ScalarField& u);

// Relative defect of (2pi - rho)^2 / rho = (int h e^{u/2})^2 / int K e^u.
// Zero for rho at an endpoint, where the identity does not apply.
double rho_constraint_residual(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                               const ScalarField& u, double rho);

// Full report for a minimizer (u_min, rho) and its normalized solution.
DiagnosticsReport diagnose(const DiskMesh& mesh, const H1Riesz& riesz, const ScalarField& k,
                           const BoundaryTrace& h, const ScalarField& u_min,
                           const ScalarField& u_solution, double rho, const SymmetryGroup& group);

}  // namespace diskcurv
