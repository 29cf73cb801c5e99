#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diskcurv/diagnostics.hpp"
#include "diskcurv/energy.hpp"
#include "diskcurv/field.hpp"
#include "diskcurv/mesh.hpp"
#include "diskcurv/symmetry.hpp"

namespace diskcurv {

enum class RhoStrategy { joint, outer_scan };
std::string to_string(RhoStrategy strategy);
RhoStrategy parse_rho_strategy(const std::string& name);

struct LineSearchConfig {
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 60;
};

struct SolveConfig {
  SymmetryGroup group;
  int max_iterations = 3000;
  // Bound on the H^1-dual norm of the u-gradient and on |dI/drho|.
  double gradient_tolerance = 1e-9;
  RhoStrategy rho_strategy = RhoStrategy::joint;
  LineSearchConfig line_search;
  double initial_rho = kPi;
  int lbfgs_memory = 12;
  // outer-scan: number of rho grid points and block-coordinate rounds.
  int scan_points = 7;
  int scan_rounds = 200;
  // Joint solve stops and reports collapse once sigma(s) leaves
  // [collapse_threshold, 1 - collapse_threshold].
  double collapse_threshold = 1e-9;
  // |C1 - C2| allowed by normalize_solution.
  double normalization_tolerance = 1e-6;
  // Required symmetry of the input curvatures.
  double curvature_symmetry_tolerance = 1e-10;
};

enum class Side { zero, two_pi };
std::string to_string(Side side);

struct EndpointReport {
  Side side = Side::zero;
  bool hypothesis_holds = false;
  std::string message;
  std::vector<double> rho;
  std::vector<double> difference;  // I(u0, rho) - I(u0, side)
  std::vector<double> main_term;   // 2 rho log rho, or 4 t log t with t = 2pi - rho
  // Difference negative at the grid point closest to the endpoint.
  bool excluded = false;
};

enum class Regime { interior, collapsed_zero, collapsed_two_pi, limit_zero, limit_two_pi };
std::string to_string(Regime regime);

struct SolveResult {
  ScalarField u_min;       // zero disk mean
  double rho_min = 0.0;
  ScalarField u_solution;  // u_min plus the normalization constant
  double normalization_constant = 0.0;
  double normalization_gap = 0.0;  // |C1 - C2| for interior solves
  EnergyBreakdown energy;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;  // H^1-dual norm of the u-gradient
  double rho_gradient = 0.0;   // dI/drho (0 for limit solves)
  std::vector<double> energy_history;
  Regime regime = Regime::interior;
  std::optional<EndpointReport> endpoint;
  DiagnosticsReport diagnostics;
  std::string message;
};

// Plateau field with value a on an interior patch where K > 0 and b on a
// boundary collar where h > 0 (both unions of group orbits), with b then a
// doubled until int h e^{u/2} > 0 and int K e^u > 0. Pass need_area or
// need_boundary = false to skip one of the two conditions.
ScalarField feasible_initializer(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                                 const SymmetryGroup& group, bool need_area = true,
                                 bool need_boundary = true);

// Minimizes I(., rho) for fixed rho in [0, 2pi] on the symmetric, zero-mean
// subspace. rho = 0 and rho = 2pi give I_0 and I_2pi.
SolveResult minimize_fixed_rho(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                               double rho, const ScalarField& init, const SolveConfig& config);

// Minimizes I over (u, rho) with rho = 2pi sigma(s), or by the outer scan.
SolveResult minimize_joint(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                           const SolveConfig& config);

// Minimizes I_0 (K absent) and normalizes to int h e^{u/2} = 2pi.
SolveResult solve_limit_0(const DiskMesh& mesh, const BoundaryTrace& h, const SolveConfig& config);
// Minimizes I_2pi (h absent) and normalizes to int K e^u = 2pi.
SolveResult solve_limit_2pi(const DiskMesh& mesh, const ScalarField& k, const SolveConfig& config);

struct Normalization {
  double constant = 0.0;        // log rho - log int K e^u
  double boundary_constant = 0.0;  // 2 (log(2pi - rho) - log int h e^{u/2})
  double area_mass = 0.0;       // int K e^{u + C}
  double boundary_mass = 0.0;   // int h e^{(u + C)/2}
};
Normalization normalization_constants(const DiskMesh& mesh, const ScalarField& k,
                                      const BoundaryTrace& h, const ScalarField& u_min,
                                      double rho);
// u_min + C with int K e^{u+C} = rho and int h e^{(u+C)/2} = 2pi - rho.
// Throws InconsistentMinimizerError if the two candidate constants differ by
// more than `tolerance`.
ScalarField normalize_solution(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                               const ScalarField& u_min, double rho, double tolerance = 1e-6);

// Evaluates I(u0, rho) - I(u0, side) on rho = side -/+ 10^-1 ... 10^-8.
EndpointReport endpoint_exclusion_check(const DiskMesh& mesh, const ScalarField& k,
                                        const BoundaryTrace& h, const ScalarField& u0, Side side);
EndpointReport endpoint_exclusion_check(const DiskMesh& mesh, const ScalarField& k,
                                        const BoundaryTrace& h, const ScalarField& u0, Side side,
                                        const std::vector<double>& distances);

}  // namespace diskcurv
