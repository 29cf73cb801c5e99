#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "diskcurv/curvature.hpp"
#include "diskcurv/solver.hpp"

namespace diskcurv {

// ---------------------------------------------------------------------------
// Exact-solution verification

struct ExactCheck {
  bool converged = false;
  double field_error = 0.0;   // max nodal |u_solution - u_exact|
  double mass_error = 0.0;    // |int K e^u| or |int h e^{u/2}| minus 2pi
  double weak_residual = 0.0; // max of the interior and boundary parts
  int iterations = 0;
  bool passed = false;
};

struct VerificationReport {
  ExactCheck geodesic;  // K = 0, h = 1: u = 0
  ExactCheck gaussian;  // K = 1, h = 0: u = 2 log(2 / (1 + |x|^2))
};

// Tolerances: geodesic |u|_inf <= 1e-3 and weak residual <= 1e-6; gaussian
// field error <= 5e-3 and mass error <= 1e-3.
VerificationReport verify_exact_solutions(const DiskMesh& mesh, const SolveConfig& config);

double exact_bubble(double x, double y);

// ---------------------------------------------------------------------------
// Refinement

enum class RefinementTarget { joint, limit_zero, limit_two_pi };
std::string to_string(RefinementTarget target);
RefinementTarget parse_refinement_target(const std::string& name);

struct RefinementProblem {
  RefinementTarget target = RefinementTarget::joint;
  CurvatureSpec k = CurvatureSpec::constant(1.0);
  CurvatureSpec h = CurvatureSpec::constant(1.0);
  GroupKind group_kind = GroupKind::cyclic;
  int group_k = 2;
  // Exact rho; when absent the finest level is the reference.
  std::optional<double> exact_rho;
  // Exact u_solution; when absent no field error is reported.
  std::function<double(double, double)> exact_field;
};

struct MeshLevel {
  int n_radial = 0;
  int n_angular = 0;
};

struct RefinementLevel {
  MeshLevel mesh;
  bool converged = false;
  std::string message;
  double rho = 0.0;
  double rho_error = 0.0;
  double field_error = 0.0;
  double gauss_bonnet = 0.0;
  double weak_interior = 0.0;
  double weak_boundary = 0.0;
  int iterations = 0;
};

struct RefinementTable {
  std::vector<RefinementLevel> levels;
  double reference_rho = 0.0;
  bool reference_is_exact = false;
  // order[i] compares levels i and i+1; NaN where an error is zero or missing.
  std::vector<double> rho_order;
  std::vector<double> field_order;
  bool complete = false;  // every level converged
};

// Needs at least 3 levels with strictly increasing n_radial and n_angular.
// A level that fails keeps its row with converged = false and the message.
RefinementTable refinement_study(const RefinementProblem& problem,
                                 const std::vector<MeshLevel>& ladder, const SolveConfig& base);

std::vector<MeshLevel> doubling_ladder(MeshLevel coarsest, int levels);

void write_refinement_csv(const RefinementTable& table, std::ostream& out);

// ---------------------------------------------------------------------------
// Perturbation sweep

struct SweepEntry {
  double epsilon = 0.0;
  // int K e^{u0} > 0 at the rho = 0 minimizer and int h e^{u2pi/2} > 0 at the
  // rho = 2pi minimizer.
  bool hypothesis = false;
  bool converged = false;
  bool retained = false;  // converged and Gauss-Bonnet consistent
  double rho = 0.0;
  double gauss_bonnet = 0.0;
  double weak_residual = 0.0;
  double rho_constraint = 0.0;
  std::string status;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  double max_feasible_epsilon = 0.0;
  // Every epsilon below a retained one is retained too.
  bool monotone = true;
};

struct SweepOptions {
  double gauss_bonnet_tolerance = 1e-4;
};

std::vector<double> default_epsilon_grid();
CurvatureSpec default_bump();

// Solves with K = K0 - eps * bump_k and h = h0 - eps * bump_h for each eps.
// K0 and h0 must be nonnegative, symmetric and not identically zero.
SweepResult perturbation_sweep(const DiskMesh& mesh, const ScalarField& k0,
                               const BoundaryTrace& h0, const ScalarField& bump_k,
                               const BoundaryTrace& bump_h, const std::vector<double>& epsilons,
                               const SolveConfig& config, const SweepOptions& options = {});

void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

// ---------------------------------------------------------------------------
// Coercivity probe

struct CoercivityFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  std::vector<double> t_used;
  std::vector<double> energy;
  std::vector<double> t_dropped;  // grid points outside the admissible set
  double rms_misfit = 0.0;
};

std::vector<double> default_probe_grid();

// Fits I_rho(t v) ~ a t^2 - b t + c where v is the direction with its disk
// mean removed and scaled to unit H^1 norm. If `group` is nonempty the
// direction must be invariant under it.
CoercivityFit coercivity_probe(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                               double rho, const ScalarField& direction,
                               const std::vector<double>& t_grid, const SymmetryGroup& group);

// Symmetric test directions: projected random smooth fields, x^2 - y^2, r^2
// and a merged pair of interior bubbles.
std::vector<ScalarField> symmetric_probe_directions(const DiskMesh& mesh,
                                                    const SymmetryGroup& group,
                                                    std::uint64_t seed, int random_count);

}  // namespace diskcurv
