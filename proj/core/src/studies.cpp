#include "diskcurv/studies.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "diskcurv/csv.hpp"
#include "diskcurv/diagnostics.hpp"
#include "diskcurv/errors.hpp"
#include "diskcurv/inequality.hpp"
#include "diskcurv/parallel.hpp"

namespace diskcurv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SolveConfig config_for(const SolveConfig& base, const DiskMesh& mesh, GroupKind kind, int k) {
  SolveConfig config = base;
  config.group = SymmetryGroup::make(mesh, kind, k);
  return config;
}

double max_abs_difference(const DiskMesh& mesh, const ScalarField& u,
                          const std::function<double(double, double)>& exact) {
  double worst = 0.0;
  const auto nodes = mesh.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    worst = std::max(worst, std::abs(u[i] - exact(nodes[i].x, nodes[i].y)));
  }
  return worst;
}

double order_between(double coarse, double fine, double ratio) {
  if (!(coarse > 0.0 && fine > 0.0) || !std::isfinite(coarse) || !std::isfinite(fine)) {
    return kNaN;
  }
  return std::log(coarse / fine) / std::log(ratio);
}

}  // namespace

double exact_bubble(double x, double y) { return 2.0 * std::log(2.0 / (1.0 + x * x + y * y)); }

VerificationReport verify_exact_solutions(const DiskMesh& mesh, const SolveConfig& config) {
  VerificationReport report;
  const ScalarField one = ScalarField::constant(mesh.node_count(), 1.0);
  const BoundaryTrace one_b = BoundaryTrace::constant(mesh.boundary_count(), 1.0);

  {
    const SolveResult r = solve_limit_0(mesh, one_b, config);
    ExactCheck& c = report.geodesic;
    c.converged = r.converged;
    c.iterations = r.iterations;
    c.field_error = r.u_solution.values().cwiseAbs().maxCoeff();
    const BoundaryTrace tr = mesh.trace(r.u_solution);
    c.mass_error = std::abs(boundary_integral(mesh, BoundaryTrace(
                                                        (0.5 * tr.values()).array().exp())) -
                            kTwoPi);
    c.weak_residual =
        std::max(r.diagnostics.weak_residual_interior, r.diagnostics.weak_residual_boundary);
    c.passed = c.converged && c.field_error <= 1e-3 && c.weak_residual <= 1e-6;
  }
  {
    const SolveResult r = solve_limit_2pi(mesh, one, config);
    ExactCheck& c = report.gaussian;
    c.converged = r.converged;
    c.iterations = r.iterations;
    c.field_error = max_abs_difference(mesh, r.u_solution, exact_bubble);
    c.mass_error =
        std::abs(area_integral(mesh, ScalarField(r.u_solution.values().array().exp())) - kTwoPi);
    c.weak_residual =
        std::max(r.diagnostics.weak_residual_interior, r.diagnostics.weak_residual_boundary);
    c.passed = c.converged && c.field_error <= 5e-3 && c.mass_error <= 1e-3;
  }
  return report;
}

std::string to_string(RefinementTarget target) {
  switch (target) {
    case RefinementTarget::joint:
      return "joint";
    case RefinementTarget::limit_zero:
      return "limit-0";
    case RefinementTarget::limit_two_pi:
      return "limit-2pi";
  }
  return "unknown";
}

RefinementTarget parse_refinement_target(const std::string& name) {
  if (name == "joint") return RefinementTarget::joint;
  if (name == "limit-0") return RefinementTarget::limit_zero;
  if (name == "limit-2pi") return RefinementTarget::limit_two_pi;
  throw ConfigError("unknown refinement target '" + name +
                    "' (expected joint, limit-0 or limit-2pi)");
}

std::vector<MeshLevel> doubling_ladder(MeshLevel coarsest, int levels) {
  std::vector<MeshLevel> ladder;
  for (int i = 0; i < levels; ++i) {
    ladder.push_back(coarsest);
    coarsest.n_radial *= 2;
    coarsest.n_angular *= 2;
  }
  return ladder;
}

RefinementTable refinement_study(const RefinementProblem& problem,
                                 const std::vector<MeshLevel>& ladder, const SolveConfig& base) {
  if (ladder.size() < 3) {
    throw PreconditionError("refinement_study needs at least 3 mesh levels, got " +
                            std::to_string(ladder.size()));
  }
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i].n_radial <= ladder[i - 1].n_radial ||
        ladder[i].n_angular <= ladder[i - 1].n_angular) {
      throw PreconditionError("refinement ladder must increase strictly in both resolutions");
    }
  }

  RefinementTable table;
  table.levels.resize(ladder.size());

  parallel_for(ladder.size(), [&](std::size_t i) {
    RefinementLevel& level = table.levels[i];
    level.mesh = ladder[i];
    try {
      const DiskMesh mesh(ladder[i].n_radial, ladder[i].n_angular);
      const SolveConfig config = config_for(base, mesh, problem.group_kind, problem.group_k);
      const auto [k, h] = sample_curvatures(problem.k, problem.h, mesh);
      SolveResult r;
      switch (problem.target) {
        case RefinementTarget::joint:
          r = minimize_joint(mesh, k, h, config);
          break;
        case RefinementTarget::limit_zero:
          r = solve_limit_0(mesh, h, config);
          r.rho_min = 0.0;
          break;
        case RefinementTarget::limit_two_pi:
          r = solve_limit_2pi(mesh, k, config);
          r.rho_min = kTwoPi;
          break;
      }
      level.converged = r.converged;
      level.message = r.message;
      level.rho = r.rho_min;
      level.iterations = r.iterations;
      level.gauss_bonnet = r.diagnostics.gauss_bonnet_residual;
      level.weak_interior = r.diagnostics.weak_residual_interior;
      level.weak_boundary = r.diagnostics.weak_residual_boundary;
      level.field_error =
          problem.exact_field ? max_abs_difference(mesh, r.u_solution, problem.exact_field) : kNaN;
    } catch (const Error& e) {
      level.converged = false;
      level.message = e.what();
      level.rho = kNaN;
      level.field_error = kNaN;
    }
  });

  table.complete = std::all_of(table.levels.begin(), table.levels.end(),
                               [](const RefinementLevel& l) { return l.converged; });
  table.reference_is_exact = problem.exact_rho.has_value();
  table.reference_rho = problem.exact_rho.value_or(table.levels.back().rho);
  for (auto& level : table.levels) {
    level.rho_error = std::abs(level.rho - table.reference_rho);
  }
  for (std::size_t i = 0; i + 1 < table.levels.size(); ++i) {
    const double ratio = static_cast<double>(ladder[i + 1].n_radial) / ladder[i].n_radial;
    const auto& a = table.levels[i];
    const auto& b = table.levels[i + 1];
    const bool ok = a.converged && b.converged;
    table.rho_order.push_back(ok ? order_between(a.rho_error, b.rho_error, ratio) : kNaN);
    table.field_order.push_back(ok ? order_between(a.field_error, b.field_error, ratio) : kNaN);
  }
  return table;
}

void write_refinement_csv(const RefinementTable& table, std::ostream& out) {
  out << "n_radial,n_angular,converged,rho,rho_error,rho_order,field_error,field_order,"
         "gb_residual,weak_residual_interior,weak_residual_boundary,iterations\n";
  for (std::size_t i = 0; i < table.levels.size(); ++i) {
    const auto& l = table.levels[i];
    const double ro = i == 0 ? kNaN : table.rho_order[i - 1];
    const double fo = i == 0 ? kNaN : table.field_order[i - 1];
    out << l.mesh.n_radial << ',' << l.mesh.n_angular << ',' << (l.converged ? 1 : 0) << ','
        << format_double(l.rho) << ',' << format_double(l.rho_error) << ',' << format_double(ro)
        << ',' << format_double(l.field_error) << ',' << format_double(fo) << ','
        << format_double(l.gauss_bonnet) << ',' << format_double(l.weak_interior) << ','
        << format_double(l.weak_boundary) << ',' << l.iterations << '\n';
  }
}

std::vector<double> default_epsilon_grid() {
  return {0.0, 0.025, 0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5};
}

CurvatureSpec default_bump() { return CurvatureSpec::angular_mode(1.0, 1.0, 2); }

SweepResult perturbation_sweep(const DiskMesh& mesh, const ScalarField& k0,
                               const BoundaryTrace& h0, const ScalarField& bump_k,
                               const BoundaryTrace& bump_h, const std::vector<double>& epsilons,
                               const SolveConfig& config, const SweepOptions& options) {
  require_valid(k0, mesh.node_count(), "K0");
  require_valid(h0, mesh.boundary_count(), "h0");
  require_valid(bump_k, mesh.node_count(), "bump for K");
  require_valid(bump_h, mesh.boundary_count(), "bump for h");
  if (k0.values().minCoeff() < 0.0 || h0.values().minCoeff() < 0.0) {
    throw ConfigError("perturbation sweep needs K0 >= 0 and h0 >= 0");
  }
  if (k0.values().maxCoeff() <= 0.0 || h0.values().maxCoeff() <= 0.0) {
    throw ConfigError("perturbation sweep needs K0 and h0 not identically zero");
  }
  if (config.group.empty() || config.group.node_count() != mesh.node_count()) {
    throw ConfigError("perturbation sweep needs a symmetry group built for this mesh");
  }
  const double tol = config.curvature_symmetry_tolerance;
  if (symmetry_residual(k0, config.group) > tol || symmetry_residual(h0, config.group) > tol) {
    throw ConfigError("K0 and h0 must be invariant under " + config.group.describe());
  }
  if (symmetry_residual(bump_k, config.group) > tol ||
      symmetry_residual(bump_h, config.group) > tol) {
    throw ConfigError("perturbation bump must be invariant under " + config.group.describe());
  }
  if (epsilons.empty()) throw ConfigError("epsilon grid is empty");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] >= 0.0) || (i > 0 && !(epsilons[i] > epsilons[i - 1]))) {
      throw ConfigError("epsilon grid must be nonnegative and strictly increasing");
    }
  }

  SweepResult sweep;
  sweep.entries.resize(epsilons.size());
  parallel_for(epsilons.size(), [&](std::size_t i) {
    SweepEntry& e = sweep.entries[i];
    e.epsilon = epsilons[i];
    const ScalarField k(k0.values() - e.epsilon * bump_k.values());
    const BoundaryTrace h(h0.values() - e.epsilon * bump_h.values());
    try {
      const SolveResult lim0 = solve_limit_0(mesh, h, config);
      const SolveResult lim2 = solve_limit_2pi(mesh, k, config);
      const EnergyFunctional functional(mesh, k, h);
      LogMass m;
      const bool area_ok = try_log_mass(functional.area_coefficients(), lim0.u_min.values(), m);
      const bool boundary_ok =
          try_log_mass(functional.boundary_coefficients(), 0.5 * lim2.u_min.values(), m);
      e.hypothesis = area_ok && boundary_ok;
    } catch (const Error&) {
      e.hypothesis = false;
    }
    try {
      const SolveResult r = minimize_joint(mesh, k, h, config);
      e.converged = r.converged;
      e.rho = r.rho_min;
      e.gauss_bonnet = r.diagnostics.gauss_bonnet_residual;
      e.weak_residual =
          std::max(r.diagnostics.weak_residual_interior, r.diagnostics.weak_residual_boundary);
      e.rho_constraint = r.diagnostics.rho_constraint_residual;
      e.retained = e.converged && e.gauss_bonnet <= options.gauss_bonnet_tolerance;
      e.status = e.retained ? "ok" : (r.converged ? "gauss-bonnet" : to_string(r.regime));
      if (!r.converged && !r.message.empty()) e.status += ": " + r.message;
    } catch (const InfeasibleProblemError& err) {
      e.status = std::string("infeasible: ") + err.what();
      e.rho = kNaN;
    } catch (const Error& err) {
      e.status = std::string("failed: ") + err.what();
      e.rho = kNaN;
    }
  });

  bool seen_gap = false;
  for (const auto& e : sweep.entries) {
    if (e.retained) {
      sweep.max_feasible_epsilon = e.epsilon;
      if (seen_gap) sweep.monotone = false;
    } else {
      seen_gap = true;
    }
  }
  return sweep;
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
  out << "epsilon,converged,rho,gb_residual,weak_residual\n";
  for (const auto& e : sweep.entries) {
    out << format_double(e.epsilon) << ',' << (e.converged ? 1 : 0) << ',' << format_double(e.rho)
        << ',' << format_double(e.gauss_bonnet) << ',' << format_double(e.weak_residual) << '\n';
  }
}

std::vector<double> default_probe_grid() {
  std::vector<double> t;
  for (int i = 0; i <= 16; ++i) t.push_back(0.25 * i);
  return t;
}

CoercivityFit coercivity_probe(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                               double rho, const ScalarField& direction,
                               const std::vector<double>& t_grid, const SymmetryGroup& group) {
  require_valid(direction, mesh.node_count(), "probe direction");
  if (!(rho >= 0.0 && rho <= kTwoPi)) throw DomainError("rho must lie in [0, 2pi]");
  if (!group.empty()) {
    const double scale = direction.values().cwiseAbs().maxCoeff();
    if (symmetry_residual(direction, group) > 1e-10 * (1.0 + scale)) {
      throw PreconditionError("probe direction is not invariant under " + group.describe());
    }
  }
  ScalarField v = remove_area_mean(mesh, direction);
  const H1Riesz riesz(mesh);
  const double norm = riesz.norm(v.values());
  if (!(norm > 1e-12)) {
    throw PreconditionError("probe direction is constant: zero norm after removing its mean");
  }
  v.values() /= norm;

  CoercivityFit fit;
  const EnergyFunctional functional(mesh, k, h);
  for (double t : t_grid) {
    EnergyPoint p;
    if (functional.try_evaluate(t * v.values(), rho, p)) {
      fit.t_used.push_back(t);
      fit.energy.push_back(functional.breakdown(p).total);
    } else {
      fit.t_dropped.push_back(t);
    }
  }
  if (fit.t_used.size() < 3) {
    throw PreconditionError("coercivity probe needs at least 3 admissible grid points, got " +
                            std::to_string(fit.t_used.size()));
  }
  const auto n = static_cast<Eigen::Index>(fit.t_used.size());
  Eigen::MatrixXd design(n, 3);
  Vector rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = fit.t_used[static_cast<std::size_t>(i)];
    design(i, 0) = t * t;
    design(i, 1) = -t;
    design(i, 2) = 1.0;
    rhs[i] = fit.energy[static_cast<std::size_t>(i)];
  }
  const Vector coef = design.colPivHouseholderQr().solve(rhs);
  fit.a = coef[0];
  fit.b = coef[1];
  fit.c = coef[2];
  fit.rms_misfit = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(n));
  return fit;
}

std::vector<ScalarField> symmetric_probe_directions(const DiskMesh& mesh,
                                                    const SymmetryGroup& group,
                                                    std::uint64_t seed, int random_count) {
  std::vector<ScalarField> raw;
  for (int i = 0; i < random_count; ++i) {
    raw.push_back(random_smooth_field(mesh, seed + static_cast<std::uint64_t>(i)));
  }
  const auto nodes = mesh.nodes();
  Vector saddle(static_cast<Eigen::Index>(nodes.size()));
  Vector radial(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& p = nodes[i];
    saddle[static_cast<Eigen::Index>(i)] = p.x * p.x - p.y * p.y;
    radial[static_cast<Eigen::Index>(i)] = p.x * p.x + p.y * p.y;
  }
  raw.emplace_back(saddle);
  raw.emplace_back(radial);
  raw.push_back(merge_bubbles(interior_bubble(mesh, 4.0, {0.4, 0.0}),
                              interior_bubble(mesh, 4.0, {-0.4, 0.0})));

  const H1Riesz riesz(mesh);
  std::vector<ScalarField> out;
  for (const auto& f : raw) {
    ScalarField s = remove_area_mean(mesh, symmetrize(f, group));
    if (riesz.norm(s.values()) > 1e-8) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace diskcurv
