#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "diskcurv/csv.hpp"
#include "diskcurv/diagnostics.hpp"
#include "diskcurv/errors.hpp"
#include "diskcurv/inequality.hpp"
#include "diskcurv/mesh.hpp"
#include "diskcurv/parallel.hpp"
#include "diskcurv/solver.hpp"
#include "diskcurv/studies.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace diskcurv;
using app::RunConfig;
using Json = nlohmann::ordered_json;

namespace {

enum Exit : int { ok = 0, failure = 1, collapse = 2, infeasible = 3, violation = 4 };

struct Problem {
  DiskMesh mesh;
  SymmetryGroup group;
  ScalarField k;
  BoundaryTrace h;
};

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw Error("cannot write " + (dir / name).string());
  return out;
}

void write_json(const fs::path& dir, const std::string& name, const Json& j) {
  auto out = open_output(dir, name);
  out << j.dump(2) << '\n';
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

ScalarField load_disk(const app::CurvatureSource& src, const DiskMesh& mesh) {
  if (src.file.empty()) return sample_disk(src.spec, mesh);
  std::ifstream in(src.file);
  if (!in) throw ConfigError("cannot open curvature table " + src.file.string());
  return read_disk_table(in, mesh.node_count(), src.file.string());
}

BoundaryTrace load_circle(const app::CurvatureSource& src, const DiskMesh& mesh) {
  if (src.file.empty()) return sample_circle(src.spec, mesh);
  std::ifstream in(src.file);
  if (!in) throw ConfigError("cannot open curvature table " + src.file.string());
  return read_circle_table(in, mesh.boundary_count(), src.file.string());
}

void require_symmetric_spec(const app::CurvatureSource& src, const SymmetryGroup& group,
                            const DiskMesh& mesh, bool boundary, const char* name) {
  if (!src.file.empty()) return;
  if (!spec_is_symmetric(src.spec, group, mesh, boundary)) {
    throw ConfigError(std::string(name) + " (" + to_string(src.spec.kind) +
                      ") is not invariant under the symmetry group " + group.describe());
  }
}

Problem build_problem(const RunConfig& c) {
  app::validate(c);
  DiskMesh mesh(c.n_radial, c.n_angular);
  SymmetryGroup group = SymmetryGroup::make(mesh, c.group_kind, c.group_k);
  if (!validate_fixed_point_free(group, mesh)) {
    throw ConfigError("symmetry group " + group.describe() +
                      " leaves a boundary point fixed; the solver needs a group acting "
                      "without fixed points on the circle");
  }
  require_symmetric_spec(c.k, group, mesh, false, "K");
  require_symmetric_spec(c.h, group, mesh, true, "h");
  ScalarField k = load_disk(c.k, mesh);
  BoundaryTrace h = load_circle(c.h, mesh);
  return {std::move(mesh), std::move(group), std::move(k), std::move(h)};
}

Json energy_json(const EnergyBreakdown& e) {
  return Json{{"dirichlet", number(e.dirichlet)},         {"area_log", number(e.area_log)},
              {"boundary_linear", number(e.boundary_linear)}, {"boundary_log", number(e.boundary_log)},
              {"f_rho", number(e.f_rho)},                 {"total", number(e.total)}};
}

Json endpoint_json(const EndpointReport& e) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < e.rho.size(); ++i) {
    rows.push_back({{"rho", number(e.rho[i])},
                    {"difference", number(e.difference[i])},
                    {"main_term", number(e.main_term[i])}});
  }
  return Json{{"side", to_string(e.side)},
              {"hypothesis_holds", e.hypothesis_holds},
              {"excluded", e.excluded},
              {"message", e.message},
              {"grid", rows}};
}

Json report_json(const SolveResult& r, const Problem& p) {
  const auto& d = r.diagnostics;
  Json j{{"gauss_bonnet_residual", number(d.gauss_bonnet_residual)},
         {"weak_residual_interior", number(d.weak_residual_interior)},
         {"weak_residual_boundary", number(d.weak_residual_boundary)},
         {"rho_constraint_residual", number(d.rho_constraint_residual)},
         {"symmetry_residual", number(d.symmetry_residual)},
         {"rho", number(r.rho_min)},
         {"energy", energy_json(r.energy)},
         {"converged", r.converged},
         {"iterations", r.iterations},
         {"regime", to_string(r.regime)},
         {"gradient_norm", number(r.gradient_norm)},
         {"rho_gradient", number(r.rho_gradient)},
         {"normalization_constant", number(r.normalization_constant)},
         {"normalization_gap", number(r.normalization_gap)},
         {"message", r.message},
         {"mesh", {{"n_radial", p.mesh.n_radial()},
                   {"n_angular", p.mesh.n_angular()},
                   {"nodes", p.mesh.node_count()},
                   {"boundary_nodes", p.mesh.boundary_count()}}},
         {"group", p.group.describe()}};
  if (r.endpoint) j["endpoint"] = endpoint_json(*r.endpoint);
  return j;
}

void write_solution(const fs::path& dir, const Problem& p, const SolveResult& r) {
  {
    auto out = open_output(dir, "solution.csv");
    out << "node_id,x,y,u\n";
    const auto nodes = p.mesh.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      out << i << ',' << format_double(nodes[i].x) << ',' << format_double(nodes[i].y) << ','
          << format_double(r.u_solution[i]) << '\n';
    }
  }
  {
    auto out = open_output(dir, "energy_history.csv");
    out << "iteration,energy\n";
    for (std::size_t i = 0; i < r.energy_history.size(); ++i) {
      out << i << ',' << format_double(r.energy_history[i]) << '\n';
    }
  }
  {
    auto out = open_output(dir, "mesh_nodes.csv");
    write_nodes_csv(p.mesh, out);
  }
  {
    auto out = open_output(dir, "mesh_triangles.csv");
    write_triangles_csv(p.mesh, out);
  }
  write_json(dir, "report.json", report_json(r, p));
}

int finish_solve(const fs::path& out, const Problem& p, const SolveResult& r) {
  write_solution(out, p, r);
  const auto& d = r.diagnostics;
  std::cout << "regime " << to_string(r.regime) << ", rho " << format_double(r.rho_min)
            << ", iterations " << r.iterations << ", converged " << (r.converged ? "yes" : "no")
            << "\n"
            << "gauss-bonnet " << format_double(d.gauss_bonnet_residual) << ", weak "
            << format_double(d.weak_residual_interior) << " / "
            << format_double(d.weak_residual_boundary) << "\n";
  if (!r.message.empty()) std::cout << r.message << "\n";
  if (r.regime == Regime::collapsed_zero || r.regime == Regime::collapsed_two_pi) {
    return Exit::collapse;
  }
  return r.converged ? Exit::ok : Exit::failure;
}

int cmd_solve(const RunConfig& c, const fs::path& out) {
  Problem p = build_problem(c);
  SolveConfig config = c.solver;
  config.group = p.group;
  const SolveResult r = minimize_joint(p.mesh, p.k, p.h, config);
  return finish_solve(out, p, r);
}

int cmd_solve_limit(const RunConfig& c, const fs::path& out, const std::string& side) {
  Problem p = build_problem(c);
  SolveConfig config = c.solver;
  config.group = p.group;
  if (side == "0") {
    const SolveResult r = solve_limit_0(p.mesh, p.h, config);
    p.k = ScalarField::constant(p.mesh.node_count(), 0.0);
    return finish_solve(out, p, r);
  }
  const SolveResult r = solve_limit_2pi(p.mesh, p.k, config);
  p.h = BoundaryTrace::constant(p.mesh.boundary_count(), 0.0);
  return finish_solve(out, p, r);
}

int cmd_check_inequalities(const RunConfig& c, const fs::path& out) {
  app::validate(c);
  const DiskMesh mesh(c.inequalities.n_radial, c.inequalities.n_angular);
  const InequalitySuite suite = run_inequality_suite(mesh, c.inequalities.options);
  {
    auto csv = open_output(out, "deficits.csv");
    write_deficit_csv(suite.reports, csv);
  }
  auto slopes = [](const SlopeComparison& s) {
    return Json{{"one_region", number(s.one_region.slope)},
                {"two_regions", number(s.two_regions.slope)}};
  };
  const Json j{{"mesh", {{"n_radial", mesh.n_radial()}, {"n_angular", mesh.n_angular()}}},
               {"lm_tolerance", c.inequalities.options.lm_tolerance},
               {"identity_defect", number(suite.identity_defect)},
               {"interior_slopes", slopes(suite.interior_slopes)},
               {"boundary_slopes", slopes(suite.boundary_slopes)},
               {"violations", suite.violations}};
  write_json(out, "inequalities.json", j);
  std::cout << suite.reports.size() << " deficits evaluated on " << mesh.n_radial() << "x"
            << mesh.n_angular() << " (tolerance " << format_double(c.inequalities.options.lm_tolerance)
            << ")\n";
  for (const auto& v : suite.violations) std::cout << "violation: " << v << "\n";
  return suite.violations.empty() ? Exit::ok : Exit::violation;
}

Json exact_json(const ExactCheck& e) {
  return Json{{"converged", e.converged},         {"passed", e.passed},
              {"field_error", number(e.field_error)}, {"mass_error", number(e.mass_error)},
              {"weak_residual", number(e.weak_residual)}, {"iterations", e.iterations}};
}

int cmd_verify(const RunConfig& c, const fs::path& out) {
  app::validate(c);
  const DiskMesh mesh(c.n_radial, c.n_angular);
  SolveConfig config = c.solver;
  config.group = SymmetryGroup::make(mesh, c.group_kind, c.group_k);
  const VerificationReport v = verify_exact_solutions(mesh, config);
  write_json(out, "verify.json",
             Json{{"geodesic", exact_json(v.geodesic)}, {"gaussian", exact_json(v.gaussian)}});
  std::cout << "K=0, h=1 (u = 0): " << (v.geodesic.passed ? "pass" : "fail") << ", |u|_inf "
            << format_double(v.geodesic.field_error) << "\n"
            << "K=1, h=0 (bubble): " << (v.gaussian.passed ? "pass" : "fail") << ", error "
            << format_double(v.gaussian.field_error) << "\n";
  return v.geodesic.passed && v.gaussian.passed ? Exit::ok : Exit::failure;
}

int cmd_refine(const RunConfig& c, const fs::path& out) {
  app::validate(c);
  RefinementProblem problem;
  problem.target = c.refine.target;
  if (c.k.file.empty()) problem.k = c.k.spec;
  if (c.h.file.empty()) problem.h = c.h.spec;
  if (!c.k.file.empty() || !c.h.file.empty()) {
    throw ConfigError("refine needs formula curvatures; tables are tied to one mesh");
  }
  problem.group_kind = c.group_kind;
  problem.group_k = c.group_k;
  problem.exact_rho = c.refine.exact_rho;
  if (c.refine.exact_bubble) problem.exact_field = exact_bubble;
  const auto ladder = doubling_ladder(c.refine.coarsest, c.refine.levels);
  const RefinementTable table = refinement_study(problem, ladder, c.solver);
  {
    auto csv = open_output(out, "refinement.csv");
    write_refinement_csv(table, csv);
  }
  write_refinement_csv(table, std::cout);
  return table.complete ? Exit::ok : Exit::failure;
}

int cmd_perturb(const RunConfig& c, const fs::path& out) {
  Problem p = build_problem(c);
  SolveConfig config = c.solver;
  config.group = p.group;
  SweepOptions options;
  options.gauss_bonnet_tolerance = c.perturb.gauss_bonnet_tolerance;
  const SweepResult sweep = perturbation_sweep(
      p.mesh, p.k, p.h, sample_disk(c.perturb.bump_k, p.mesh), sample_circle(c.perturb.bump_h, p.mesh),
      c.perturb.epsilons, config, options);
  {
    auto csv = open_output(out, "sweep.csv");
    write_sweep_csv(sweep, csv);
  }
  Json entries = Json::array();
  for (const auto& e : sweep.entries) {
    entries.push_back({{"epsilon", e.epsilon},
                       {"hypothesis", e.hypothesis},
                       {"converged", e.converged},
                       {"retained", e.retained},
                       {"rho", number(e.rho)},
                       {"gb_residual", number(e.gauss_bonnet)},
                       {"weak_residual", number(e.weak_residual)},
                       {"rho_constraint_residual", number(e.rho_constraint)},
                       {"status", e.status}});
  }
  write_json(out, "sweep.json",
             Json{{"max_feasible_epsilon", sweep.max_feasible_epsilon},
                  {"monotone", sweep.monotone},
                  {"entries", entries}});
  std::cout << "max_feasible_epsilon " << format_double(sweep.max_feasible_epsilon)
            << (sweep.monotone ? "" : " (not monotone)") << "\n";
  const bool base_ok = !sweep.entries.empty() && sweep.entries.front().retained;
  return base_ok && sweep.monotone ? Exit::ok : Exit::failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"diskcurv: prescribed Gaussian and geodesic curvature on the unit disk"};
  cli.require_subcommand(1);
  cli.fallthrough();
  std::string config_path;
  std::string out_dir = "out";
  int threads = 0;
  std::optional<std::uint64_t> seed;
  cli.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  cli.add_option("--out", out_dir, "output directory")->capture_default_str();
  cli.add_option("--threads", threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  cli.add_option("--seed", seed, "seed for random test fields (overrides the config)");

  auto* solve = cli.add_subcommand("solve", "minimize over (u, rho) and write the solution");
  std::string side;
  auto* limit = cli.add_subcommand("solve-limit", "solve a limiting problem (rho = 0 or 2pi)");
  limit->add_option("--side", side, "0 or 2pi")->required()->check(CLI::IsMember({"0", "2pi"}));
  auto* ineq = cli.add_subcommand("check-inequalities", "evaluate the inequality deficit families");
  auto* verify = cli.add_subcommand("verify", "check both exact limiting solutions");
  auto* refine = cli.add_subcommand("refine", "mesh refinement study");
  auto* perturb = cli.add_subcommand("perturb", "curvature perturbation sweep");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? Exit::ok : Exit::failure;
  }

  try {
    RunConfig config = config_path.empty() ? app::default_config() : app::load_config(config_path);
    if (seed) {
      config.seed = *seed;
      config.inequalities.options.seed = *seed;
    }
    set_thread_count(threads);
    const fs::path out = out_dir;
    if (solve->parsed()) return cmd_solve(config, out);
    if (limit->parsed()) return cmd_solve_limit(config, out, side);
    if (ineq->parsed()) return cmd_check_inequalities(config, out);
    if (verify->parsed()) return cmd_verify(config, out);
    if (refine->parsed()) return cmd_refine(config, out);
    if (perturb->parsed()) return cmd_perturb(config, out);
  } catch (const InfeasibleProblemError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return Exit::infeasible;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return Exit::failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::failure;
  }
  return Exit::failure;
}
