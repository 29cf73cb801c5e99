#include "diskcurv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "diskcurv/csv.hpp"
#include "diskcurv/errors.hpp"

namespace diskcurv {

std::string to_string(RhoStrategy strategy) {
  return strategy == RhoStrategy::joint ? "joint" : "outer-scan";
}

RhoStrategy parse_rho_strategy(const std::string& name) {
  if (name == "joint") return RhoStrategy::joint;
  if (name == "outer-scan") return RhoStrategy::outer_scan;
  throw ConfigError("unknown rho strategy '" + name + "' (expected joint or outer-scan)");
}

std::string to_string(Side side) { return side == Side::zero ? "0" : "2pi"; }

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::interior:
      return "interior";
    case Regime::collapsed_zero:
      return "collapsed-to-0";
    case Regime::collapsed_two_pi:
      return "collapsed-to-2pi";
    case Regime::limit_zero:
      return "limit-0";
    case Regime::limit_two_pi:
      return "limit-2pi";
  }
  return "unknown";
}

namespace {

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

// sigma(s + t) - sigma(s) without cancellation.
double sigmoid_change(double s, double t) {
  return -std::expm1(-t) * sigmoid(-s) * sigmoid(s + t);
}

void check_config(const SolveConfig& config) {
  if (config.max_iterations < 1) throw ConfigError("max_iterations must be positive");
  if (!(config.gradient_tolerance > 0.0)) throw ConfigError("gradient_tolerance must be positive");
  if (!(config.initial_rho > 0.0 && config.initial_rho < kTwoPi)) {
    throw ConfigError("initial_rho must lie in (0, 2pi)");
  }
  const auto& ls = config.line_search;
  if (!(ls.shrink > 0.0 && ls.shrink < 1.0)) throw ConfigError("line search shrink must be in (0, 1)");
  if (!(ls.sufficient_decrease > 0.0 && ls.sufficient_decrease < 0.5)) {
    throw ConfigError("sufficient decrease constant must be in (0, 1/2)");
  }
  if (ls.max_backtracks < 1) throw ConfigError("max_backtracks must be positive");
  if (config.lbfgs_memory < 0) throw ConfigError("lbfgs_memory must be nonnegative");
}

void check_group(const DiskMesh& mesh, const SymmetryGroup& group) {
  if (group.empty() || group.order() < 2) {
    throw ConfigError(
        "the solver needs a symmetry group of order >= 2; without symmetry the energy is not "
        "coercive and the unsymmetric problem is out of scope");
  }
  if (group.node_count() != mesh.node_count()) {
    throw ConfigError("symmetry group was built for a different mesh");
  }
  if (!validate_fixed_point_free(group, mesh)) {
    throw ConfigError("symmetry group " + group.describe() + " fixes a boundary point");
  }
}

template <typename Field>
Field symmetric_input(const Field& f, const SymmetryGroup& group, double tol, const char* what) {
  const double r = symmetry_residual(f, group);
  if (r > tol) {
    throw ConfigError(std::string(what) + " is not invariant under " + group.describe() +
                      " (residual " + std::to_string(r) + ")");
  }
  return symmetrize(f, group);
}

void remove_mean(const Vector& weights, double total_weight, Vector& v) {
  v.array() -= weights.dot(v) / total_weight;
}

struct Setup {
  const DiskMesh& mesh;
  const EnergyFunctional& functional;
  const H1Riesz& riesz;
  const SymmetryGroup& group;
  const SolveConfig& config;
};

struct State {
  EnergyPoint point;
  double s = 0.0;
  Vector grad;  // u-gradient, plus d/ds in the last slot for joint runs
  double grad_rho = 0.0;
  double grad_norm = 0.0;
};

// Minimizes over u (fixed rho) or over (u, s) with rho = 2pi sigma(s).
class Descent {
 public:
  Descent(const Setup& setup, bool joint, double fixed_rho)
      : setup_(setup),
        joint_(joint),
        fixed_rho_(fixed_rho),
        n_(static_cast<Eigen::Index>(setup.mesh.node_count())),
        weights_(setup.mesh.quadrature().area_weights),
        total_weight_(weights_.sum()) {}

  SolveResult run(Vector u, double s) {
    SolveResult result;
    remove_mean(weights_, total_weight_, u);
    state_ = make_state(u, s);
    double energy = setup_.functional.breakdown(state_.point).total;
    result.energy_history.push_back(energy);
    std::deque<Pair> memory;

    int it = 0;
    for (; it < setup_.config.max_iterations; ++it) {
      if (stationary()) {
        result.converged = true;
        break;
      }
      if (joint_ && collapsed()) {
        result.message = "rho approached an endpoint of (0, 2pi)";
        break;
      }
      Vector d = direction(memory);
      double slope = state_.grad.dot(d);
      if (!(slope < 0.0)) {
        memory.clear();
        d = direction(memory);
        slope = state_.grad.dot(d);
        if (!(slope < 0.0)) {
          result.message = "no descent direction at round-off level";
          break;
        }
      }
      double delta = 0.0;
      State next;
      const LineOutcome outcome = line_search(d, slope, delta, next);
      if (outcome == LineOutcome::inadmissible) {
        throw StalledOutsideAdmissibleError(
            "line search could not return the iterate to the admissible set after " +
            std::to_string(setup_.config.line_search.max_backtracks) + " backtracks");
      }
      if (outcome == LineOutcome::no_decrease) {
        result.message = "line search found no sufficient decrease";
        break;
      }
      Pair pair;
      pair.s = stacked(next) - stacked(state_);
      pair.y = next.grad - state_.grad;
      const double sy = pair.s.dot(pair.y);
      if (sy > 1e-12 * pair.s.norm() * pair.y.norm()) {
        pair.rho = 1.0 / sy;
        memory.push_back(std::move(pair));
        if (static_cast<int>(memory.size()) > setup_.config.lbfgs_memory) memory.pop_front();
      }
      energy += delta;
      result.energy_history.push_back(energy);
      state_ = std::move(next);
    }
    if (!result.converged && it == setup_.config.max_iterations) {
      result.message = "iteration cap reached";
    }
    result.iterations = it;
    result.u_min = ScalarField(state_.point.u);
    result.rho_min = state_.point.rho;
    result.energy = setup_.functional.breakdown(state_.point);
    result.gradient_norm = state_.grad_norm;
    result.rho_gradient = state_.grad_rho;
    return result;
  }

  double sigma() const { return sigmoid(state_.s); }

 private:
  struct Pair {
    Vector s, y;
    double rho = 0.0;
  };
  enum class LineOutcome { accepted, inadmissible, no_decrease };

  double rho_of(double s) const { return joint_ ? kTwoPi * sigmoid(s) : fixed_rho_; }

  Vector stacked(const State& st) const {
    if (!joint_) return st.point.u;
    Vector x(n_ + 1);
    x.head(n_) = st.point.u;
    x[n_] = st.s;
    return x;
  }

  bool try_state(const Vector& u, double s, State& out) const {
    if (!setup_.functional.try_evaluate(u, rho_of(s), out.point)) return false;
    out.s = s;
    Vector gu = setup_.functional.gradient_u(out.point);
    const double scale = gu.cwiseAbs().maxCoeff();
    const double asym = symmetry_residual(ScalarField(gu), setup_.group);
    if (asym > 1e-8 * scale + 1e-13) {
      throw NumericError("gradient of a symmetric iterate is not symmetric (residual " +
                         format_double(asym) + ", scale " + format_double(scale) + ")");
    }
    symmetrize_in_place(gu, setup_.group);
    out.grad_norm = setup_.riesz.dual_norm(gu);
    if (joint_) {
      const double rho = out.point.rho;
      out.grad_rho = setup_.functional.gradient_rho(out.point);
      out.grad.resize(n_ + 1);
      out.grad.head(n_) = gu;
      out.grad[n_] = out.grad_rho * rho * (kTwoPi - rho) / kTwoPi;
    } else {
      out.grad_rho = 0.0;
      out.grad = std::move(gu);
    }
    return true;
  }

  State make_state(const Vector& u, double s) const {
    State st;
    if (!try_state(u, s, st)) {
      throw OutsideAdmissibleError(Admissibility::area,
                                   "starting point is outside the admissible set");
    }
    return st;
  }

  bool stationary() const {
    const double tol = setup_.config.gradient_tolerance;
    return state_.grad_norm <= tol && (!joint_ || std::abs(state_.grad_rho) <= tol);
  }

  bool collapsed() const {
    const double thr = setup_.config.collapse_threshold;
    const double sg = sigmoid(state_.s);
    return sg < thr || sigmoid(-state_.s) < thr;
  }

  // Initial inverse-Hessian guess: the H^1 Riesz map on u and the inverse
  // curvature of f in the s variable.
  Vector apply_h0(const Vector& v) const {
    Vector out(v.size());
    out.head(n_) = setup_.riesz.solve(v.head(n_));
    if (joint_) {
      const double rho = state_.point.rho;
      const double q = kTwoPi - rho;
      const double drho = rho * q / kTwoPi;
      out[n_] = v[n_] / (drho * drho * (4.0 / q + 2.0 / rho));
    }
    return out;
  }

  void project(Vector& d) const {
    Vector du = d.head(n_);
    symmetrize_in_place(du, setup_.group);
    remove_mean(weights_, total_weight_, du);
    d.head(n_) = du;
  }

  Vector direction(const std::deque<Pair>& memory) const {
    Vector q = state_.grad;
    std::vector<double> alpha(memory.size());
    for (std::size_t i = memory.size(); i-- > 0;) {
      alpha[i] = memory[i].rho * memory[i].s.dot(q);
      q -= alpha[i] * memory[i].y;
    }
    Vector r = apply_h0(q);
    if (!memory.empty()) {
      const Pair& last = memory.back();
      const double yhy = last.y.dot(apply_h0(last.y));
      if (yhy > 0.0) r *= 1.0 / (last.rho * yhy);
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const double beta = memory[i].rho * memory[i].y.dot(r);
      r += (alpha[i] - beta) * memory[i].s;
    }
    Vector d = -r;
    project(d);
    return d;
  }

  LineOutcome line_search(const Vector& d, double slope, double& delta, State& next) const {
    const auto& ls = setup_.config.line_search;
    const Vector du = d.head(n_);
    const double ds = joint_ ? d[n_] : 0.0;
    double alpha = 1.0;
    const double largest = std::max(du.cwiseAbs().maxCoeff(), std::abs(ds));
    if (largest * alpha > 4.0) alpha = 4.0 / largest;

    const LineData line = setup_.functional.line(state_.point, du);
    bool any_admissible = false;
    for (int k = 0; k < ls.max_backtracks; ++k, alpha *= ls.shrink) {
      const double s_new = state_.s + alpha * ds;
      const double rho_new = rho_of(s_new);
      const double delta_rho = joint_ ? kTwoPi * sigmoid_change(state_.s, alpha * ds) : 0.0;
      double change = 0.0;
      if (!setup_.functional.change(line, alpha, rho_new, delta_rho, change)) continue;
      any_admissible = true;
      if (!(change <= ls.sufficient_decrease * alpha * slope)) continue;
      Vector u_new = state_.point.u + alpha * du;
      remove_mean(weights_, total_weight_, u_new);
      if (!try_state(u_new, s_new, next)) continue;
      delta = change;
      return LineOutcome::accepted;
    }
    return any_admissible ? LineOutcome::no_decrease : LineOutcome::inadmissible;
  }

  const Setup& setup_;
  bool joint_;
  double fixed_rho_;
  Eigen::Index n_;
  const Vector& weights_;
  double total_weight_;
  State state_;
};

struct Prepared {
  ScalarField k;
  BoundaryTrace h;
};

Prepared prepare(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                 const SolveConfig& config) {
  check_config(config);
  require_valid(k, mesh.node_count(), "K");
  require_valid(h, mesh.boundary_count(), "h");
  check_group(mesh, config.group);
  return {symmetric_input(k, config.group, config.curvature_symmetry_tolerance, "K"),
          symmetric_input(h, config.group, config.curvature_symmetry_tolerance, "h")};
}

void finish_interior(const DiskMesh& mesh, const H1Riesz& riesz, const Prepared& data,
                     const SolveConfig& config, SolveResult& result) {
  const Normalization n =
      normalization_constants(mesh, data.k, data.h, result.u_min, result.rho_min);
  result.normalization_constant = n.constant;
  result.normalization_gap = std::abs(n.constant - n.boundary_constant);
  if (result.converged) {
    result.u_solution =
        normalize_solution(mesh, data.k, data.h, result.u_min, result.rho_min,
                           config.normalization_tolerance);
  } else {
    result.u_solution = result.u_min;
    result.u_solution.values().array() += n.constant;
  }
  result.diagnostics = diagnose(mesh, riesz, data.k, data.h, result.u_min, result.u_solution,
                                result.rho_min, config.group);
}

SolveResult run_fixed(const DiskMesh& mesh, const EnergyFunctional& functional,
                      const H1Riesz& riesz, const SolveConfig& config, double rho,
                      const Vector& init) {
  const Setup setup{mesh, functional, riesz, config.group, config};
  Descent descent(setup, false, rho);
  return descent.run(init, 0.0);
}

SolveResult outer_scan(const DiskMesh& mesh, const EnergyFunctional& functional,
                       const H1Riesz& riesz, const SolveConfig& config, const Vector& init,
                       bool& collapsed) {
  const int points = std::max(1, config.scan_points);
  SolveResult best;
  double best_energy = std::numeric_limits<double>::infinity();
  int iterations = 0;
  for (int j = 1; j <= points; ++j) {
    const double rho = kTwoPi * j / (points + 1);
    SolveResult r = run_fixed(mesh, functional, riesz, config, rho, init);
    iterations += r.iterations;
    if (r.energy.total < best_energy) {
      best_energy = r.energy.total;
      best = std::move(r);
    }
  }

  Vector u = best.u_min.values();
  double rho = best.rho_min;
  SolveResult current = std::move(best);
  current.converged = false;
  collapsed = false;
  for (int round = 0; round < config.scan_rounds; ++round) {
    const EnergyPoint p = functional.evaluate(u, rho);
    const double rho_star = optimal_rho(p.area.log_value, p.boundary.log_value);
    const double sg = rho_star / kTwoPi;
    if (sg < config.collapse_threshold || 1.0 - sg < config.collapse_threshold) {
      collapsed = true;
      current.rho_min = std::clamp(rho_star, 0.0, kTwoPi);
      current.message = "rho approached an endpoint of (0, 2pi)";
      break;
    }
    SolveResult r = run_fixed(mesh, functional, riesz, config, rho_star, u);
    iterations += r.iterations;
    u = r.u_min.values();
    rho = rho_star;
    const EnergyPoint q = functional.evaluate(u, rho);
    const double g_rho = functional.gradient_rho(q);
    const auto history = std::move(current.energy_history);
    current = std::move(r);
    current.energy_history.insert(current.energy_history.begin(), history.begin(), history.end());
    current.rho_gradient = g_rho;
    if (current.converged && std::abs(g_rho) <= config.gradient_tolerance) break;
    current.converged = false;
  }
  current.iterations = iterations;
  if (!current.converged && current.message.empty()) current.message = "outer scan did not settle";
  return current;
}

Vector plateau(const DiskMesh& mesh, const std::vector<int>& area_nodes,
               const std::vector<int>& boundary_nodes, double a, double b) {
  Vector phi = Vector::Zero(static_cast<Eigen::Index>(mesh.node_count()));
  for (int i : boundary_nodes) phi[i] = b;
  for (int i : area_nodes) phi[i] = a;
  return phi;
}

std::vector<int> orbit_union(const std::vector<int>& seeds, const SymmetryGroup& group) {
  std::vector<int> out;
  for (int seed : seeds) {
    for (int g = 0; g < group.order(); ++g) {
      out.push_back(group.node_permutation(g)[static_cast<std::size_t>(seed)]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ScalarField feasible_initializer(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                                 const SymmetryGroup& group, bool need_area, bool need_boundary) {
  require_valid(k, mesh.node_count(), "K");
  require_valid(h, mesh.boundary_count(), "h");
  if (group.empty() || group.node_count() != mesh.node_count()) {
    throw ConfigError("feasible_initializer: group does not match the mesh");
  }
  if (need_area && !(k.values().maxCoeff() > 0.0)) {
    throw InfeasibleProblemError(
        "admissible set is empty: K <= 0 at every node, so int K e^u > 0 is impossible");
  }
  if (need_boundary && !(h.values().maxCoeff() > 0.0)) {
    throw InfeasibleProblemError(
        "admissible set is empty: h <= 0 at every boundary node, so int h e^{u/2} > 0 is "
        "impossible");
  }

  const EnergyFunctional functional(mesh, k, h);
  auto admissible = [&](const Vector& phi) {
    LogMass m;
    const bool area_ok = !need_area || try_log_mass(functional.area_coefficients(), phi, m);
    const bool boundary_ok =
        !need_boundary || try_log_mass(functional.boundary_coefficients(), 0.5 * phi, m);
    return std::pair{area_ok, boundary_ok};
  };

  const Vector zero = Vector::Zero(static_cast<Eigen::Index>(mesh.node_count()));
  {
    const auto [a_ok, b_ok] = admissible(zero);
    if (a_ok && b_ok) return ScalarField(zero);
  }

  const auto nodes = mesh.nodes();
  const double patch = std::max(0.15, 2.0 / mesh.n_radial());

  // Interior patch around the largest value of K.
  std::vector<int> area_nodes;
  if (need_area) {
    Eigen::Index peak = 0;
    k.values().maxCoeff(&peak);
    std::vector<int> seeds;
    const auto& c = nodes[static_cast<std::size_t>(peak)];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const bool on_boundary = mesh.boundary_index_of(static_cast<int>(i)) >= 0;
      if (on_boundary && static_cast<Eigen::Index>(i) != peak) continue;
      if (k[i] > 0.0 && std::hypot(nodes[i].x - c.x, nodes[i].y - c.y) <= patch) {
        seeds.push_back(static_cast<int>(i));
      }
    }
    area_nodes = orbit_union(seeds, group);
  }

  // Boundary collar around the largest value of h.
  std::vector<int> boundary_nodes;
  if (need_boundary) {
    Eigen::Index peak = 0;
    h.values().maxCoeff(&peak);
    const auto bnodes = mesh.boundary_nodes();
    const auto& c = nodes[static_cast<std::size_t>(bnodes[static_cast<std::size_t>(peak)])];
    std::vector<int> seeds;
    for (std::size_t b = 0; b < bnodes.size(); ++b) {
      const auto& p = nodes[static_cast<std::size_t>(bnodes[b])];
      if (h[b] > 0.0 && std::hypot(p.x - c.x, p.y - c.y) <= patch) seeds.push_back(bnodes[b]);
    }
    boundary_nodes = orbit_union(seeds, group);
  }

  double a = need_area ? 1.0 : 0.0;
  double b = need_boundary ? 1.0 : 0.0;
  for (int step = 0; step < 200; ++step) {
    const Vector phi = plateau(mesh, area_nodes, boundary_nodes, a, b);
    const auto [a_ok, b_ok] = admissible(phi);
    if (a_ok && b_ok) {
      ScalarField out(phi);
      return symmetrize(out, group);
    }
    if (!b_ok) {
      b *= 2.0;
    } else {
      a *= 2.0;
    }
    if (a > 1e6 || b > 1e6) break;
  }
  throw InfeasibleProblemError("no admissible plateau field found by doubling");
}

SolveResult minimize_fixed_rho(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                               double rho, const ScalarField& init, const SolveConfig& config) {
  if (!(rho >= 0.0 && rho <= kTwoPi)) throw DomainError("rho must lie in [0, 2pi]");
  const Prepared data = prepare(mesh, k, h, config);
  require_valid(init, mesh.node_count(), "init");
  const EnergyFunctional functional(mesh, data.k, data.h);
  const H1Riesz riesz(mesh);
  const Vector start = symmetrize(init, config.group).values();
  SolveResult result = run_fixed(mesh, functional, riesz, config, rho, start);

  const EnergyPoint p = functional.evaluate(result.u_min.values(), rho);
  if (rho == 0.0) {
    result.regime = Regime::limit_zero;
    result.normalization_constant = 2.0 * (std::log(kTwoPi) - p.boundary.log_value);
  } else if (rho == kTwoPi) {
    result.regime = Regime::limit_two_pi;
    result.normalization_constant = std::log(kTwoPi) - p.area.log_value;
  } else {
    const Normalization n = normalization_constants(mesh, data.k, data.h, result.u_min, rho);
    result.normalization_constant = n.constant;
    result.normalization_gap = std::abs(n.constant - n.boundary_constant);
    result.rho_gradient = functional.gradient_rho(p);
  }
  result.u_solution = result.u_min;
  result.u_solution.values().array() += result.normalization_constant;
  result.diagnostics = diagnose(mesh, riesz, data.k, data.h, result.u_min, result.u_solution, rho,
                                config.group);
  return result;
}

SolveResult minimize_joint(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                           const SolveConfig& config) {
  const Prepared data = prepare(mesh, k, h, config);
  const ScalarField init = feasible_initializer(mesh, data.k, data.h, config.group);
  const EnergyFunctional functional(mesh, data.k, data.h);
  const H1Riesz riesz(mesh);

  SolveResult result;
  bool collapsed = false;
  if (config.rho_strategy == RhoStrategy::joint) {
    const Setup setup{mesh, functional, riesz, config.group, config};
    Descent descent(setup, true, 0.0);
    result = descent.run(init.values(), logit(config.initial_rho / kTwoPi));
    const double sg = descent.sigma();
    collapsed = sg < config.collapse_threshold || 1.0 - sg < config.collapse_threshold;
  } else {
    result = outer_scan(mesh, functional, riesz, config, init.values(), collapsed);
  }

  if (collapsed) {
    result.converged = false;
    const Side side = result.rho_min < kPi ? Side::zero : Side::two_pi;
    result.regime = side == Side::zero ? Regime::collapsed_zero : Regime::collapsed_two_pi;
    const SolveResult limit =
        side == Side::zero ? solve_limit_0(mesh, data.h, config) : solve_limit_2pi(mesh, data.k, config);
    result.endpoint = endpoint_exclusion_check(mesh, data.k, data.h, limit.u_min, side);
    result.message = "rho collapsed toward " + to_string(side) + "; " + result.endpoint->message;
    result.u_solution = result.u_min;
    result.diagnostics.symmetry_residual = symmetry_residual(result.u_min, config.group);
    return result;
  }
  finish_interior(mesh, riesz, data, config, result);
  return result;
}

namespace {

SolveResult solve_limit(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                        Side side, const SolveConfig& config) {
  const Prepared data = prepare(mesh, k, h, config);
  const bool zero = side == Side::zero;
  const ScalarField init =
      feasible_initializer(mesh, data.k, data.h, config.group, !zero, zero);
  const EnergyFunctional functional(mesh, data.k, data.h);
  const H1Riesz riesz(mesh);
  const double rho = zero ? 0.0 : kTwoPi;
  SolveResult result = run_fixed(mesh, functional, riesz, config, rho, init.values());
  result.regime = zero ? Regime::limit_zero : Regime::limit_two_pi;
  const EnergyPoint p = functional.evaluate(result.u_min.values(), rho);
  result.normalization_constant = zero ? 2.0 * (std::log(kTwoPi) - p.boundary.log_value)
                                       : std::log(kTwoPi) - p.area.log_value;
  result.u_solution = result.u_min;
  result.u_solution.values().array() += result.normalization_constant;
  result.diagnostics = diagnose(mesh, riesz, data.k, data.h, result.u_min, result.u_solution, rho,
                                config.group);
  return result;
}

}  // namespace

SolveResult solve_limit_0(const DiskMesh& mesh, const BoundaryTrace& h, const SolveConfig& config) {
  return solve_limit(mesh, ScalarField::constant(mesh.node_count(), 0.0), h, Side::zero, config);
}

SolveResult solve_limit_2pi(const DiskMesh& mesh, const ScalarField& k, const SolveConfig& config) {
  return solve_limit(mesh, k, BoundaryTrace::constant(mesh.boundary_count(), 0.0), Side::two_pi,
                     config);
}

Normalization normalization_constants(const DiskMesh& mesh, const ScalarField& k,
                                      const BoundaryTrace& h, const ScalarField& u_min,
                                      double rho) {
  if (!(rho > 0.0 && rho < kTwoPi)) {
    throw DomainError("normalization needs rho in the open interval (0, 2pi)");
  }
  const double la = log_area_integral(mesh, k, u_min);
  const double lb = log_boundary_integral(mesh, h, u_min);
  Normalization n;
  n.constant = std::log(rho) - la;
  n.boundary_constant = 2.0 * (std::log(kTwoPi - rho) - lb);
  n.area_mass = std::exp(la + n.constant);
  n.boundary_mass = std::exp(lb + 0.5 * n.constant);
  return n;
}

ScalarField normalize_solution(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                               const ScalarField& u_min, double rho, double tolerance) {
  const Normalization n = normalization_constants(mesh, k, h, u_min, rho);
  const double gap = std::abs(n.constant - n.boundary_constant);
  if (gap > tolerance) {
    throw InconsistentMinimizerError(
        "normalization constants disagree: log rho - log int K e^u = " +
        std::to_string(n.constant) + ", 2 (log(2pi - rho) - log int h e^{u/2}) = " +
        std::to_string(n.boundary_constant));
  }
  ScalarField out = u_min;
  out.values().array() += n.constant;
  return out;
}

EndpointReport endpoint_exclusion_check(const DiskMesh& mesh, const ScalarField& k,
                                        const BoundaryTrace& h, const ScalarField& u0, Side side) {
  return endpoint_exclusion_check(mesh, k, h, u0, side,
                                  {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8});
}

EndpointReport endpoint_exclusion_check(const DiskMesh& mesh, const ScalarField& k,
                                        const BoundaryTrace& h, const ScalarField& u0, Side side,
                                        const std::vector<double>& distances) {
  EndpointReport report;
  report.side = side;
  const EnergyFunctional functional(mesh, k, h);
  LogMass area, boundary;
  const bool area_ok = try_log_mass(functional.area_coefficients(), u0.values(), area);
  const bool boundary_ok =
      try_log_mass(functional.boundary_coefficients(), 0.5 * u0.values(), boundary);
  if (!area_ok || !boundary_ok) {
    report.hypothesis_holds = false;
    report.message = std::string("hypothesis fails: ") +
                     (!area_ok ? "int K e^u0 <= 0" : "int h e^{u0/2} <= 0") +
                     ", so the endpoint cannot be compared with interior rho";
    return report;
  }
  report.hypothesis_holds = true;
  const double la = area.log_value;
  const double lb = boundary.log_value;
  double nearest = std::numeric_limits<double>::infinity();
  for (double t : distances) {
    if (!(t > 0.0 && t < kTwoPi)) throw ConfigError("endpoint distances must lie in (0, 2pi)");
    double rho = 0.0, diff = 0.0, main = 0.0;
    if (side == Side::zero) {
      rho = t;
      diff = -2.0 * t * la + 4.0 * t * lb + f_correction_change(0.0, t);
      main = 2.0 * t * std::log(t);
    } else {
      rho = kTwoPi - t;
      diff = 2.0 * t * la - 4.0 * t * lb + f_correction_change(kTwoPi, -t);
      main = 4.0 * t * std::log(t);
    }
    report.rho.push_back(rho);
    report.difference.push_back(diff);
    report.main_term.push_back(main);
    if (t < nearest) {
      nearest = t;
      report.excluded = diff < 0.0;
    }
  }
  report.message = report.excluded ? "endpoint excluded: energy decreases moving inward"
                                   : "endpoint not excluded on this grid";
  return report;
}

}  // namespace diskcurv
