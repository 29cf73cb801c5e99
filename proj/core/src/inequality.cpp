#include "diskcurv/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "diskcurv/csv.hpp"
#include "diskcurv/energy.hpp"
#include "diskcurv/errors.hpp"

namespace diskcurv {

namespace {

double log_integral(const Vector& weights, const Vector& exponents, const char* what) {
  LogMass mass;
  if (!try_log_mass(weights, exponents, mass)) {
    throw NumericError(std::string(what) + ": integral of e^u vanishes on the region");
  }
  return mass.log_value;
}

double log_disk_exp(const DiskMesh& mesh, const ScalarField& u) {
  return log_integral(mesh.quadrature().area_weights, u.values(), "disk integral");
}

double log_circle_exp(const DiskMesh& mesh, const ScalarField& u) {
  return log_integral(mesh.quadrature().boundary_weights, mesh.trace(u).values(),
                      "boundary integral");
}

DeficitReport make_report(std::string family, double param, double left, double right,
                          double constant) {
  DeficitReport r;
  r.family = std::move(family);
  r.param = param;
  r.left = left;
  r.right = right + constant;
  r.deficit = r.right - r.left;
  r.constant_used = constant;
  return r;
}

double wrap_angle(double a) { return std::remainder(a, kTwoPi); }

double distance_to_arc(const Point2& p, const ArcRegion& arc) {
  const double r = std::hypot(p.x, p.y);
  const double phi = std::atan2(p.y, p.x);
  if (std::abs(wrap_angle(phi - arc.center_angle)) <= arc.half_width) return 1.0 - r;
  double best = std::numeric_limits<double>::infinity();
  for (double end : {arc.center_angle - arc.half_width, arc.center_angle + arc.half_width}) {
    best = std::min(best, std::hypot(p.x - std::cos(end), p.y - std::sin(end)));
  }
  return best;
}

double distance_to_disk(const Point2& p, const DiskRegion& disk) {
  return std::max(0.0, std::hypot(p.x - disk.center.x, p.y - disk.center.y) - disk.radius);
}

double distance_to_region(const Point2& p, const Region& region) {
  if (const auto* d = std::get_if<DiskRegion>(&region)) return distance_to_disk(p, *d);
  return distance_to_arc(p, std::get<ArcRegion>(region));
}

void validate_region(const Region& region, double delta) {
  if (const auto* d = std::get_if<DiskRegion>(&region)) {
    if (!(d->radius > 0.0)) throw ConfigError("interior region radius must be positive");
    const double reach = std::hypot(d->center.x, d->center.y) + d->radius + delta;
    if (!(reach < 1.0)) {
      throw ConfigError("interior region with its delta-neighbourhood reaches the boundary (|c| + r + delta = " +
                        std::to_string(reach) + " >= 1)");
    }
    return;
  }
  const auto& arc = std::get<ArcRegion>(region);
  if (!(arc.half_width > 0.0 && arc.half_width < kPi)) {
    throw ConfigError("boundary arc half width must lie in (0, pi)");
  }
}

std::vector<char> triangles_within(const DiskMesh& mesh, const Region& region, double reach) {
  const auto& centroids = mesh.quadrature().triangle_centroids;
  std::vector<char> mask(centroids.size(), 0);
  for (std::size_t t = 0; t < centroids.size(); ++t) {
    mask[t] = distance_to_region(centroids[t], region) <= reach ? 1 : 0;
  }
  return mask;
}

// Lumped nodal weights of the part of the domain (or circle) inside the region.
Vector region_weights(const DiskMesh& mesh, const Region& region) {
  Vector w = Vector::Zero(static_cast<Eigen::Index>(mesh.node_count()));
  if (std::holds_alternative<DiskRegion>(region)) {
    const auto mask = triangles_within(mesh, region, 0.0);
    const auto tris = mesh.triangles();
    for (std::size_t t = 0; t < tris.size(); ++t) {
      if (!mask[t]) continue;
      const double third = mesh.quadrature().triangle_areas[t] / 3.0;
      for (int v : tris[t]) w[v] += third;
    }
    return w;
  }
  const auto& arc = std::get<ArcRegion>(region);
  const auto nodes = mesh.nodes();
  const auto edges = mesh.boundary_edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& a = nodes[static_cast<std::size_t>(edges[e][0])];
    const auto& b = nodes[static_cast<std::size_t>(edges[e][1])];
    const double mid = std::atan2(a.y + b.y, a.x + b.x);
    if (std::abs(wrap_angle(mid - arc.center_angle)) > arc.half_width) continue;
    const double half = 0.5 * mesh.quadrature().edge_lengths[e];
    w[edges[e][0]] += half;
    w[edges[e][1]] += half;
  }
  return w;
}

void require_zero_mean(const DiskMesh& mesh, const ScalarField& u) {
  const double mean = area_mean(mesh, u);
  const double scale = 1.0 + u.values().cwiseAbs().maxCoeff();
  if (std::abs(mean) > 1e-10 * scale) {
    throw PreconditionError("local inequality requires zero disk mean, got mean " +
                            std::to_string(mean));
  }
}

bool same_kind(const std::vector<Region>& regions) {
  for (const auto& r : regions) {
    if (r.index() != regions.front().index()) return false;
  }
  return true;
}

void require_disjoint(const std::vector<Region>& regions, double delta) {
  for (std::size_t i = 0; i < regions.size(); ++i) {
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      bool overlap = false;
      if (const auto* a = std::get_if<DiskRegion>(&regions[i])) {
        const auto& b = std::get<DiskRegion>(regions[j]);
        const double gap = std::hypot(a->center.x - b.center.x, a->center.y - b.center.y) -
                           a->radius - b.radius;
        overlap = gap <= 2.0 * delta;
      } else {
        const auto& p = std::get<ArcRegion>(regions[i]);
        const auto& q = std::get<ArcRegion>(regions[j]);
        const double gap = std::abs(wrap_angle(p.center_angle - q.center_angle)) -
                           p.half_width - q.half_width;
        overlap = gap <= 0.0 || 2.0 * std::sin(0.5 * gap) <= 2.0 * delta;
      }
      if (overlap) {
        throw ConfigError("regions " + std::to_string(i) + " and " + std::to_string(j) +
                          " have overlapping delta-neighbourhoods");
      }
    }
  }
}

}  // namespace

ScalarField mobius_field(const DiskMesh& mesh, Point2 a) {
  const double a2 = a.x * a.x + a.y * a.y;
  if (!(a2 < 1.0)) throw DomainError("Mobius center must satisfy |a| < 1");
  const double log_scale = std::log1p(-a2);
  const auto nodes = mesh.nodes();
  Vector u(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    // 1 - conj(a) z
    const double re = 1.0 - (a.x * nodes[i].x + a.y * nodes[i].y);
    const double im = -(a.x * nodes[i].y - a.y * nodes[i].x);
    u[static_cast<Eigen::Index>(i)] = 2.0 * (log_scale - std::log(re * re + im * im));
  }
  return ScalarField(std::move(u));
}

double effective_concentration(const DiskMesh& mesh, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("bubble concentration must be positive");
  const double knee = std::max(1.0, 0.25 * mesh.n_radial());
  if (lambda <= knee) return lambda;
  return knee + knee * std::tanh((lambda - knee) / knee);
}

ScalarField interior_bubble(const DiskMesh& mesh, double lambda, Point2 center) {
  if (!(std::hypot(center.x, center.y) < 1.0)) {
    throw DomainError("bubble center must lie strictly inside the disk");
  }
  const double l = effective_concentration(mesh, lambda);
  const auto nodes = mesh.nodes();
  Vector u(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double dx = nodes[i].x - center.x;
    const double dy = nodes[i].y - center.y;
    u[static_cast<Eigen::Index>(i)] =
        2.0 * (std::log(2.0 * l) - std::log1p(l * l * (dx * dx + dy * dy)));
  }
  return ScalarField(std::move(u));
}

ScalarField merge_bubbles(const ScalarField& a, const ScalarField& b) {
  if (a.size() != b.size()) throw InvalidFieldError("merge_bubbles: length mismatch");
  Vector out(a.values().size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double hi = std::max(a.values()[i], b.values()[i]);
    const double lo = std::min(a.values()[i], b.values()[i]);
    out[i] = hi + std::log1p(std::exp(lo - hi)) - std::log(2.0);
  }
  return ScalarField(std::move(out));
}

DeficitReport lebedev_milin_deficit(const DiskMesh& mesh, const ScalarField& u) {
  require_valid(u, mesh.node_count(), "u");
  const double left = log_circle_exp(mesh, u) - std::log(mesh.boundary_length());
  const double right =
      dirichlet_energy(mesh, u) / (4.0 * kPi) + boundary_mean(mesh, mesh.trace(u));
  return make_report("lebedev-milin", 0.0, left, right, 0.0);
}

DeficitReport trace_interior_mean_deficit(const DiskMesh& mesh, const ScalarField& u,
                                          double constant) {
  require_valid(u, mesh.node_count(), "u");
  const double left = log_circle_exp(mesh, u);
  const double right = dirichlet_energy(mesh, u) / (4.0 * kPi) + area_mean(mesh, u);
  return make_report("trace-interior-mean", 0.0, left, right, constant);
}

std::string to_string(MtVariant variant) {
  switch (variant) {
    case MtVariant::dirichlet:
      return "mt-dirichlet";
    case MtVariant::mean_form:
      return "mt-mean";
    case MtVariant::boundary_mean_form:
      return "mt-boundary-mean";
  }
  return "mt";
}

DeficitReport mt_interior_deficit(const DiskMesh& mesh, const ScalarField& u, MtVariant variant,
                                  double constant) {
  require_valid(u, mesh.node_count(), "u");
  const double energy = dirichlet_energy(mesh, u);
  const double left = log_disk_exp(mesh, u);
  double right = 0.0;
  switch (variant) {
    case MtVariant::dirichlet: {
      const BoundaryTrace tr = mesh.trace(u);
      if (tr.values().cwiseAbs().maxCoeff() > 1e-12) {
        throw PreconditionError("Dirichlet Moser-Trudinger variant requires u = 0 on the boundary");
      }
      right = energy / (16.0 * kPi);
      break;
    }
    case MtVariant::mean_form:
      right = energy / (8.0 * kPi) + area_mean(mesh, u);
      break;
    case MtVariant::boundary_mean_form:
      right = energy / (8.0 * kPi) + boundary_mean(mesh, mesh.trace(u));
      break;
  }
  return make_report(to_string(variant), 0.0, left, right, constant);
}

double weak_modified_identity_defect(const DiskMesh& mesh, const ScalarField& w,
                                     const ScalarField& v) {
  const double lhs = stiffness_form(mesh, w, v) / (4.0 * kPi);
  const double rhs = boundary_mean(mesh, mesh.trace(v)) - area_mean(mesh, v);
  return lhs - rhs;
}

DeficitReport local_deficit(const DiskMesh& mesh, const ScalarField& u, const Region& region,
                            const LocalOptions& options) {
  require_valid(u, mesh.node_count(), "u");
  if (!(options.delta > 0.0) || !(options.epsilon > 0.0)) {
    throw ConfigError("local inequality needs delta > 0 and epsilon > 0");
  }
  validate_region(region, options.delta);
  require_zero_mean(mesh, u);

  const bool interior = std::holds_alternative<DiskRegion>(region);
  const Vector weights = region_weights(mesh, region);
  const Vector exponents = u.values();
  const double log_mass = log_integral(weights, exponents, "local integral");
  const auto collar = triangles_within(mesh, region, options.delta);
  const double local_energy = dirichlet_energy(mesh, u, collar);
  const double total_energy = dirichlet_energy(mesh, u);

  const double coefficient = interior ? 16.0 * kPi : 4.0 * kPi;
  return make_report(interior ? "local-interior" : "local-boundary", 0.0, coefficient * log_mass,
                     local_energy + options.epsilon * total_energy, options.constant);
}

double region_mass_fraction(const DiskMesh& mesh, const ScalarField& u,
                            const std::vector<Region>& regions) {
  if (regions.empty()) throw ConfigError("at least one region is required");
  const bool interior = std::holds_alternative<DiskRegion>(regions.front());
  const double total = interior ? log_disk_exp(mesh, u) : log_circle_exp(mesh, u);
  double smallest = 1.0;
  for (const auto& region : regions) {
    const Vector w = region_weights(mesh, region);
    LogMass mass;
    if (!try_log_mass(w, u.values(), mass)) return 0.0;
    smallest = std::min(smallest, std::exp(mass.log_value - total));
  }
  return smallest;
}

DeficitReport multi_region_deficit(const DiskMesh& mesh, const ScalarField& u,
                                   const std::vector<Region>& regions, double gamma,
                                   const LocalOptions& options) {
  require_valid(u, mesh.node_count(), "u");
  if (regions.empty() || !same_kind(regions)) {
    throw ConfigError("multi-region inequality needs one or more regions of a single kind");
  }
  const auto l = static_cast<double>(regions.size());
  if (!(gamma > 0.0 && gamma < 1.0 / l)) {
    throw ConfigError("gamma must lie in (0, 1/l)");
  }
  for (const auto& r : regions) validate_region(r, options.delta);
  require_disjoint(regions, options.delta);
  require_zero_mean(mesh, u);
  const double fraction = region_mass_fraction(mesh, u, regions);
  if (fraction < gamma) {
    throw PreconditionError("mass fraction " + std::to_string(fraction) +
                            " in some region is below gamma = " + std::to_string(gamma));
  }

  const bool interior = std::holds_alternative<DiskRegion>(regions.front());
  const double log_mass = interior ? log_disk_exp(mesh, u) : log_circle_exp(mesh, u);
  const double coefficient = (interior ? 8.0 : 4.0) * l * kPi;
  const double energy = dirichlet_energy(mesh, u);
  return make_report(interior ? "multi-interior" : "multi-boundary", l, coefficient * log_mass,
                     (1.0 + l * options.epsilon) * energy, options.constant);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ConfigError("line fit needs at least two paired samples");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw NumericError("line fit: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

namespace {

template <typename MakeOne, typename MakePair, typename LogOf>
SlopeComparison compare_slopes(const DiskMesh& mesh, const std::vector<double>& params,
                               MakeOne make_one, MakePair make_pair, LogOf log_of) {
  std::vector<double> e1, y1, e2, y2;
  for (double p : params) {
    const ScalarField one = remove_area_mean(mesh, make_one(p));
    const ScalarField two = remove_area_mean(mesh, make_pair(p));
    e1.push_back(dirichlet_energy(mesh, one));
    y1.push_back(log_of(one));
    e2.push_back(dirichlet_energy(mesh, two));
    y2.push_back(log_of(two));
  }
  return {fit_line(e1, y1), fit_line(e2, y2)};
}

}  // namespace

SlopeComparison interior_slope_comparison(const DiskMesh& mesh,
                                          const std::vector<double>& lambdas) {
  const Point2 left{-0.4, 0.0}, right{0.4, 0.0};
  return compare_slopes(
      mesh, lambdas, [&](double l) { return interior_bubble(mesh, l, right); },
      [&](double l) {
        return merge_bubbles(interior_bubble(mesh, l, right), interior_bubble(mesh, l, left));
      },
      [&](const ScalarField& u) { return log_disk_exp(mesh, u); });
}

SlopeComparison boundary_slope_comparison(const DiskMesh& mesh,
                                          const std::vector<double>& radii) {
  auto half_mobius = [&](double t) {
    ScalarField u = mobius_field(mesh, {t, 0.0});
    u.values() *= 0.5;
    return u;
  };
  auto mirrored = [&](double t) {
    ScalarField u = mobius_field(mesh, {-t, 0.0});
    u.values() *= 0.5;
    return u;
  };
  return compare_slopes(
      mesh, radii, half_mobius, [&](double t) { return merge_bubbles(half_mobius(t), mirrored(t)); },
      [&](const ScalarField& u) { return log_circle_exp(mesh, u); });
}

ScalarField random_smooth_field(const DiskMesh& mesh, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int kModes = 4;
  std::vector<double> a(kModes + 1), b(kModes + 1);
  for (int m = 0; m <= kModes; ++m) {
    a[static_cast<std::size_t>(m)] = scale * normal(rng) / (1.0 + m);
    b[static_cast<std::size_t>(m)] = scale * normal(rng) / (1.0 + m);
  }
  const double radial = scale * normal(rng);
  const auto nodes = mesh.nodes();
  Vector u(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double r = std::hypot(nodes[i].x, nodes[i].y);
    const double t = std::atan2(nodes[i].y, nodes[i].x);
    double value = a[0] + radial * r * r;
    for (int m = 1; m <= kModes; ++m) {
      value += std::pow(r, m) * (a[static_cast<std::size_t>(m)] * std::cos(m * t) +
                                 b[static_cast<std::size_t>(m)] * std::sin(m * t));
    }
    u[static_cast<Eigen::Index>(i)] = value;
  }
  return ScalarField(std::move(u));
}

InequalitySuite run_inequality_suite(const DiskMesh& mesh, const InequalityOptions& options) {
  InequalitySuite suite;
  auto push = [&](DeficitReport r, const std::string& family, double param) {
    r.family = family;
    r.param = param;
    suite.reports.push_back(std::move(r));
  };
  auto assert_lm = [&](const DeficitReport& r) {
    if (r.deficit < -options.lm_tolerance) {
      suite.violations.push_back(r.family + " " + format_double(r.param) +
                                 ": Lebedev-Milin deficit " + format_double(r.deficit) +
                                 " below -" + format_double(options.lm_tolerance));
    }
  };

  // Sharp trace inequality, asserted.
  const auto zero = ScalarField::constant(mesh.node_count(), 0.0);
  push(lebedev_milin_deficit(mesh, zero), "lm-constant", 0.0);
  assert_lm(suite.reports.back());
  for (double t : {0.0, 0.3, 0.6, 0.8, 0.9}) {
    ScalarField v = mobius_field(mesh, {t, 0.0});
    v.values() *= 0.5;
    push(lebedev_milin_deficit(mesh, v), "lm-mobius", t);
    assert_lm(suite.reports.back());
  }
  const std::vector<double> lambdas{1, 2, 4, 8, 16, 32, 64};
  for (double l : lambdas) {
    push(lebedev_milin_deficit(mesh, interior_bubble(mesh, l, {0.0, 0.0})), "lm-bubble", l);
    assert_lm(suite.reports.back());
  }
  std::vector<ScalarField> randoms;
  for (int i = 0; i < options.random_fields; ++i) {
    randoms.push_back(random_smooth_field(mesh, options.seed + static_cast<std::uint64_t>(i)));
    push(lebedev_milin_deficit(mesh, randoms.back()), "lm-random", i);
    assert_lm(suite.reports.back());
  }

  // Inequalities with unknown constants, recorded with C = 0.
  for (double l : lambdas) {
    const ScalarField u = interior_bubble(mesh, l, {0.0, 0.0});
    push(mt_interior_deficit(mesh, u, MtVariant::mean_form), "mt-mean-bubble", l);
    push(mt_interior_deficit(mesh, u, MtVariant::boundary_mean_form), "mt-boundary-mean-bubble", l);
    ScalarField pinned = u;
    pinned.values().array() -= mesh.trace(u).values()[0];
    for (int b : mesh.boundary_nodes()) pinned.values()[b] = 0.0;
    push(mt_interior_deficit(mesh, pinned, MtVariant::dirichlet), "mt-dirichlet-bubble", l);
    push(trace_interior_mean_deficit(mesh, u), "trace-interior-mean-bubble", l);

    const ScalarField centred = remove_area_mean(mesh, u);
    push(local_deficit(mesh, centred, DiskRegion{{0.0, 0.0}, 0.3}, options.local),
         "local-interior-bubble", l);
  }
  for (double t : {0.0, 0.3, 0.6, 0.8, 0.9}) {
    const ScalarField u = remove_area_mean(mesh, mobius_field(mesh, {t, 0.0}));
    push(local_deficit(mesh, u, ArcRegion{0.0, 0.5}, options.local), "local-boundary-mobius", t);
    ScalarField v = mobius_field(mesh, {t, 0.0});
    v.values() *= 0.5;
    push(trace_interior_mean_deficit(mesh, v), "trace-interior-mean-mobius", t);
  }
  for (double t : {0.3, 0.6, 0.8}) {
    ScalarField a = mobius_field(mesh, {t, 0.0});
    ScalarField b = mobius_field(mesh, {-t, 0.0});
    a.values() *= 0.5;
    b.values() *= 0.5;
    const ScalarField pair = remove_area_mean(mesh, merge_bubbles(a, b));
    const std::vector<Region> arcs{ArcRegion{0.0, 0.5}, ArcRegion{kPi, 0.5}};
    const double gamma = std::min(0.49, 0.99 * region_mass_fraction(mesh, pair, arcs));
    if (gamma > 0.0) {
      push(multi_region_deficit(mesh, pair, arcs, gamma, options.local), "multi-boundary-mobius", t);
    }
  }

  // Discrete identity behind the interior/boundary mean exchange, asserted.
  const ScalarField w = solve_auxiliary_neumann(mesh);
  for (const auto& v : randoms) {
    suite.identity_defect =
        std::max(suite.identity_defect, std::abs(weak_modified_identity_defect(mesh, w, v)));
  }
  if (suite.identity_defect > options.identity_tolerance) {
    suite.violations.push_back("auxiliary-neumann 0: identity defect " +
                               format_double(suite.identity_defect));
  }

  // More separated mass gives a smaller growth rate, asserted.
  suite.interior_slopes = interior_slope_comparison(mesh, {2.0, 4.0, 8.0, 16.0});
  suite.boundary_slopes = boundary_slope_comparison(mesh, {0.5, 0.7, 0.8, 0.9});
  if (!(suite.interior_slopes.two_regions.slope < suite.interior_slopes.one_region.slope)) {
    suite.violations.push_back("slope-interior 2: two-region slope not below one-region slope");
  }
  if (!(suite.boundary_slopes.two_regions.slope < suite.boundary_slopes.one_region.slope)) {
    suite.violations.push_back("slope-boundary 2: two-arc slope not below one-arc slope");
  }
  return suite;
}

void write_deficit_csv(const std::vector<DeficitReport>& reports, std::ostream& out) {
  out << "family,param,left,right,deficit,constant_used\n";
  for (const auto& r : reports) {
    out << r.family << ',' << format_double(r.param) << ',' << format_double(r.left) << ','
        << format_double(r.right) << ',' << format_double(r.deficit) << ','
        << format_double(r.constant_used) << '\n';
  }
}

}  // namespace diskcurv
