#include "diskcurv/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diskcurv/errors.hpp"

namespace diskcurv {

namespace {

const double kLogTwoPi = std::log(kTwoPi);

void require_rho(double rho) {
  if (!(rho >= 0.0 && rho <= kTwoPi)) {
    throw DomainError("rho = " + std::to_string(rho) + " is outside [0, 2pi]");
  }
}

// x1 log x1 - x0 log x0 with x1 = x0 + dx.
double xlogx_change(double x0, double dx) {
  if (dx == 0.0) return 0.0;
  const double x1 = x0 + dx;
  if (x0 == 0.0) return x1 > 0.0 ? x1 * std::log(x1) : 0.0;
  if (x1 <= 0.0) return -x0 * std::log(x0);
  return dx * std::log(x1) + x0 * std::log1p(dx / x0);
}

bool log_mass_on(const Vector& coefficients, const Vector& exponents,
                 const std::vector<int>& support, double exponent_scale, LogMass& out) {
  if (support.empty()) return false;
  double shift = -std::numeric_limits<double>::infinity();
  for (int i : support) shift = std::max(shift, exponent_scale * exponents[i]);
  double sum = 0.0;
  out.measure.setZero(coefficients.size());
  for (int i : support) {
    const double term = coefficients[i] * std::exp(exponent_scale * exponents[i] - shift);
    out.measure[i] = term;
    sum += term;
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) return false;
  out.measure /= sum;
  out.shift = shift;
  out.log_value = shift + std::log(sum);
  return true;
}

// log sum_i nu_i exp(t_i) for a normalized (possibly signed) measure nu.
bool log_mass_change(const Vector& measure, const Vector& direction, double alpha, double scale,
                     const std::vector<int>& support, double& out) {
  double largest = 0.0;
  for (int i : support) largest = std::max(largest, std::abs(alpha * scale * direction[i]));
  if (largest <= 1.0) {
    double sum = 0.0;
    for (int i : support) sum += measure[i] * std::expm1(alpha * scale * direction[i]);
    if (!(sum > -1.0)) return false;
    out = std::log1p(sum);
    return true;
  }
  double shift = -std::numeric_limits<double>::infinity();
  for (int i : support) shift = std::max(shift, alpha * scale * direction[i]);
  double sum = 0.0;
  for (int i : support) sum += measure[i] * std::exp(alpha * scale * direction[i] - shift);
  if (!(sum > 0.0) || !std::isfinite(sum)) return false;
  out = shift + std::log(sum);
  return true;
}

std::vector<int> support_of(const Vector& coefficients) {
  std::vector<int> support;
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
    if (coefficients[i] != 0.0) support.push_back(static_cast<int>(i));
  }
  return support;
}

}  // namespace

bool try_log_mass(const Vector& coefficients, const Vector& exponents, LogMass& out) {
  if (coefficients.size() != exponents.size()) {
    throw InvalidFieldError("try_log_mass: coefficient and exponent lengths differ");
  }
  return log_mass_on(coefficients, exponents, support_of(coefficients), 1.0, out);
}

double f_correction(double rho) {
  require_rho(rho);
  if (rho == 0.0) return 8.0 * kPi * kLogTwoPi;
  if (rho == kTwoPi) return 4.0 * kPi + 4.0 * kPi * kLogTwoPi;
  const double q = kTwoPi - rho;
  return 4.0 * q * std::log(q) + 2.0 * rho + 2.0 * rho * std::log(rho);
}

double f_correction_derivative(double rho) {
  if (!(rho > 0.0 && rho < kTwoPi)) {
    throw EndpointDerivativeError("f'(rho) is unbounded at rho = " + std::to_string(rho));
  }
  return -4.0 * std::log(kTwoPi - rho) + 2.0 * std::log(rho);
}

double f_correction_change(double rho, double delta) {
  require_rho(rho);
  require_rho(rho + delta);
  return 4.0 * xlogx_change(kTwoPi - rho, -delta) + 2.0 * delta + 2.0 * xlogx_change(rho, delta);
}

double log_area_integral(const DiskMesh& mesh, const ScalarField& k, const ScalarField& u) {
  require_valid(k, mesh.node_count(), "K");
  require_valid(u, mesh.node_count(), "u");
  const Vector coeff = mesh.quadrature().area_weights.cwiseProduct(k.values());
  LogMass mass;
  if (!try_log_mass(coeff, u.values(), mass)) {
    throw OutsideAdmissibleError(Admissibility::area, "int K e^u <= 0");
  }
  return mass.log_value;
}

double log_boundary_integral(const DiskMesh& mesh, const BoundaryTrace& h, const ScalarField& u) {
  require_valid(h, mesh.boundary_count(), "h");
  require_valid(u, mesh.node_count(), "u");
  const BoundaryTrace trace = mesh.trace(u);
  const Vector coeff = mesh.quadrature().boundary_weights.cwiseProduct(h.values());
  LogMass mass;
  if (!try_log_mass(coeff, 0.5 * trace.values(), mass)) {
    throw OutsideAdmissibleError(Admissibility::boundary, "int h e^{u/2} <= 0");
  }
  return mass.log_value;
}

EnergyFunctional::EnergyFunctional(const DiskMesh& mesh, const ScalarField& k,
                                   const BoundaryTrace& h)
    : mesh_(&mesh) {
  require_valid(k, mesh.node_count(), "K");
  require_valid(h, mesh.boundary_count(), "h");
  area_coeff_ = mesh.quadrature().area_weights.cwiseProduct(k.values());
  boundary_coeff_ =
      mesh.scatter_boundary(mesh.quadrature().boundary_weights.cwiseProduct(h.values()));
  boundary_weights_ = mesh.boundary_weights_on_nodes();
  area_support_ = support_of(area_coeff_);
  boundary_support_ = support_of(boundary_coeff_);
}

bool EnergyFunctional::try_evaluate(const Vector& u, double rho, EnergyPoint& out,
                                    Admissibility* failed) const {
  require_rho(rho);
  if (static_cast<std::size_t>(u.size()) != mesh_->node_count() || !u.allFinite()) {
    throw InvalidFieldError("energy: u has wrong length or non-finite values");
  }
  out.u = u;
  out.rho = rho;
  out.has_area = rho > 0.0;
  out.has_boundary = rho < kTwoPi;
  if (out.has_area && !log_mass_on(area_coeff_, u, area_support_, 1.0, out.area)) {
    if (failed) *failed = Admissibility::area;
    return false;
  }
  if (out.has_boundary &&
      !log_mass_on(boundary_coeff_, u, boundary_support_, 0.5, out.boundary)) {
    if (failed) *failed = Admissibility::boundary;
    return false;
  }
  if (!out.has_area) out.area = LogMass{0.0, 0.0, Vector::Zero(u.size())};
  if (!out.has_boundary) out.boundary = LogMass{0.0, 0.0, Vector::Zero(u.size())};
  out.stiff_u = mesh_->stiffness().matrix * u;
  out.dirichlet = 0.5 * dirichlet_energy(*mesh_, ScalarField(u));
  out.boundary_linear = 2.0 * boundary_weights_.dot(u);
  return true;
}

EnergyPoint EnergyFunctional::evaluate(const Vector& u, double rho) const {
  EnergyPoint point;
  Admissibility which = Admissibility::area;
  if (!try_evaluate(u, rho, point, &which)) {
    throw OutsideAdmissibleError(which, which == Admissibility::area ? "int K e^u <= 0"
                                                                     : "int h e^{u/2} <= 0");
  }
  return point;
}

EnergyPoint EnergyFunctional::with_rho(const EnergyPoint& point, double rho) const {
  require_rho(rho);
  if ((rho > 0.0 && !point.has_area) || (rho < kTwoPi && !point.has_boundary)) {
    return evaluate(point.u, rho);
  }
  EnergyPoint out = point;
  out.rho = rho;
  return out;
}

EnergyBreakdown EnergyFunctional::breakdown(const EnergyPoint& point) const {
  EnergyBreakdown e;
  const double rho = point.rho;
  e.dirichlet = point.dirichlet;
  e.area_log = rho > 0.0 ? -2.0 * rho * point.area.log_value : 0.0;
  e.boundary_linear = point.boundary_linear;
  e.boundary_log = rho < kTwoPi ? -4.0 * (kTwoPi - rho) * point.boundary.log_value : 0.0;
  e.f_rho = f_correction(rho);
  e.total = e.dirichlet + e.area_log + e.boundary_linear + e.boundary_log + e.f_rho;
  return e;
}

Vector EnergyFunctional::gradient_u(const EnergyPoint& point) const {
  const double rho = point.rho;
  Vector g = point.stiff_u + 2.0 * boundary_weights_;
  if (rho > 0.0) g -= 2.0 * rho * point.area.measure;
  if (rho < kTwoPi) g -= 2.0 * (kTwoPi - rho) * point.boundary.measure;
  return g;
}

double EnergyFunctional::gradient_rho(const EnergyPoint& point) const {
  const double rho = point.rho;
  if (!(rho > 0.0 && rho < kTwoPi)) {
    throw EndpointDerivativeError("dI/drho is unbounded at rho = " + std::to_string(rho));
  }
  return -2.0 * point.area.log_value + 4.0 * point.boundary.log_value -
         4.0 * std::log(kTwoPi - rho) + 2.0 * std::log(rho);
}

LineData EnergyFunctional::line(const EnergyPoint& point, const Vector& direction) const {
  LineData line;
  line.base = &point;
  line.direction = direction;
  const Vector stiff_d = mesh_->stiffness().matrix * direction;
  line.d_stiff_u = direction.dot(point.stiff_u);
  line.d_stiff_d = direction.dot(stiff_d);
  line.d_boundary = boundary_weights_.dot(direction);
  return line;
}

bool EnergyFunctional::change(const LineData& line, double alpha, double rho_new,
                              double delta_rho, double& out) const {
  const EnergyPoint& base = *line.base;
  const double rho0 = base.rho;
  const double q0 = kTwoPi - rho0;
  const double q_new = kTwoPi - rho_new;
  if ((rho_new > 0.0 && !base.has_area) || (rho_new < kTwoPi && !base.has_boundary)) {
    throw PreconditionError("energy change across an endpoint of [0, 2pi]");
  }

  double total = alpha * line.d_stiff_u + 0.5 * alpha * alpha * line.d_stiff_d;
  total += 2.0 * alpha * line.d_boundary;

  if (base.has_area) {
    double d_la = 0.0;
    if (rho_new > 0.0 &&
        !log_mass_change(base.area.measure, line.direction, alpha, 1.0, area_support_, d_la)) {
      return false;
    }
    total += -2.0 * rho_new * d_la - 2.0 * delta_rho * base.area.log_value;
  }
  if (base.has_boundary) {
    double d_lb = 0.0;
    if (q_new > 0.0 && !log_mass_change(base.boundary.measure, line.direction, alpha, 0.5,
                                        boundary_support_, d_lb)) {
      return false;
    }
    total += -4.0 * q_new * d_lb + 4.0 * delta_rho * base.boundary.log_value;
  }
  total += 4.0 * xlogx_change(q0, -delta_rho) + 2.0 * delta_rho +
           2.0 * xlogx_change(rho0, delta_rho);
  if (!std::isfinite(total)) return false;
  out = total;
  return true;
}

EnergyBreakdown energy(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                       const ScalarField& u, double rho) {
  require_rho(rho);
  EnergyFunctional functional(mesh, k, h);
  return functional.breakdown(functional.evaluate(u.values(), rho));
}

double energy_limit0(const DiskMesh& mesh, const BoundaryTrace& h, const ScalarField& u) {
  const EnergyFunctional functional(mesh, ScalarField::constant(mesh.node_count(), 0.0), h);
  return functional.breakdown(functional.evaluate(u.values(), 0.0)).total;
}

double energy_limit2pi(const DiskMesh& mesh, const ScalarField& k, const ScalarField& u) {
  const EnergyFunctional functional(mesh, k, BoundaryTrace::constant(mesh.boundary_count(), 0.0));
  return functional.breakdown(functional.evaluate(u.values(), kTwoPi)).total;
}

ScalarField grad_u(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                   const ScalarField& u, double rho) {
  const EnergyFunctional functional(mesh, k, h);
  return ScalarField(functional.gradient_u(functional.evaluate(u.values(), rho)));
}

double grad_rho(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                const ScalarField& u, double rho) {
  if (!(rho > 0.0 && rho < kTwoPi)) {
    throw EndpointDerivativeError("dI/drho is unbounded at rho = " + std::to_string(rho));
  }
  const EnergyFunctional functional(mesh, k, h);
  return functional.gradient_rho(functional.evaluate(u.values(), rho));
}

double optimal_rho(double log_area, double log_boundary) {
  const double ratio = std::exp(2.0 * log_boundary - log_area);
  if (std::isinf(ratio)) return 0.0;
  return 8.0 * kPi * kPi / ((4.0 * kPi + ratio) + std::sqrt(ratio * (ratio + 8.0 * kPi)));
}

}  // namespace diskcurv
