#pragma once

#include "diskcurv/errors.hpp"
#include "diskcurv/field.hpp"
#include "diskcurv/mesh.hpp"

namespace diskcurv {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// The five summands of I(u, rho) and their sum.
struct EnergyBreakdown {
  double dirichlet = 0.0;        // 1/2 int |grad u|^2
  double area_log = 0.0;         // -2 rho log int K e^u
  double boundary_linear = 0.0;  // 2 int_{S^1} u
  double boundary_log = 0.0;     // -4 (2pi - rho) log int h e^{u/2}
  double f_rho = 0.0;            // f(rho)
  double total = 0.0;
};

// log sum_i c_i exp(x_i), evaluated with the largest exponent factored out.
// `measure` receives c_i exp(x_i) / sum (same length as c). Entries with
// c_i == 0 are ignored when choosing the shift.
struct LogMass {
  double log_value = 0.0;
  double shift = 0.0;
  Vector measure;
};
// Returns false (and leaves `out` unspecified) if the sum is not positive.
bool try_log_mass(const Vector& coefficients, const Vector& exponents, LogMass& out);

// f(rho) = 4(2pi - rho) log(2pi - rho) + 2 rho + 2 rho log rho on [0, 2pi],
// with the endpoint limits returned as constants.
double f_correction(double rho);
double f_correction_derivative(double rho);
// f(rho + delta) - f(rho), accurate for small delta.
double f_correction_change(double rho, double delta);

// log int K e^u and log int h e^{u/2}. Throw OutsideAdmissibleError when the
// integral is not positive.
double log_area_integral(const DiskMesh& mesh, const ScalarField& k, const ScalarField& u);
double log_boundary_integral(const DiskMesh& mesh, const BoundaryTrace& h, const ScalarField& u);

EnergyBreakdown energy(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                       const ScalarField& u, double rho);
double energy_limit0(const DiskMesh& mesh, const BoundaryTrace& h, const ScalarField& u);
double energy_limit2pi(const DiskMesh& mesh, const ScalarField& k, const ScalarField& u);

ScalarField grad_u(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                   const ScalarField& u, double rho);
// Throws EndpointDerivativeError for rho outside the open interval.
double grad_rho(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h,
                const ScalarField& u, double rho);

// Minimizer in rho of I(u, .) given LA = log int K e^u and LB = log int h e^{u/2}:
// the root of (2pi - rho)^2 / rho = exp(2 LB - LA) in (0, 2pi).
double optimal_rho(double log_area, double log_boundary);

// Cached evaluation of the discrete functional at one point.
struct EnergyPoint {
  Vector u;
  double rho = 0.0;
  Vector stiff_u;
  double dirichlet = 0.0;
  double boundary_linear = 0.0;
  bool has_area = false;
  bool has_boundary = false;
  LogMass area;      // measure is node length
  LogMass boundary;  // measure is node length (zero on interior nodes)
};

// Per-direction data for evaluating I(u + alpha d, rho') - I(u, rho).
struct LineData {
  const EnergyPoint* base = nullptr;
  Vector direction;
  double d_stiff_u = 0.0;
  double d_stiff_d = 0.0;
  double d_boundary = 0.0;
};

// The discrete functional for fixed data (K, h) on a mesh. At rho = 0 the
// area term is dropped and at rho = 2pi the boundary log term is dropped, so
// the same object evaluates I_0 and I_2pi without touching the missing data.
class EnergyFunctional {
 public:
  EnergyFunctional(const DiskMesh& mesh, const ScalarField& k, const BoundaryTrace& h);

  const DiskMesh& mesh() const noexcept { return *mesh_; }
  const Vector& area_coefficients() const noexcept { return area_coeff_; }
  const Vector& boundary_coefficients() const noexcept { return boundary_coeff_; }
  const Vector& boundary_weights() const noexcept { return boundary_weights_; }

  // Throws OutsideAdmissibleError if a needed log integral is undefined.
  EnergyPoint evaluate(const Vector& u, double rho) const;
  // Non-throwing variant for line searches.
  bool try_evaluate(const Vector& u, double rho, EnergyPoint& out,
                    Admissibility* failed = nullptr) const;
  // Re-evaluates only the rho-dependent parts.
  EnergyPoint with_rho(const EnergyPoint& point, double rho) const;

  EnergyBreakdown breakdown(const EnergyPoint& point) const;
  Vector gradient_u(const EnergyPoint& point) const;
  double gradient_rho(const EnergyPoint& point) const;

  LineData line(const EnergyPoint& point, const Vector& direction) const;
  // I(u + alpha d, rho_new) - I(u, rho), accurate when the step is small.
  // `delta_rho` = rho_new - rho must be supplied by the caller at full
  // accuracy. Returns false if the trial point leaves the admissible set.
  bool change(const LineData& line, double alpha, double rho_new, double delta_rho,
              double& out) const;

 private:
  const DiskMesh* mesh_;
  Vector area_coeff_;        // w_i K_i
  Vector boundary_coeff_;    // b_i h_i scattered to nodes
  Vector boundary_weights_;  // b_i scattered to nodes
  std::vector<int> area_support_;
  std::vector<int> boundary_support_;
};

}  // namespace diskcurv
