#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "diskcurv/field.hpp"
#include "diskcurv/mesh.hpp"

namespace diskcurv {

// One evaluation of an inequality `left <= right` with the constant that was
// added to the right side.
struct DeficitReport {
  std::string family;
  double param = 0.0;
  double left = 0.0;
  double right = 0.0;
  double deficit = 0.0;  // right - left
  double constant_used = 0.0;
};

// u(z) = 2 log |phi_a'(z)| for the disk automorphism phi_a(z) = (z - a)/(1 - conj(a) z).
ScalarField mobius_field(const DiskMesh& mesh, Point2 a);

// u(x) = 2 log(2 lambda / (1 + lambda^2 |x - c|^2)). Concentrations beyond a
// quarter of the radial resolution are compressed by a tanh cap so that the
// bubble never becomes narrower than about two rings.
ScalarField interior_bubble(const DiskMesh& mesh, double lambda, Point2 center);
double effective_concentration(const DiskMesh& mesh, double lambda);

// log((e^a + e^b) / 2) node by node.
ScalarField merge_bubbles(const ScalarField& a, const ScalarField& b);

// log avg_{S^1} e^u <= (1/4pi) int |grad u|^2 + avg_{S^1} u.
DeficitReport lebedev_milin_deficit(const DiskMesh& mesh, const ScalarField& u);
// log int_{S^1} e^u <= (1/4pi) int |grad u|^2 + avg_D u + C.
DeficitReport trace_interior_mean_deficit(const DiskMesh& mesh, const ScalarField& u,
                                          double constant = 0.0);

enum class MtVariant { dirichlet, mean_form, boundary_mean_form };
std::string to_string(MtVariant variant);

// dirichlet:          log int e^u <= (1/16pi) int |grad u|^2 + C   (u = 0 on S^1)
// mean_form:          log int e^u <= (1/8pi) int |grad u|^2 + avg_D u + C
// boundary_mean_form: log int e^u <= (1/8pi) int |grad u|^2 + avg_{S^1} u + C
DeficitReport mt_interior_deficit(const DiskMesh& mesh, const ScalarField& u, MtVariant variant,
                                  double constant = 0.0);

// (1/4pi) int <grad w, grad v> - (avg_{S^1} v - avg_D v) for the auxiliary
// Neumann solution w; zero up to round-off for every v.
double weak_modified_identity_defect(const DiskMesh& mesh, const ScalarField& w,
                                     const ScalarField& v);

struct DiskRegion {
  Point2 center;
  double radius = 0.0;
};
struct ArcRegion {
  double center_angle = 0.0;
  double half_width = 0.0;
};
using Region = std::variant<DiskRegion, ArcRegion>;

struct LocalOptions {
  double delta = 0.2;
  double epsilon = 0.1;
  double constant = 0.0;
};

// Interior disk:  16 pi log int_{S1} e^u <= int_{S1^delta} |grad u|^2 + eps int |grad u|^2 + C
// Boundary arc:   4 pi log int_{G1} e^u  <= int_{G1^delta} |grad u|^2 + eps int |grad u|^2 + C
// u must have zero disk mean. Regions are resolved on triangle centroids.
DeficitReport local_deficit(const DiskMesh& mesh, const ScalarField& u, const Region& region,
                            const LocalOptions& options = {});

// l regions with disjoint delta-neighbourhoods, each carrying at least a
// fraction gamma of the total mass:
//   interior: 8 l pi log int_D e^u     <= (1 + l eps) int |grad u|^2 + C
//   boundary: 4 l pi log int_{S^1} e^u <= (1 + l eps) int |grad u|^2 + C
// All regions must be of the same kind.
DeficitReport multi_region_deficit(const DiskMesh& mesh, const ScalarField& u,
                                   const std::vector<Region>& regions, double gamma,
                                   const LocalOptions& options = {});
// Smallest fraction of the total mass carried by any one region.
double region_mass_fraction(const DiskMesh& mesh, const ScalarField& u,
                            const std::vector<Region>& regions);

// Least-squares line y = slope * x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Growth rate of log int e^{u - avg u} against int |grad u|^2 along a
// concentrating family: one bubble versus a symmetric pair of bubbles.
struct SlopeComparison {
  LineFit one_region;
  LineFit two_regions;
};
SlopeComparison interior_slope_comparison(const DiskMesh& mesh,
                                          const std::vector<double>& lambdas);
SlopeComparison boundary_slope_comparison(const DiskMesh& mesh,
                                          const std::vector<double>& radii);

struct InequalityOptions {
  std::uint64_t seed = 20240611;
  int random_fields = 8;
  // Slack for the sharp Lebedev-Milin inequality on this mesh.
  double lm_tolerance = 1e-6;
  double identity_tolerance = 1e-10;
  LocalOptions local;
};

struct InequalitySuite {
  std::vector<DeficitReport> reports;
  // "family param: message" for every asserted property that failed.
  std::vector<std::string> violations;
  SlopeComparison interior_slopes;
  SlopeComparison boundary_slopes;
  double identity_defect = 0.0;
};

// Runs every family: Lebedev-Milin on constants, Mobius factors, bubbles and
// random smooth fields (asserted), Moser-Trudinger variants and local
// deficits (recorded), the auxiliary-Neumann identity and the slope ordering
// (asserted).
InequalitySuite run_inequality_suite(const DiskMesh& mesh, const InequalityOptions& options);

// Random smooth field sum_{m<=4} r^m (a_m cos m t + b_m sin m t).
ScalarField random_smooth_field(const DiskMesh& mesh, std::uint64_t seed, double scale = 1.0);

// `family,param,left,right,deficit,constant_used`
void write_deficit_csv(const std::vector<DeficitReport>& reports, std::ostream& out);

}  // namespace diskcurv
