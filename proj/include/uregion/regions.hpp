#pragma once

// Analytic variance regions of a projector pair A = |0><0|, B = |b><b| at
// principal angle theta, for qubits and for qudits (d >= 3).
//
// Qubit region R(2) = R1 u R2 with c = cos 2 theta:
//   R1: dA + dB >= (1 + c^2) / 4
//   R2: dA + dB <= (1 + c^2) / 4 and 64 x1^2/(1 + cos 4t) + 64 y1^2/(1 - cos 4t) <= 1
// where (x1, y1) is (dA - 1/8, dB - 1/8) rotated by 45 degrees. On the R2 side
// the ellipse test is evaluated in the division-free form
//   h = (1 + c^2) - 4 (dA + dB) - 2 |c| sqrt((1 - 4 dA)(1 - 4 dB)) <= 0,
// which is the same set and stays finite at theta = pi/4 and pi/2.
//
// Qudit region R(d) = R1 u R2 with t = 2 - sqrt(1 - 4 dA) - sqrt(1 - 4 dB):
//   R1: t >= 2 sin^2 theta and h <= 0
//   R2: t <  2 sin^2 theta

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "uregion/qcore.hpp"

namespace uregion {

inline constexpr double kMembershipTol = 1e-9;

struct VariancePoint {
  double dA = 0.0;
  double dB = 0.0;

  // Validates both coordinates lie in [-1e-12, 1/4 + 1e-12].
  static VariancePoint make(double dA, double dB);
};

enum class DimClass { Qubit, Qudit };

struct RegionSpec {
  double theta;
  DimClass dim_class;

  // Validates theta in (0, pi/2].
  static RegionSpec make(double theta, DimClass dim_class);
};

struct RotatedCoords {
  double x1;
  double y1;
};
RotatedCoords rotate45(const VariancePoint& p);

enum class Verdict { Interior, Boundary, Outside };
enum class Part { R1, R2, None };

struct Membership {
  Verdict verdict;
  Part which_part;
  // Signed value of the binding constraint, in expression units: negative
  // inside, and |margin| is the distance to the nearest change of verdict or
  // part. Boundary iff |margin| <= tol.
  double margin;
};

std::string_view to_string(Verdict v);
std::string_view to_string(Part p);
std::string_view to_string(DimClass c);

// The R1/R2 split threshold (1 + cos^2 2 theta) / 4.
double qubit_sum_threshold(double theta);
// 64 x1^2/(1 + cos 4 theta) + 64 y1^2/(1 - cos 4 theta). Undefined (throws)
// where the ellipse degenerates, i.e. theta = pi/4 or pi/2.
double ellipse_form(const VariancePoint& p, double theta);
// h above; <= 0 exactly on the qubit region.
double qubit_constraint(const VariancePoint& p, double theta);
// t - 2 sin^2 theta; < 0 on the qudit R2 part.
double qudit_parabola_gap(const VariancePoint& p, double theta);

Membership qubit_membership(const VariancePoint& p, double theta, double tol = kMembershipTol);
Membership qudit_membership(const VariancePoint& p, double theta, double tol = kMembershipTol);
Membership membership(const VariancePoint& p, const RegionSpec& spec, double tol = kMembershipTol);

// Variance point of the equatorial Bloch state r = (sin phi, 0, cos phi).
VariancePoint ellipse_point(double theta, double phi);

// Closed outline of the qubit region: the box corner (1/4, 1/4) followed by
// the lower ellipse arc between its tangent points on the edges dB = 1/4 and
// dA = 1/4. Arc points are Boundary; the corner is a domain corner.
std::vector<VariancePoint> qubit_boundary(double theta, std::size_t n);

// Closed outline of the qudit R1 part for theta <= pi/4: the parabolic arc
// t = 2 sin^2 theta, the ellipse arcs from the axes to the box edges, and the
// box corner. Throws BoxBoundaryFallback for theta > pi/4.
std::vector<VariancePoint> qudit_boundary(double theta, std::size_t n);

// Coefficients of F(alpha) = f1 alpha^2 + f2 alpha + f3 for one sign choice
// r_z = 1 - alpha + sign_z sqrt(1 - 4 dA), and the matching sign_x on
// sqrt(1 - 4 dB). Requires theta in (0, pi/2).
struct QuadraticCoefficients {
  double f1;
  double f2;
  double f3;

  double alpha0() const { return -f2 / (2.0 * f1); }
  double operator()(double alpha) const { return (f1 * alpha + f2) * alpha + f3; }
};
QuadraticCoefficients quadratic_coefficients(const VariancePoint& p, double theta, int sign_z, int sign_x);

struct AlphaFeasibility {
  bool feasible = false;
  std::optional<double> alpha_witness;
  int sign_z = 0;
  int sign_x = 0;
};
// Whether some alpha in [0, 1] and sign combination satisfies F(alpha) <= 0.
// Evaluates F / f1, which has a finite limit at theta = pi/2.
AlphaFeasibility alpha_feasible(const VariancePoint& p, double theta);

// Maps observable variances to the projector-pair region: dO = scale^2 dP.
struct VarianceTransform {
  double scale_a2 = 1.0;
  double scale_b2 = 1.0;

  VariancePoint to_projector(double var_a, double var_b) const;
  std::pair<double, double> to_observable(const VariancePoint& p) const;
};

struct ObservableRegion {
  RegionSpec spec;
  VarianceTransform transform;
};

// Qubit: any pair of non-degenerate Hermitian observables. d >= 3: rank-1
// projectors only (OutOfAnalyticScope otherwise). Commuting pairs that are
// identical map to the qubit region at theta = pi/2, the diagonal dA = dB.
ObservableRegion region_for_observables(const ComplexMatrix& a, const ComplexMatrix& b);

// Cell-center classification of [0, 1/4]^2, row-major with the dA index
// outer. Deterministic for any worker count.
std::vector<Membership> classify_grid(const RegionSpec& spec, std::size_t resolution, unsigned threads = 1,
                                      double tol = kMembershipTol);
VariancePoint grid_center(std::size_t i, std::size_t j, std::size_t resolution);

}  // namespace uregion
