#include "uregion/regions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "uregion/jordan.hpp"
#include "uregion/parallel.hpp"

namespace uregion {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCoordSlack = 1e-12;
constexpr double kThetaSlack = 1e-12;

void require_theta(double theta) {
  if (!(theta > 0.0 && theta <= kPi / 2 + kThetaSlack)) {
    throw std::invalid_argument("theta must lie in (0, pi/2], got " + std::to_string(theta));
  }
}

// sqrt(1 - 4 d), clamping roundoff just below zero.
double root_gap(double d) {
  double x = 1.0 - 4.0 * d;
  if (x < 0.0) {
    if (x < -4.0 * kCoordSlack) throw std::invalid_argument("variance exceeds 1/4");
    x = 0.0;
  }
  return std::sqrt(x);
}

// Shared decision rule: `m1` is the R1 margin (preferred on overlap) and
// `m2` the R2 margin, both <= 0 inside their part.
Membership decide(double m1, double m2, double tol) {
  Part part;
  double margin;
  if (m1 <= tol) {
    part = Part::R1;
    margin = m1;
  } else {
    margin = std::max(m2, -m1);
    part = m2 <= tol ? Part::R2 : Part::None;
  }
  Verdict verdict = margin < -tol ? Verdict::Interior : (margin <= tol ? Verdict::Boundary : Verdict::Outside);
  if (verdict == Verdict::Outside) part = Part::None;
  return Membership{verdict, part, margin};
}

void require_tol(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

}  // namespace

VariancePoint VariancePoint::make(double dA, double dB) {
  for (double v : {dA, dB}) {
    if (!(v >= -kCoordSlack && v <= 0.25 + kCoordSlack)) {
      throw std::invalid_argument("variance coordinate outside [0, 1/4]: " + std::to_string(v));
    }
  }
  return VariancePoint{dA, dB};
}

RegionSpec RegionSpec::make(double theta, DimClass dim_class) {
  require_theta(theta);
  return RegionSpec{std::min(theta, kPi / 2), dim_class};
}

RotatedCoords rotate45(const VariancePoint& p) {
  const double u = p.dA - 0.125;
  const double v = p.dB - 0.125;
  const double k = std::numbers::sqrt2 / 2;
  return RotatedCoords{k * (u + v), k * (v - u)};
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Interior: return "interior";
    case Verdict::Boundary: return "boundary";
    case Verdict::Outside: return "outside";
  }
  return "?";
}

std::string_view to_string(Part p) {
  switch (p) {
    case Part::R1: return "R1";
    case Part::R2: return "R2";
    case Part::None: return "none";
  }
  return "?";
}

std::string_view to_string(DimClass c) { return c == DimClass::Qubit ? "qubit" : "qudit"; }

double qubit_sum_threshold(double theta) {
  const double c = std::cos(2.0 * theta);
  return (1.0 + c * c) / 4.0;
}

double ellipse_form(const VariancePoint& p, double theta) {
  const double plus = 1.0 + std::cos(4.0 * theta);
  const double minus = 1.0 - std::cos(4.0 * theta);
  if (plus < 1e-14 || minus < 1e-14) throw std::invalid_argument("ellipse degenerates at this theta");
  const auto r = rotate45(p);
  return 64.0 * r.x1 * r.x1 / plus + 64.0 * r.y1 * r.y1 / minus;
}

double qubit_constraint(const VariancePoint& p, double theta) {
  const double c = std::cos(2.0 * theta);
  return (1.0 + c * c) - 4.0 * (p.dA + p.dB) - 2.0 * std::abs(c) * root_gap(p.dA) * root_gap(p.dB);
}

double qudit_parabola_gap(const VariancePoint& p, double theta) {
  const double s = std::sin(theta);
  return 2.0 - root_gap(p.dA) - root_gap(p.dB) - 2.0 * s * s;
}

Membership qubit_membership(const VariancePoint& p, double theta, double tol) {
  require_theta(theta);
  require_tol(tol);
  const double c = std::cos(2.0 * theta);
  const double split = (1.0 + c * c) - 4.0 * (p.dA + p.dB);
  const double m1 = split;
  const double m2 = std::max(-split, qubit_constraint(p, theta));
  return decide(m1, m2, tol);
}

Membership qudit_membership(const VariancePoint& p, double theta, double tol) {
  require_theta(theta);
  require_tol(tol);
  const double gap = qudit_parabola_gap(p, theta);
  const double m1 = std::max(-gap, qubit_constraint(p, theta));
  const double m2 = gap;
  return decide(m1, m2, tol);
}

Membership membership(const VariancePoint& p, const RegionSpec& spec, double tol) {
  return spec.dim_class == DimClass::Qubit ? qubit_membership(p, spec.theta, tol)
                                           : qudit_membership(p, spec.theta, tol);
}

VariancePoint ellipse_point(double theta, double phi) {
  const double a = std::sin(phi);
  const double b = std::sin(phi - 2.0 * theta);
  return VariancePoint{a * a / 4.0, b * b / 4.0};
}

std::vector<VariancePoint> qubit_boundary(double theta, std::size_t n) {
  require_theta(theta);
  if (n < 8) throw std::invalid_argument("qubit_boundary needs at least 8 points");
  // The line dA + dB = threshold meets the ellipse at phi = pi/2 and
  // phi = 2 theta + pi/2; the lower arc is the longer of the two pieces.
  double from;
  double to;
  if (2.0 * theta <= kPi / 2) {
    from = 2.0 * theta + kPi / 2;
    to = 1.5 * kPi;
  } else {
    from = kPi / 2;
    to = 2.0 * theta + kPi / 2;
  }
  std::vector<VariancePoint> out;
  out.reserve(n);
  out.push_back(VariancePoint{0.25, 0.25});
  const std::size_t arc = n - 1;
  for (std::size_t k = 0; k < arc; ++k) {
    const double phi = from + (to - from) * static_cast<double>(k) / static_cast<double>(arc - 1);
    out.push_back(ellipse_point(theta, phi));
  }
  return out;
}

std::vector<VariancePoint> qudit_boundary(double theta, std::size_t n) {
  require_theta(theta);
  if (theta > kPi / 4 + kThetaSlack) {
    throw BoxBoundaryFallback("qudit region covers the whole box for theta > pi/4");
  }
  if (n < 8) throw std::invalid_argument("qudit_boundary needs at least 8 points");
  const double c = std::max(0.0, std::cos(2.0 * theta));
  const double arc_len = std::max(0.0, kPi / 2 - 2.0 * theta);
  const std::size_t n_parabola = std::max<std::size_t>(2, n / 2);
  const std::size_t n_rest = n - n_parabola;
  const std::size_t n_arc = arc_len > 1e-12 ? std::max<std::size_t>(2, (n_rest - 1) / 2) : 0;

  std::vector<VariancePoint> out;
  out.reserve(n);
  auto push = [&](VariancePoint p) {
    if (!out.empty() && std::abs(out.back().dA - p.dA) < 1e-15 && std::abs(out.back().dB - p.dB) < 1e-15) return;
    out.push_back(p);
  };
  // sqrt(1 - 4 dA) = w, sqrt(1 - 4 dB) = 1 + c - w with w in [c, 1].
  for (std::size_t k = 0; k < n_parabola; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(n_parabola - 1);
    const double w = c * (1.0 - f) + f;
    const double v = 1.0 + c - w;
    push(VariancePoint{(1.0 - w * w) / 4.0, (1.0 - v * v) / 4.0});
  }
  // Upper-left arc: (0, sin^2 2t / 4) to (cos^2 2t / 4, 1/4).
  for (std::size_t k = 0; k < n_arc; ++k) {
    const double phi = kPi - arc_len * static_cast<double>(k) / static_cast<double>(n_arc - 1);
    push(ellipse_point(theta, phi));
  }
  push(VariancePoint{0.25, 0.25});
  // Lower-right arc: (1/4, cos^2 2t / 4) to (sin^2 2t / 4, 0).
  for (std::size_t k = 0; k < n_arc; ++k) {
    const double phi = kPi / 2 - arc_len * static_cast<double>(k) / static_cast<double>(n_arc - 1);
    push(ellipse_point(theta, phi));
  }
  if (out.size() > 1 && std::abs(out.back().dA - out.front().dA) < 1e-15 &&
      std::abs(out.back().dB - out.front().dB) < 1e-15) {
    out.pop_back();
  }
  return out;
}

QuadraticCoefficients quadratic_coefficients(const VariancePoint& p, double theta, int sign_z, int sign_x) {
  if (!(theta > 0.0 && theta < kPi / 2)) throw std::invalid_argument("quadratic_coefficients needs theta in (0, pi/2)");
  if (std::abs(sign_z) != 1 || std::abs(sign_x) != 1) throw std::invalid_argument("signs must be +1 or -1");
  const double a = 1.0 + sign_z * root_gap(p.dA);
  const double b = 1.0 + sign_x * root_gap(p.dB);
  const double c = std::cos(2.0 * theta);
  const double s2 = std::pow(std::sin(2.0 * theta), 2);
  const double t = std::tan(theta);
  const double sec2 = 1.0 / std::pow(std::cos(theta), 2);
  return QuadraticCoefficients{t * t, -sec2 * (a + b), (a * a + b * b - 2.0 * c * a * b) / s2};
}

AlphaFeasibility alpha_feasible(const VariancePoint& p, double theta) {
  require_theta(theta);
  const double c = std::cos(2.0 * theta);
  const double one_minus_c = 1.0 - c;  // 2 sin^2 theta > 0
  const double x = root_gap(p.dA);
  const double y = root_gap(p.dB);
  // Minus-minus first: it owns the smallest alpha0 and the alpha = 0 witness.
  constexpr std::array<std::array<int, 2>, 4> kSigns{{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};
  for (const auto& [sz, sx] : kSigns) {
    const double a = 1.0 + sz * x;
    const double b = 1.0 + sx * y;
    // F(alpha) / f1 = alpha^2 - 2 alpha (a + b)/(1 - c) + (a^2 + b^2 - 2 c a b)/(1 - c)^2
    const double lin = (a + b) / one_minus_c;
    const double cst = (a * a + b * b - 2.0 * c * a * b) / (one_minus_c * one_minus_c);
    const double alpha = std::clamp(lin, 0.0, 1.0);
    const double value = alpha * alpha - 2.0 * lin * alpha + cst;
    if (value <= 1e-12) return AlphaFeasibility{true, alpha, sz, sx};
  }
  return AlphaFeasibility{};
}

VariancePoint VarianceTransform::to_projector(double var_a, double var_b) const {
  return VariancePoint::make(var_a / scale_a2, var_b / scale_b2);
}

std::pair<double, double> VarianceTransform::to_observable(const VariancePoint& p) const {
  return {p.dA * scale_a2, p.dB * scale_b2};
}

ObservableRegion region_for_observables(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("region_for_observables: dimensions differ");
  const std::size_t d = a.dim();
  if (d == 2) {
    const auto fa = shift_scale_to_projector(a);
    const auto fb = shift_scale_to_projector(b);
    const auto angles = principal_angles(fa.projector, fb.projector);
    const double theta = angles.empty() ? kPi / 2 : angles.front();
    return ObservableRegion{RegionSpec::make(theta, DimClass::Qubit),
                            VarianceTransform{fa.scale * fa.scale, fb.scale * fb.scale}};
  }
  auto as_rank_one = [](const ComplexMatrix& m) {
    try {
      auto p = Projector::from_matrix(m);
      if (p.rank() == 1) return p;
    } catch (const std::invalid_argument&) {
    }
    throw OutOfAnalyticScope("analytic qudit regions need rank-1 projectors");
  };
  const auto pa = as_rank_one(a);
  const auto pb = as_rank_one(b);
  const auto dec = jordan_decompose(pa, pb);
  const auto angles = dec.angles();
  if (angles.empty()) {
    // Identical rank-1 projectors: dA = dB for every state.
    return ObservableRegion{RegionSpec::make(kPi / 2, DimClass::Qubit), VarianceTransform{}};
  }
  return ObservableRegion{RegionSpec::make(angles.front(), DimClass::Qudit), VarianceTransform{}};
}

VariancePoint grid_center(std::size_t i, std::size_t j, std::size_t resolution) {
  const double cell = 0.25 / static_cast<double>(resolution);
  return VariancePoint{(static_cast<double>(i) + 0.5) * cell, (static_cast<double>(j) + 0.5) * cell};
}

std::vector<Membership> classify_grid(const RegionSpec& spec, std::size_t resolution, unsigned threads, double tol) {
  if (resolution == 0) throw std::invalid_argument("grid resolution must be positive");
  std::vector<Membership> out(resolution * resolution);
  parallel_chunks(resolution, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < resolution; ++j)
      out[i * resolution + j] = membership(grid_center(i, j, resolution), spec, tol);
  });
  return out;
}

}  // namespace uregion
