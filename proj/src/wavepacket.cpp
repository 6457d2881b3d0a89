#include "uregion/wavepacket.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace uregion {

namespace {

double tau(const GaussianPacket& p) { return p.hbar * p.t / (p.m * p.a * p.a); }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

}  // namespace

GaussianPacket GaussianPacket::make(double a, double k0, double m, double hbar, double t) {
  require_positive(a, "a");
  require_positive(m, "m");
  require_positive(hbar, "hbar");
  if (!std::isfinite(k0)) throw std::invalid_argument("k0 must be finite");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be non-negative and finite");
  return GaussianPacket{a, k0, m, hbar, t};
}

Moments position_stats(const GaussianPacket& p) {
  const double v = p.hbar * p.t / (p.m * p.a);  // hbar t / (m a)
  return Moments{v * p.k0, p.a * p.a / 2.0 + v * v / 2.0 + v * v * p.k0 * p.k0};
}

Moments momentum_stats(const GaussianPacket& p) {
  const double q = p.hbar / p.a;
  return Moments{q * p.k0, q * q / 2.0 + q * q * p.k0 * p.k0};
}

Spreads spreads(const GaussianPacket& p) {
  const double v = p.hbar * p.t / (p.m * p.a);
  return Spreads{std::sqrt(p.a * p.a / 2.0 + v * v / 2.0), p.hbar / (std::numbers::sqrt2 * p.a)};
}

std::complex<double> wavefunction(const GaussianPacket& p, double x) {
  using C = std::complex<double>;
  const C w(1.0, tau(p));
  const C z(x / p.a, -p.k0);
  const double norm = 1.0 / std::sqrt(p.a * std::sqrt(std::numbers::pi));
  return norm / std::sqrt(w) * std::exp(-0.5 * p.k0 * p.k0 - z * z / (2.0 * w));
}

std::complex<double> wavefunction_derivative(const GaussianPacket& p, double x) {
  using C = std::complex<double>;
  return -wavefunction(p, x) * C(x / p.a, -p.k0) / (p.a * C(1.0, tau(p)));
}

NumericMoments quadrature_moments(const GaussianPacket& p) {
  using C = std::complex<double>;
  using boost::math::quadrature::gauss_kronrod;
  const double mid = position_stats(p).mean;
  const double w = spreads(p).delta_x;
  auto integrate = [&](auto f) { return gauss_kronrod<double, 61>::integrate(f, mid - 12.0 * w, mid + 12.0 * w, 15, 1e-13); };
  auto density = [&](double x) { return std::norm(wavefunction(p, x)); };
  NumericMoments out{};
  out.position.mean = integrate([&](double x) { return density(x) * x; });
  out.position.second = integrate([&](double x) { return density(x) * x * x; });
  out.momentum.mean = integrate([&](double x) {
    return (std::conj(wavefunction(p, x)) * C(0.0, -p.hbar) * wavefunction_derivative(p, x)).real();
  });
  out.momentum.second = integrate([&](double x) { return p.hbar * p.hbar * std::norm(wavefunction_derivative(p, x)); });
  return out;
}

bool xp_membership(double x, double y, double hbar) {
  return x > 0.0 && y > 0.0 && x * y >= hbar / 2.0 - 1e-12 * hbar;
}

std::optional<GaussianPacket> solve_packet_for(double x, double y, double m, double hbar) {
  require_positive(x, "target delta x");
  require_positive(y, "target delta p");
  require_positive(m, "m");
  require_positive(hbar, "hbar");
  if (!xp_membership(x, y, hbar)) return std::nullopt;
  const double a = hbar / (std::numbers::sqrt2 * y);
  const double gap = std::max(0.0, 2.0 * x * x - a * a);
  return GaussianPacket{a, 0.0, m, hbar, (m * a / hbar) * std::sqrt(gap)};
}

}  // namespace uregion
