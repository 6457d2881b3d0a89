#pragma once

// Free Gaussian wave packet in one dimension: closed-form moments, spreads,
// the position-momentum region x y >= hbar/2 and its constructive inverse.

#include <complex>
#include <optional>

namespace uregion {

struct GaussianPacket {
  double a = 1.0;   // width at t = 0
  double k0 = 0.0;  // carrier wavenumber in units of 1/a
  double m = 1.0;
  double hbar = 1.0;
  double t = 0.0;

  // Validates a, m, hbar > 0, t >= 0 and finiteness.
  static GaussianPacket make(double a, double k0, double m, double hbar, double t);
};

struct Moments {
  double mean;
  double second;
};

struct Spreads {
  double delta_x;
  double delta_p;

  double product() const { return delta_x * delta_p; }
};

Moments position_stats(const GaussianPacket& p);
Moments momentum_stats(const GaussianPacket& p);
// Standard deviations: sqrt(a^2/2 + hbar^2 t^2 / (2 m^2 a^2)) and hbar / (sqrt 2 a).
Spreads spreads(const GaussianPacket& p);

// psi(x, t) = (a sqrt pi)^(-1/2) (1 + i tau)^(-1/2) exp(-k0^2/2)
//             exp(-(x/a - i k0)^2 / (2 (1 + i tau)))   with tau = hbar t / (m a^2).
std::complex<double> wavefunction(const GaussianPacket& p, double x);

// d psi / dx = -psi (x/a - i k0) / (a (1 + i tau)).
std::complex<double> wavefunction_derivative(const GaussianPacket& p, double x);

// <x>, <x^2>, <p>, <p^2> of the explicit wavefunction by adaptive
// Gauss-Kronrod quadrature over mean +- 12 delta_x; p acts as -i hbar d/dx.
struct NumericMoments {
  Moments position;
  Moments momentum;
};
NumericMoments quadrature_moments(const GaussianPacket& p);

// x > 0, y > 0 and x y >= hbar/2 up to a relative slack of 1e-12.
bool xp_membership(double x, double y, double hbar = 1.0);

// Packet with k0 = 0 whose spreads equal (x, y); nullopt when x y < hbar/2.
// Throws std::invalid_argument for non-positive inputs.
std::optional<GaussianPacket> solve_packet_for(double x, double y, double m = 1.0, double hbar = 1.0);

}  // namespace uregion
