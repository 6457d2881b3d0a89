#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "uregion/wavepacket.hpp"

using namespace uregion;

namespace {

using boost::math::quadrature::gauss_kronrod;

double integrate(const auto& f, double lo, double hi) {
  return gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13);
}

struct TestMoments {
  double x;
  double x2;
  double p;
  double p2;
};

// Moments of the explicit wavefunction by adaptive quadrature; momentum via
// the analytic x-derivative psi' = -psi (x/a - i k0) / (a (1 + i tau)).
TestMoments test_moments(const GaussianPacket& g) {
  using C = std::complex<double>;
  const auto analytic_x = position_stats(g);
  const double width = spreads(g).delta_x;
  const double lo = analytic_x.mean - 12.0 * width;
  const double hi = analytic_x.mean + 12.0 * width;
  const C w(1.0, g.hbar * g.t / (g.m * g.a * g.a));
  auto dpsi = [&](double x) { return -wavefunction(g, x) * C(x / g.a, -g.k0) / (g.a * w); };
  TestMoments out{};
  out.x = integrate([&](double x) { return std::norm(wavefunction(g, x)) * x; }, lo, hi);
  out.x2 = integrate([&](double x) { return std::norm(wavefunction(g, x)) * x * x; }, lo, hi);
  out.p = integrate([&](double x) { return (std::conj(wavefunction(g, x)) * C(0, -g.hbar) * dpsi(x)).real(); }, lo, hi);
  out.p2 = integrate([&](double x) { return g.hbar * g.hbar * std::norm(dpsi(x)); }, lo, hi);
  return out;
}

bool close_rel(double got, double want, double rel, double floor = 0.0) {
  return std::abs(got - want) <= rel * std::max(std::abs(want), floor);
}

GaussianPacket random_packet(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return GaussianPacket::make(0.3 + 2.0 * u(gen), -2.0 + 4.0 * u(gen), 0.5 + 2.0 * u(gen), 0.5 + u(gen), 5.0 * u(gen));
}

}  // namespace

TEST_CASE("packet validation") {
  CHECK_THROWS_AS(GaussianPacket::make(0.0, 0, 1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianPacket::make(1, 0, -1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianPacket::make(1, 0, 1, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianPacket::make(1, 0, 1, 1, -1), std::invalid_argument);
}

TEST_CASE("position moments") {
  const auto at0 = position_stats(GaussianPacket::make(1.7, 0.8, 1.0, 1.0, 0.0));
  CHECK(at0.mean == 0.0);
  CHECK(at0.second == doctest::Approx(1.7 * 1.7 / 2));
  for (double t : {0.0, 1.0, 7.0}) CHECK(position_stats(GaussianPacket::make(1.3, 0.0, 2.0, 1.0, t)).mean == 0.0);

  const auto g = GaussianPacket::make(1, 1, 1, 1, 2);
  const auto s = position_stats(g);
  CHECK(s.mean == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s.second == doctest::Approx(6.5).epsilon(1e-14));
  const auto q = test_moments(g);
  CHECK(close_rel(q.x, 2.0, 1e-8));
  CHECK(close_rel(q.x2, 6.5, 1e-8));
}

TEST_CASE("momentum moments") {
  const auto z = momentum_stats(GaussianPacket::make(2.0, 0.0, 1.0, 1.5, 3.0));
  CHECK(z.mean == 0.0);
  CHECK(z.second == doctest::Approx(1.5 * 1.5 / (2 * 4.0)));
  const auto g = GaussianPacket::make(1, 1, 1, 1, 0);
  const auto s = momentum_stats(g);
  CHECK(s.mean == doctest::Approx(1.0));
  CHECK(s.second == doctest::Approx(1.5));

  // Momentum representation: |phi(p)|^2 = a / (hbar sqrt pi) exp(-(a p / hbar - k0)^2).
  auto density = [&](double p) { return g.a / (g.hbar * std::sqrt(std::numbers::pi)) * std::exp(-std::pow(g.a * p / g.hbar - g.k0, 2)); };
  CHECK(close_rel(integrate([&](double p) { return density(p); }, -12, 14), 1.0, 1e-10));
  CHECK(close_rel(integrate([&](double p) { return density(p) * p; }, -12, 14), 1.0, 1e-10));
  CHECK(close_rel(integrate([&](double p) { return density(p) * p * p; }, -12, 14), 1.5, 1e-10));

  const auto later = momentum_stats(GaussianPacket::make(1, 1, 1, 1, 5));
  CHECK(later.mean == s.mean);
  CHECK(later.second == s.second);
}

TEST_CASE("spreads") {
  const auto s = spreads(GaussianPacket::make(1, 0, 1, 1, 0));
  CHECK(s.delta_x == doctest::Approx(1 / std::numbers::sqrt2));
  CHECK(s.delta_p == doctest::Approx(1 / std::numbers::sqrt2));
  CHECK(s.product() == doctest::Approx(0.5));

  std::mt19937_64 gen(31);
  for (int k = 0; k < 10000; ++k) {
    const auto g = random_packet(gen);
    const auto sp = spreads(g);
    CHECK(sp.product() >= g.hbar / 2 * (1 - 1e-14));
    const auto x = position_stats(g);
    CHECK(std::abs(sp.delta_x * sp.delta_x - (x.second - x.mean * x.mean)) <= 1e-12 * std::max(1.0, x.second));
    auto frozen = g;
    frozen.t = 0.0;
    CHECK(std::abs(spreads(frozen).product() - g.hbar / 2) <= 1e-14 * g.hbar);
    CHECK(spreads(frozen).delta_p == sp.delta_p);
  }

  // Linear growth at large t, constant delta p.
  const auto far1 = spreads(GaussianPacket::make(1, 0, 1, 1, 1e6));
  const auto far2 = spreads(GaussianPacket::make(1, 0, 1, 1, 2e6));
  CHECK(far2.delta_x / far1.delta_x == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(far2.delta_p == far1.delta_p);
}

TEST_CASE("quadrature oracle on random packets") {
  std::mt19937_64 gen(32);
  for (int k = 0; k < 20; ++k) {
    const auto g = random_packet(gen);
    const auto q = test_moments(g);
    const auto x = position_stats(g);
    const auto p = momentum_stats(g);
    const auto sp = spreads(g);
    CHECK(close_rel(q.x, x.mean, 1e-6, sp.delta_x));
    CHECK(close_rel(q.x2, x.second, 1e-6));
    CHECK(close_rel(q.p, p.mean, 1e-6, sp.delta_p));
    CHECK(close_rel(q.p2, p.second, 1e-6));
  }
}

TEST_CASE("xp membership") {
  CHECK(xp_membership(1 / std::numbers::sqrt2, 1 / std::numbers::sqrt2, 1.0));
  CHECK_FALSE(xp_membership(1.0, 0.4, 1.0));
  CHECK(xp_membership(10, 10, 1.0));
  CHECK_FALSE(xp_membership(-1, -10, 1.0));
  CHECK_FALSE(xp_membership(0, 10, 1.0));
}

TEST_CASE("inverse solve") {
  const auto edge = solve_packet_for(1 / std::numbers::sqrt2, 1 / std::numbers::sqrt2);
  REQUIRE(edge);
  CHECK(edge->a == doctest::Approx(1.0));
  CHECK(edge->t == doctest::Approx(0.0));

  const auto g = solve_packet_for(2.0, 1.0);
  REQUIRE(g);
  CHECK(std::abs(g->a - 1 / std::numbers::sqrt2) < 1e-15);
  CHECK(std::abs(g->t - std::sqrt(15.0) / 2) < 1e-14);
  CHECK(g->k0 == 0.0);
  const auto s = spreads(*g);
  CHECK(std::abs(s.delta_x - 2.0) < 1e-12 * 2.0);
  CHECK(std::abs(s.delta_p - 1.0) < 1e-12);

  CHECK_FALSE(solve_packet_for(1.0, 0.4));
  CHECK_THROWS_AS(solve_packet_for(-1.0, 1.0), std::invalid_argument);

  std::mt19937_64 gen(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const double hbar = 0.5 + u(gen);
    const double m = 0.1 + 3 * u(gen);
    const double y = 0.05 + 3 * u(gen);
    const double x = hbar / (2 * y) * (1 + 1e-9 + 20 * u(gen));
    const auto packet = solve_packet_for(x, y, m, hbar);
    REQUIRE(packet);
    const auto sp = spreads(*packet);
    CHECK(std::abs(sp.delta_x - x) <= 1e-9 * x);
    CHECK(std::abs(sp.delta_p - y) <= 1e-9 * y);
  }
}

TEST_CASE("library quadrature matches the closed form") {
  std::mt19937_64 gen(34);
  for (int k = 0; k < 20; ++k) {
    const auto g = random_packet(gen);
    const auto q = quadrature_moments(g);
    const auto t = test_moments(g);
    const auto sp = spreads(g);
    CHECK(close_rel(q.position.mean, position_stats(g).mean, 1e-6, sp.delta_x));
    CHECK(close_rel(q.position.second, t.x2, 1e-9));
    CHECK(close_rel(q.momentum.mean, momentum_stats(g).mean, 1e-6, sp.delta_p));
    CHECK(close_rel(q.momentum.second, momentum_stats(g).second, 1e-6));
  }
}
