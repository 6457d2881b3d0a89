#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "uregion/qcore.hpp"

using namespace uregion;
using testing_support::random_density_matrix;

namespace {
const double kPi = std::numbers::pi;
const double s2 = std::numbers::sqrt2;

ComplexMatrix ketbra0() { return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}); }
}  // namespace

TEST_CASE("expectation examples") {
  std::mt19937_64 gen(1);
  for (std::size_t d = 2; d <= 5; ++d) {
    const auto rho = DensityMatrix::from_matrix(random_density_matrix(d, gen));
    CHECK(expectation(ComplexMatrix::identity(d), rho) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(expectation(ketbra0(), DensityMatrix::maximally_mixed(2)) == doctest::Approx(0.5));

  // b = (sin 2t, 0, cos 2t), |0><0|: <0|B|0> = (1 + cos 2t)/2 by hand.
  const double t = kPi / 6;
  const auto b = qubit_projector(BlochVector{std::sin(2 * t), 0.0, std::cos(2 * t)});
  const auto rho0 = DensityMatrix::from_pure(PureState::basis(2, 0));
  CHECK(std::abs(expectation(b.matrix(), rho0) - 0.75) < 1e-12);
}

TEST_CASE("expectation rejects bad input") {
  const auto rho = DensityMatrix::maximally_mixed(2);
  CHECK_THROWS_AS(expectation(ComplexMatrix::identity(3), rho), DimensionMismatch);
  const auto skew = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
  CHECK_THROWS_AS(expectation(skew, rho), std::invalid_argument);
}

TEST_CASE("variance examples") {
  const auto p = ketbra0();
  CHECK(variance(p, PureState::basis(2, 0)) == 0.0);
  CHECK(variance(p, DensityMatrix::maximally_mixed(2)) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("projector variance equals p(1-p) over random (P, rho)") {
  std::mt19937_64 gen(3);
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 2 + k % 5;
    const std::size_t rank = 1 + k % (d - 1);
    const auto pm = testing_support::projector_matrix(d, rank, gen);
    const auto rho = DensityMatrix::from_matrix(random_density_matrix(d, gen));
    // Oracle: p = sum_ij P_ij rho_ji computed directly.
    Complex acc = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) acc += pm(i, j) * rho.matrix()(j, i);
    const double p = acc.real();
    const double v = variance(pm, rho);
    CHECK(std::abs(v - p * (1 - p)) < 1e-12);
    CHECK(v >= 0.0);
    CHECK(v <= 0.25 + 1e-12);
  }
}

TEST_CASE("raw variance is nonnegative for random Hermitian observables") {
  std::mt19937_64 gen(4);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const std::size_t d = 2 + k % 4;
    const auto o = testing_support::random_hermitian(d, gen);
    const auto rho = DensityMatrix::trusted(random_density_matrix(d, gen));
    worst = std::min(worst, raw_variance(o, rho));
  }
  CHECK(worst >= -1e-12);
}

TEST_CASE("variance clamping") {
  CHECK(detail::clamp_variance(-5e-13) == 0.0);
  CHECK(detail::clamp_variance(0.125) == 0.125);
  CHECK_THROWS_AS(detail::clamp_variance(-1e-9), NumericalError);
}

TEST_CASE("qubit_projector examples") {
  const auto z = qubit_projector(BlochVector{0, 0, 1});
  CHECK(max_abs_diff(z.matrix(), ketbra0()) < 1e-15);
  CHECK(z.rank() == 1);

  const double t = kPi / 4;
  const auto b = qubit_projector(BlochVector{std::sin(2 * t), 0.0, std::cos(2 * t)});
  const double c = std::cos(t);
  const double s = std::sin(t);
  CHECK(max_abs_diff(b.matrix(), ComplexMatrix::from_rows({{c * c, c * s}, {c * s, s * s}})) < 1e-15);
  CHECK(max_abs_diff(b.matrix(), ComplexMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}})) < 1e-15);

  // 1/2 (I + sigma_y)
  const auto y = qubit_projector(BlochVector{0, 1, 0});
  const auto oracle = 0.5 * (ComplexMatrix::identity(2) + pauli_y());
  CHECK(max_abs_diff(y.matrix(), oracle) < 1e-15);
  CHECK(std::abs(y.matrix()(0, 1) - Complex(0, -0.5)) < 1e-15);

  CHECK_THROWS_AS(qubit_projector(BlochVector{0, 0, 0.9}), std::invalid_argument);
}

TEST_CASE("Bloch conversions") {
  CHECK(max_abs_diff(bloch_to_density(BlochVector{}).matrix(), DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
  CHECK(max_abs_diff(bloch_to_density(BlochVector{0, 0, 1}).matrix(), ketbra0()) < 1e-15);
  const double h = 1 / s2;
  const auto rho = bloch_to_density(BlochVector{h, 0, h});
  const auto oracle = ComplexMatrix::from_rows({{0.5 * (1 + h), 0.5 * h}, {0.5 * h, 0.5 * (1 - h)}});
  CHECK(max_abs_diff(rho.matrix(), oracle) < 1e-15);

  CHECK_THROWS_AS(bloch_to_density(BlochVector{1, 1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(density_to_bloch(DensityMatrix::maximally_mixed(3)), DimensionMismatch);

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 1000; ++k) {
    BlochVector r{u(gen), u(gen), u(gen)};
    if (r.norm() > 1) continue;
    const auto back = density_to_bloch(bloch_to_density(r));
    CHECK(std::abs(back.x - r.x) < 1e-12);
    CHECK(std::abs(back.y - r.y) < 1e-12);
    CHECK(std::abs(back.z - r.z) < 1e-12);
  }
}

TEST_CASE("shift_scale_to_projector") {
  const auto f = shift_scale_to_projector(pauli_z());
  CHECK(max_abs_diff(f.projector.matrix(), ketbra0()) < 1e-12);
  CHECK(f.shift == doctest::Approx(-1.0));
  CHECK(f.scale == doctest::Approx(2.0));

  const auto q = qubit_projector(BlochVector{0.6, 0, 0.8});
  const auto g = shift_scale_to_projector(q.matrix());
  CHECK(max_abs_diff(g.projector.matrix(), q.matrix()) < 1e-12);
  CHECK(std::abs(g.shift) < 1e-12);
  CHECK(g.scale == doctest::Approx(1.0));

  CHECK_THROWS_AS(shift_scale_to_projector(3.0 * ComplexMatrix::identity(2)), DegenerateSpectrum);

  std::mt19937_64 gen(6);
  for (int k = 0; k < 1000; ++k) {
    const auto o = testing_support::random_hermitian(2, gen);
    const auto form = shift_scale_to_projector(o);
    const auto rebuilt = form.scale * form.projector.matrix() + form.shift * ComplexMatrix::identity(2);
    CHECK(max_abs_diff(rebuilt, o) < 1e-10);
    const auto rho = DensityMatrix::from_matrix(random_density_matrix(2, gen));
    CHECK(std::abs(variance(o, rho) - form.scale * form.scale * variance(form.projector.matrix(), rho)) < 1e-10);
  }
}

TEST_CASE("eigh reproduces random Hermitian matrices") {
  std::mt19937_64 gen(7);
  for (std::size_t d = 1; d <= 16; ++d) {
    const auto m = testing_support::random_hermitian(d, gen);
    const auto eig = eigh(m);
    CHECK(unitarity_residual(eig.vectors) < 1e-12);
    const auto rebuilt = eig.vectors * ComplexMatrix::diagonal(eig.values) * eig.vectors.adjoint();
    CHECK(max_abs_diff(rebuilt, m) < 1e-11);
    for (std::size_t i = 1; i < d; ++i) CHECK(eig.values[i - 1] <= eig.values[i]);
  }
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(PureState(CVector{1.0, 1.0}), std::invalid_argument);
  CHECK_NOTHROW(PureState::normalized(CVector{1.0, 1.0}));
  CHECK_THROWS_AS(DensityMatrix::from_matrix(ComplexMatrix::identity(2)), std::invalid_argument);
  CHECK_THROWS_AS(Projector::from_matrix(0.5 * ComplexMatrix::identity(2)), std::invalid_argument);
  const auto rho = DensityMatrix::maximally_mixed(4);
  CHECK(rho.purity() == doctest::Approx(0.25));
}
