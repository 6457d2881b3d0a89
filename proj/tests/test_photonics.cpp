#include <cmath>
#include <numbers>

#include "doctest.h"
#include "uregion/jordan.hpp"
#include "uregion/photonics.hpp"
#include "uregion/sampling.hpp"

using namespace uregion;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("prepare_state") {
  const auto zero = prepare_state(PrepConfig{0.0, 0.7, 0.4, 1.1});
  CHECK(std::abs(std::abs(zero[0]) - 1.0) < 1e-15);
  const auto one = prepare_state(PrepConfig{kPi / 2, kPi / 2, 0.0, 0.0});
  CHECK(std::abs(one[1] - Complex(1.0)) < 1e-15);
  CHECK(one[2] == Complex(0.0));
  const auto plus = prepare_state(PrepConfig{kPi / 4, kPi / 2, 0.0, 0.0});
  CHECK(std::abs(plus[0] - Complex(1 / std::numbers::sqrt2)) < 1e-15);
  CHECK(std::abs(plus[1] - Complex(1 / std::numbers::sqrt2)) < 1e-15);
  CHECK(plus[2] == Complex(0.0));

  // Amplitudes match the formula for generic angles.
  const PrepConfig cfg{0.9, 0.3, 0.5, -1.2};
  const auto s = prepare_state(cfg);
  CHECK(std::abs(s[0] - std::polar(std::cos(0.9), 0.5)) < 1e-15);
  CHECK(std::abs(s[1] - std::polar(std::sin(0.9) * std::sin(0.3), -1.2)) < 1e-15);
  CHECK(std::abs(s[2] - Complex(-std::sin(0.9) * std::cos(0.3))) < 1e-15);

  SeededRng rng(1, 0);
  for (int k = 0; k < 1000; ++k) {
    const auto psi = haar_pure(3, rng);
    const auto back = prepare_state(prep_for_state(psi));
    CHECK(std::abs(std::abs(inner(psi.amplitudes(), back.amplitudes())) - 1.0) < 1e-12);
  }
}

TEST_CASE("measurement unitary and ports") {
  const auto u0 = measurement_unitary(0.0);
  CHECK(max_abs_diff(u0, ComplexMatrix::diagonal(std::vector<double>{1, -1, 1})) < 1e-15);
  const auto u8 = measurement_unitary(kPi / 8);
  CHECK(std::abs(u8(0, 0) - 1 / std::numbers::sqrt2) < 1e-15);
  CHECK(std::abs(u8(0, 1) - 1 / std::numbers::sqrt2) < 1e-15);
  CHECK(std::abs(u8(0, 2)) == 0.0);

  const auto p0 = port_projectors(0.0);
  CHECK(max_abs_diff(p0[0].matrix(), ComplexMatrix::diagonal(std::vector<double>{1, 0, 0})) < 1e-15);
  const auto p8 = port_projectors(kPi / 8);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(p8[0].matrix()(i, j) - 0.5) < 1e-15);

  SeededRng rng(2, 0);
  for (int k = 0; k < 100; ++k) {
    const double t = 2 * kPi * rng.uniform() - kPi;
    const auto u = measurement_unitary(t);
    CHECK(unitarity_residual(u) < 1e-14);
    CHECK(max_abs_diff(u * u, ComplexMatrix::identity(3)) < 1e-14);
    const auto ports = port_projectors(t);
    CHECK(max_abs_diff(ports[0].matrix() + ports[1].matrix() + ports[2].matrix(), ComplexMatrix::identity(3)) < 1e-14);
    // D0 projector in the closed form of the setting.
    const double c = std::cos(2 * t);
    const double s = std::sin(2 * t);
    const auto eq = ComplexMatrix::from_rows({{c * c, c * s, 0}, {c * s, s * s, 0}, {0, 0, 0}});
    CHECK(max_abs_diff(ports[0].matrix(), eq) < 1e-15);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a + 1; b < 3; ++b)
        CHECK(max_abs_diff(ports[a].matrix() * ports[b].matrix(), ComplexMatrix(3)) < 1e-15);
  }
}

TEST_CASE("pair angles of the default settings") {
  const auto s = default_settings();
  REQUIRE(s.size() == 4);
  CHECK(std::abs(pair_angle(s[0], s[1]) - 5 * kPi / 36) < 1e-15);
  CHECK(std::abs(pair_angle(s[0], s[2]) - kPi / 6) < 1e-15);
  CHECK(std::abs(pair_angle(s[0], s[3]) - kPi / 4) < 1e-15);
  CHECK(std::abs(pair_angle(s[2], s[3]) - kPi / 12) < 1e-15);
  // Matches the principal angle of the D0 projectors.
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = j + 1; k < 4; ++k) {
      const auto angles = principal_angles(port_projectors(s[j].theta_2)[0], port_projectors(s[k].theta_2)[0]);
      REQUIRE(angles.size() == 1);
      CHECK(std::abs(angles[0] - pair_angle(s[j], s[k])) < 1e-9);
    }
}

TEST_CASE("simulate_counts") {
  SeededRng rng(3, 0);
  const auto two = PureState::basis(3, 2);
  for (double t : {0.0, 0.3, 1.1}) CHECK(simulate_counts(two, t, 45000, rng).n2 == 45000);
  CHECK(simulate_counts(PureState::basis(3, 0), 0.0, 45000, rng).n0 == 45000);
  const auto plus = prepare_state(PrepConfig{kPi / 4, kPi / 2, 0.0, 0.0});
  const auto c = simulate_counts(plus, kPi / 8, 45000, rng);
  CHECK(c.n0 == 45000);
  CHECK(c.total() == 45000);

  // Port frequencies within 5 sigma of the probabilities.
  const auto psi = haar_pure(3, rng);
  const auto p = port_probabilities(psi, 0.2);
  CHECK(std::abs(p[0] + p[1] + p[2] - 1.0) < 1e-12);
  const auto r = simulate_counts(psi, 0.2, 45000, rng);
  const double n = 45000;
  CHECK(std::abs(r.n0 / n - p[0]) < 5 * std::sqrt(p[0] * (1 - p[0]) / n));
  CHECK(std::abs(r.n1 / n - p[1]) < 5 * std::sqrt(p[1] * (1 - p[1]) / n));
  CHECK_THROWS_AS(simulate_counts(psi, 0.2, 0, rng), std::invalid_argument);
}

TEST_CASE("ideal probabilities reproduce the analytic variances") {
  SeededRng rng(4, 0);
  for (int k = 0; k < 200; ++k) {
    const auto psi = haar_pure(3, rng);
    const double t = rng.uniform();
    const auto p = port_probabilities(psi, t);
    const auto ports = port_projectors(t);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(p[j] * (1 - p[j]) - variance(ports[j].matrix(), psi)) < 1e-12);
  }
}

TEST_CASE("empirical_point and post-selection") {
  const auto full = empirical_point(100, 100, 50, 100);
  CHECK(full.dA == 0.0);
  CHECK(full.dB == 0.25);
  CHECK_THROWS_AS(empirical_point(0, 0, 1, 1), std::invalid_argument);

  const auto q = postselect_qubit(CountRecord{100, 300, 600});
  CHECK(q.n0 == 100);
  CHECK(q.n1 == 300);
  CHECK(q.total() == 400);
  CHECK(q.p_hat() == 0.25);
  SeededRng rng(5, 0);
  CHECK_THROWS_AS(postselect_qubit(simulate_counts(PureState::basis(3, 2), 0.1, 1000, rng)), NoQubitEvents);
  const auto boundary = simulate_counts(prepare_state(PrepConfig{0.6, kPi / 2, 0.0, kPi}), 0.3, 45000, rng);
  CHECK(postselect_qubit(boundary).total() == 45000);
}

TEST_CASE("variance estimator bias") {
  // sqrt(0.3)|0> + sqrt(0.7)|2> fires D0 with p = 0.3 at theta_2 = 0.
  const auto psi = PureState::normalized(CVector{std::sqrt(0.3), 0.0, std::sqrt(0.7)});
  SeededRng rng(6, 0);
  const int reps = 10000;
  const std::uint64_t n = 45000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int k = 0; k < reps; ++k) {
    const auto c = simulate_counts(psi, 0.0, n, rng);
    const double v = empirical_point(c.n0, n, c.n0, n).dA;
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
  CHECK(std::abs(mean - 0.21) < 3 * se);
}

TEST_CASE("inflated region and ellipse distance") {
  const auto spec = RegionSpec::make(kPi / 6, DimClass::Qubit);
  const VariancePoint out{0.0, 0.0};
  CHECK_FALSE(within_inflated_region(out, 1e-4, 1e-4, spec));
  const auto e = ellipse_point(kPi / 6, 2.0);
  CHECK(ellipse_sigma_distance(e, 1e-5, 1e-5, kPi / 6) < 1e-3);
  // Nudge the point below the arc by 2 sigma.
  const VariancePoint nudged{e.dA - 2e-5, e.dB - 2e-5};
  CHECK(within_inflated_region(nudged, 1e-5, 1e-5, spec));
  CHECK(ellipse_sigma_distance(nudged, 1e-5, 1e-5, kPi / 6) <= 2.0 + 1e-6);
  CHECK(variance_sigma(0.5, 100) == doctest::Approx(0.05 * 0.05));
  CHECK(variance_sigma(0.0, 100) == doctest::Approx(0.01 + 1e-4));
}

TEST_CASE("default plan") {
  const auto plan = default_plan(7);
  CHECK(plan.states.size() == 400);
  CHECK(plan.count(StateFamily::Generic) == 300);
  CHECK(plan.count(StateFamily::Boundary) == 100);
  CHECK(plan.settings.size() == 4);
  CHECK(plan.shots == 45000);
  CHECK(plan.repeats == 5);
  CHECK(plan.pairs.size() == 4);
  for (const auto& s : plan.states)
    if (s.family == StateFamily::Boundary) CHECK(prepare_state(s.prep)[2] == Complex(0.0));
  const auto again = default_plan(7);
  for (std::size_t k = 0; k < 400; ++k) CHECK(plan.states[k].prep.theta_A == again.states[k].prep.theta_A);
}

TEST_CASE("experiment run") {
  const auto plan = default_plan(11);
  const auto data = run_experiment(plan, 1);
  REQUIRE(data.qutrit_panels.size() == 4);
  REQUIRE(data.qubit_panels.size() == 4);
  std::size_t total = 0;
  std::size_t ok = 0;
  for (const auto* panels : {&data.qutrit_panels, &data.qubit_panels}) {
    for (const auto& panel : *panels) {
      for (const auto& pt : panel.points) {
        ++total;
        ok += pt.within_tolerance;
        if (pt.ellipse_sigmas) CHECK(*pt.ellipse_sigmas <= 3.0);
      }
    }
  }
  CHECK(ok >= 0.99 * total);
  for (const auto& o : data.observations) CHECK(o.counts.total() == 5 * 45000);

  // Worker count does not change the result.
  const auto threaded = run_experiment(plan, 6);
  for (std::size_t k = 0; k < data.observations.size(); ++k) {
    CHECK(data.observations[k].counts.n0 == threaded.observations[k].counts.n0);
    CHECK(data.observations[k].counts.n1 == threaded.observations[k].counts.n1);
  }

  // Ideal statistics collapse onto the analytic scatter.
  auto ideal = plan;
  ideal.ideal = true;
  const auto exact = run_experiment(ideal);
  for (const auto& panel : exact.qutrit_panels) {
    const auto a = port_projectors(plan.settings[panel.j].theta_2)[0];
    const auto b = port_projectors(plan.settings[panel.k].theta_2)[0];
    for (const auto& pt : panel.points) {
      const auto psi = prepare_state(plan.states[pt.state].prep);
      CHECK(std::abs(pt.point.dA - variance(a.matrix(), psi)) < 1e-12);
      CHECK(std::abs(pt.point.dB - variance(b.matrix(), psi)) < 1e-12);
      CHECK(pt.membership.verdict != Verdict::Outside);
    }
  }
  for (const auto& panel : exact.qubit_panels)
    for (const auto& pt : panel.points) {
      CHECK(qubit_membership(pt.point, panel.spec.theta, 1e-9).verdict != Verdict::Outside);
      if (pt.family == StateFamily::Boundary) CHECK(pt.ellipse_sigmas.value() < 1e-3);
    }
}

TEST_CASE("noise hooks") {
  auto plan = default_plan(12);
  plan.noise.visibility = 0.9;
  plan.noise.angle_jitter = 0.2 * kPi / 180;
  const auto data = run_experiment(plan);
  CHECK(data.observations.size() == 1600);
  plan.noise.visibility = 1.5;
  CHECK_THROWS_AS(run_experiment(plan), std::invalid_argument);
  const auto psi = prepare_state(PrepConfig{kPi / 4, kPi / 2, 0.0, 0.0});
  const auto p = port_probabilities(psi, kPi / 8, NoiseModel{0.0, 0.0});
  CHECK(p[0] == doctest::Approx(0.5));
}
