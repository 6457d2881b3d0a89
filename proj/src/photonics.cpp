#include "uregion/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>
#include <boost/random/binomial_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "uregion/parallel.hpp"
#include "uregion/sampling.hpp"

namespace uregion {

namespace {

constexpr double kPi = std::numbers::pi;

// cos and sin, exact at the quarter turn so that unoccupied modes stay zero.
std::pair<double, double> cos_sin(double x) {
  if (x == kPi / 2) return {0.0, 1.0};
  return {std::cos(x), std::sin(x)};
}

std::uint64_t draw_binomial(std::uint64_t n, double p, SeededRng& rng) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  boost::random::binomial_distribution<std::int64_t, double> dist(static_cast<std::int64_t>(n), p);
  return static_cast<std::uint64_t>(dist(rng));
}

std::array<double, 3> unitary_row(double theta_2, std::size_t j) {
  const double c = std::cos(2.0 * theta_2);
  const double s = std::sin(2.0 * theta_2);
  switch (j) {
    case 0: return {c, s, 0.0};
    case 1: return {s, -c, 0.0};
    default: return {0.0, 0.0, 1.0};
  }
}

}  // namespace

std::string_view to_string(StateFamily f) { return f == StateFamily::Generic ? "generic" : "boundary"; }

std::size_t ExperimentPlan::count(StateFamily f) const {
  return static_cast<std::size_t>(
      std::count_if(states.begin(), states.end(), [f](const PlanState& s) { return s.family == f; }));
}

void ExperimentPlan::validate() const {
  if (states.empty()) throw std::invalid_argument("plan has no states");
  if (settings.empty()) throw std::invalid_argument("plan has no measurement settings");
  if (shots == 0) throw std::invalid_argument("plan needs at least one shot per setting");
  if (repeats == 0) throw std::invalid_argument("plan needs at least one repeat");
  if (!(noise.visibility >= 0.0 && noise.visibility <= 1.0)) throw std::invalid_argument("visibility must lie in [0, 1]");
  if (!(noise.angle_jitter >= 0.0)) throw std::invalid_argument("angle jitter must be non-negative");
  for (const auto& [j, k] : pairs) {
    if (j >= settings.size() || k >= settings.size()) throw std::invalid_argument("pair refers to a missing setting");
    const double t = pair_angle(settings[j], settings[k]);
    if (!(t > 1e-12)) throw std::invalid_argument("pair settings must give distinct projectors");
  }
  for (const auto& s : states)
    for (double v : {s.prep.theta_A, s.prep.theta_B, s.prep.phi_1, s.prep.phi_2})
      if (!std::isfinite(v)) throw std::invalid_argument("state angles must be finite");
}

std::vector<MeasConfig> default_settings() {
  return {MeasConfig{0.0}, MeasConfig{5.0 * kPi / 72.0}, MeasConfig{kPi / 12.0}, MeasConfig{kPi / 8.0}};
}

ExperimentPlan default_plan(std::uint64_t seed) {
  ExperimentPlan plan;
  plan.seed = seed;
  plan.settings = default_settings();
  plan.pairs = {{0, 1}, {0, 2}, {0, 3}, {2, 3}};
  SeededRng rng(seed, 1);
  for (int k = 0; k < 300; ++k) plan.states.push_back({prep_for_state(haar_pure(3, rng)), StateFamily::Generic});
  for (int k = 0; k < 100; ++k) {
    const double theta_a = 0.5 * kPi * rng.uniform();
    const double phi_2 = rng.uniform() < 0.5 ? 0.0 : kPi;
    plan.states.push_back({PrepConfig{theta_a, kPi / 2, 0.0, phi_2}, StateFamily::Boundary});
  }
  return plan;
}

PureState prepare_state(const PrepConfig& cfg) {
  const auto [ca, sa] = cos_sin(cfg.theta_A);
  const auto [cb, sb] = cos_sin(cfg.theta_B);
  const Complex e1 = std::exp(Complex(0.0, cfg.phi_1));
  const Complex e2 = std::exp(Complex(0.0, cfg.phi_2));
  CVector v{ca * e1, sa * sb * e2, Complex(-sa * cb, 0.0)};
  return PureState::normalized(std::move(v));
}

PrepConfig prep_for_state(const PureState& psi) {
  if (psi.dim() != 3) throw DimensionMismatch("prep_for_state needs a qutrit state");
  Complex g = 1.0;
  const double r2 = std::abs(psi[2]);
  if (r2 > 0.0) g = -std::conj(psi[2]) / r2;
  const Complex a0 = g * psi[0];
  const Complex a1 = g * psi[1];
  const double r0 = std::min(1.0, std::abs(a0));
  const double r1 = std::abs(a1);
  return PrepConfig{std::acos(r0), std::atan2(r1, r2), std::arg(a0), std::arg(a1)};
}

ComplexMatrix measurement_unitary(double theta_2) {
  std::vector<Complex> e;
  for (std::size_t j = 0; j < 3; ++j) {
    const auto row = unitary_row(theta_2, j);
    e.insert(e.end(), row.begin(), row.end());
  }
  return ComplexMatrix(3, std::move(e));
}

std::array<Projector, 3> port_projectors(double theta_2) {
  auto make = [&](std::size_t j) {
    const auto row = unitary_row(theta_2, j);
    const CVector v(row.begin(), row.end());
    return Projector::rank_one(v);
  };
  return {make(0), make(1), make(2)};
}

double pair_angle(const MeasConfig& j, const MeasConfig& k) {
  double d = std::fmod(std::abs(2.0 * (k.theta_2 - j.theta_2)), kPi);
  if (d > kPi / 2) d = kPi - d;
  return d;
}

std::array<double, 3> port_probabilities(const PureState& psi, double theta_2, const NoiseModel& noise) {
  if (psi.dim() != 3) throw DimensionMismatch("detection model needs a qutrit state");
  std::array<double, 3> p{};
  double total = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    const auto u = unitary_row(theta_2, j);
    // <u|rho|u> with the 0-1 coherence scaled by the visibility.
    const Complex c01 = psi[0] * std::conj(psi[1]);
    double v = 0.0;
    for (std::size_t i = 0; i < 3; ++i) v += u[i] * u[i] * std::norm(psi[i]);
    v += 2.0 * noise.visibility * u[0] * u[1] * c01.real();
    p[j] = v;
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw NumericalError("port probabilities sum to " + std::to_string(total));
  double clamped = 0.0;
  for (auto& v : p) {
    v = std::clamp(v, 0.0, 1.0);
    clamped += v;
  }
  for (auto& v : p) v /= clamped;
  return p;
}

CountRecord simulate_counts(const PureState& psi, double theta_2, std::uint64_t shots, SeededRng& rng,
                            const NoiseModel& noise) {
  if (shots == 0) throw std::invalid_argument("simulate_counts needs at least one shot");
  double angle = theta_2;
  if (noise.angle_jitter > 0.0) {
    boost::random::normal_distribution<double> jitter(0.0, noise.angle_jitter);
    angle += jitter(rng);
  }
  const auto p = port_probabilities(psi, angle, noise);
  CountRecord out;
  out.n0 = draw_binomial(shots, p[0], rng);
  const double rest = p[1] + p[2];
  out.n1 = rest > 0.0 ? draw_binomial(shots - out.n0, p[1] / rest, rng) : 0;
  out.n2 = shots - out.n0 - out.n1;
  return out;
}

VariancePoint empirical_point(std::uint64_t n_a, std::uint64_t total_a, std::uint64_t n_b, std::uint64_t total_b) {
  if (total_a == 0 || total_b == 0) throw std::invalid_argument("empirical_point needs a positive count total");
  if (n_a > total_a || n_b > total_b) throw std::invalid_argument("outcome count exceeds total");
  const double pa = static_cast<double>(n_a) / static_cast<double>(total_a);
  const double pb = static_cast<double>(n_b) / static_cast<double>(total_b);
  return VariancePoint{pa * (1.0 - pa), pb * (1.0 - pb)};
}

QubitRecord postselect_qubit(const CountRecord& counts) {
  if (counts.n0 + counts.n1 == 0) throw NoQubitEvents("no detection events in the qubit ports");
  return QubitRecord{counts.n0, counts.n1};
}

double variance_sigma(double p_hat, double trials) {
  if (!(trials > 0.0)) throw std::invalid_argument("variance_sigma needs positive trials");
  const double sp = std::max(std::sqrt(p_hat * (1.0 - p_hat) / trials), 1.0 / trials);
  return std::abs(1.0 - 2.0 * p_hat) * sp + sp * sp;
}

bool within_inflated_region(const VariancePoint& p, double sigma_a, double sigma_b, const RegionSpec& spec,
                            double k) {
  if (membership(p, spec).verdict != Verdict::Outside) return true;
  constexpr int kSteps = 8;
  const double a_lo = std::max(0.0, p.dA - k * sigma_a);
  const double a_hi = std::min(0.25, p.dA + k * sigma_a);
  const double b_lo = std::max(0.0, p.dB - k * sigma_b);
  const double b_hi = std::min(0.25, p.dB + k * sigma_b);
  for (int i = 0; i <= 2 * kSteps; ++i)
    for (int j = 0; j <= 2 * kSteps; ++j) {
      const VariancePoint q{a_lo + (a_hi - a_lo) * i / (2.0 * kSteps), b_lo + (b_hi - b_lo) * j / (2.0 * kSteps)};
      if (membership(q, spec).verdict != Verdict::Outside) return true;
    }
  return false;
}

double ellipse_sigma_distance(const VariancePoint& p, double sigma_a, double sigma_b, double theta) {
  if (!(sigma_a > 0.0 && sigma_b > 0.0)) throw std::invalid_argument("sigmas must be positive");
  auto dist = [&](double phi) {
    const auto e = ellipse_point(theta, phi);
    return std::max(std::abs(p.dA - e.dA) / sigma_a, std::abs(p.dB - e.dB) / sigma_b);
  };
  // The ellipse is traced once as phi runs over [0, pi).
  constexpr int kSamples = 4096;
  const double step = kPi / kSamples;
  int best = 0;
  double best_value = dist(0.0);
  for (int s = 1; s < kSamples; ++s) {
    const double v = dist(s * step);
    if (v < best_value) {
      best_value = v;
      best = s;
    }
  }
  // Refine in a unit offset around the best sample so the absolute tolerance
  // of the minimizer applies at the scale of one sample step.
  const auto local = [&](double u) { return dist((best + u) * step); };
  const auto refined = boost::math::tools::brent_find_minima(local, -1.0, 1.0, 40);
  return std::min(best_value, refined.second);
}

ExperimentDataset run_experiment(const ExperimentPlan& plan, unsigned threads) {
  plan.validate();
  const std::size_t n_states = plan.states.size();
  const std::size_t n_settings = plan.settings.size();
  const SeededRng base(plan.seed, 2);
  const double pooled = static_cast<double>(plan.shots) * static_cast<double>(plan.repeats);

  ExperimentDataset data;
  data.observations.resize(n_states * n_settings);
  parallel_chunks(n_states, threads, [&](std::size_t s) {
    SeededRng rng = base.split(s);
    const auto psi = prepare_state(plan.states[s].prep);
    for (std::size_t j = 0; j < n_settings; ++j) {
      Observation& obs = data.observations[s * n_settings + j];
      obs.state = s;
      obs.setting = j;
      const double theta_2 = plan.settings[j].theta_2;
      if (plan.ideal) {
        obs.p_hat = port_probabilities(psi, theta_2, plan.noise);
        obs.trials = pooled;
        const double q = obs.p_hat[0] + obs.p_hat[1];
        if (q > 0.0) {
          obs.qubit_p_hat = obs.p_hat[0] / q;
          obs.qubit_trials = pooled * q;
        }
        continue;
      }
      for (unsigned r = 0; r < plan.repeats; ++r) obs.counts += simulate_counts(psi, theta_2, plan.shots, rng, plan.noise);
      const double total = static_cast<double>(obs.counts.total());
      obs.p_hat = {obs.counts.n0 / total, obs.counts.n1 / total, obs.counts.n2 / total};
      obs.trials = total;
      if (obs.counts.n0 + obs.counts.n1 > 0) {
        const auto q = postselect_qubit(obs.counts);
        obs.qubit_p_hat = q.p_hat();
        obs.qubit_trials = static_cast<double>(q.total());
      }
    }
  });

  for (const auto& [j, k] : plan.pairs) {
    const double theta = pair_angle(plan.settings[j], plan.settings[k]);
    Panel qutrit{j, k, RegionSpec::make(theta, DimClass::Qudit), {}, {}};
    Panel qubit{j, k, RegionSpec::make(theta, DimClass::Qubit), {}, {}};
    if (theta <= kPi / 4 + 1e-12) qutrit.boundary = qudit_boundary(theta, 256);
    qubit.boundary = qubit_boundary(theta, 256);
    for (std::size_t s = 0; s < n_states; ++s) {
      const auto& oj = data.observations[s * n_settings + j];
      const auto& ok = data.observations[s * n_settings + k];
      const StateFamily family = plan.states[s].family;
      {
        const double pa = oj.p_hat[0];
        const double pb = ok.p_hat[0];
        PanelPoint pt{s, family, VariancePoint{pa * (1 - pa), pb * (1 - pb)}, variance_sigma(pa, oj.trials),
                      variance_sigma(pb, ok.trials), {}, false, std::nullopt};
        pt.membership = membership(pt.point, qutrit.spec);
        pt.within_tolerance = within_inflated_region(pt.point, pt.sigma_a, pt.sigma_b, qutrit.spec);
        qutrit.points.push_back(pt);
      }
      if (oj.qubit_p_hat && ok.qubit_p_hat) {
        const double pa = *oj.qubit_p_hat;
        const double pb = *ok.qubit_p_hat;
        PanelPoint pt{s, family, VariancePoint{pa * (1 - pa), pb * (1 - pb)}, variance_sigma(pa, oj.qubit_trials),
                      variance_sigma(pb, ok.qubit_trials), {}, false, std::nullopt};
        pt.membership = membership(pt.point, qubit.spec);
        pt.within_tolerance = within_inflated_region(pt.point, pt.sigma_a, pt.sigma_b, qubit.spec);
        if (family == StateFamily::Boundary)
          pt.ellipse_sigmas = ellipse_sigma_distance(pt.point, pt.sigma_a, pt.sigma_b, theta);
        qubit.points.push_back(pt);
      }
    }
    data.qutrit_panels.push_back(std::move(qutrit));
    data.qubit_panels.push_back(std::move(qubit));
  }
  return data;
}

}  // namespace uregion
