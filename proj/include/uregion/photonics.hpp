#pragma once

// Counting-statistics simulation of the qutrit experiment: state
// preparation, the HWP measurement unitary, three-port detection, qubit
// post-selection and the per-pair variance scatter.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "uregion/qcore.hpp"
#include "uregion/regions.hpp"
#include "uregion/rng.hpp"

namespace uregion {

struct PrepConfig {
  double theta_A = 0.0;
  double theta_B = 0.0;
  double phi_1 = 0.0;
  double phi_2 = 0.0;
};

struct MeasConfig {
  double theta_2 = 0.0;
};

struct CountRecord {
  std::uint64_t n0 = 0;
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;

  std::uint64_t total() const { return n0 + n1 + n2; }
  CountRecord& operator+=(const CountRecord& o) {
    n0 += o.n0;
    n1 += o.n1;
    n2 += o.n2;
    return *this;
  }
};

struct QubitRecord {
  std::uint64_t n0 = 0;
  std::uint64_t n1 = 0;

  std::uint64_t total() const { return n0 + n1; }
  double p_hat() const { return static_cast<double>(n0) / static_cast<double>(total()); }
};

enum class StateFamily { Generic, Boundary };
std::string_view to_string(StateFamily f);

struct PlanState {
  PrepConfig prep;
  StateFamily family = StateFamily::Generic;
};

// Optional imperfections, off by default.
struct NoiseModel {
  double angle_jitter = 0.0;  // standard deviation of the HWP angle error, radians
  double visibility = 1.0;    // scales the |0>,|1> coherences before detection
};

struct ExperimentPlan {
  std::vector<PlanState> states;
  std::vector<MeasConfig> settings;
  std::uint64_t shots = 45000;
  unsigned repeats = 5;
  std::uint64_t seed = 0;
  NoiseModel noise;
  // Use exact port probabilities instead of multinomial draws.
  bool ideal = false;
  // Pairs of setting indices forming the analysed projector pairs.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  std::size_t count(StateFamily f) const;
  // Throws std::invalid_argument on empty lists, zero shots/repeats or bad pair indices.
  void validate() const;
};

// 300 Haar qutrit states and 100 equatorial boundary states drawn from
// `seed`, HWP settings 0, 5 pi/72, pi/12, pi/8, N = 45000 and 5 repeats.
ExperimentPlan default_plan(std::uint64_t seed);
std::vector<MeasConfig> default_settings();

// exp(i phi_1) cos tA |0> + exp(i phi_2) sin tA sin tB |1> - sin tA cos tB |2>
PureState prepare_state(const PrepConfig& cfg);
// Parameters reproducing `psi` up to a global phase.
PrepConfig prep_for_state(const PureState& psi);

// Reflection [[cos 2t, sin 2t, 0], [sin 2t, -cos 2t, 0], [0, 0, 1]].
ComplexMatrix measurement_unitary(double theta_2);
// Detector D_j projects on row j of the measurement unitary.
std::array<Projector, 3> port_projectors(double theta_2);
// Principal angle 2 (theta_2k - theta_2j) of the D0 projectors of two settings.
double pair_angle(const MeasConfig& j, const MeasConfig& k);

// Port probabilities, checked to sum to 1 within 1e-9 and renormalized.
std::array<double, 3> port_probabilities(const PureState& psi, double theta_2, const NoiseModel& noise = {});
CountRecord simulate_counts(const PureState& psi, double theta_2, std::uint64_t shots, SeededRng& rng,
                            const NoiseModel& noise = {});

// (pA (1 - pA), pB (1 - pB)) with p = n / N.
VariancePoint empirical_point(std::uint64_t n_a, std::uint64_t total_a, std::uint64_t n_b, std::uint64_t total_b);
// Drops D2 events; throws NoQubitEvents when n0 + n1 = 0.
QubitRecord postselect_qubit(const CountRecord& counts);

// One-sigma error of the variance estimate p (1 - p) from n trials, with the
// probability error floored at 1/n.
double variance_sigma(double p_hat, double trials);

// True when some point of the box p +- k sigma (clipped to [0, 1/4]^2) is non-Outside.
bool within_inflated_region(const VariancePoint& p, double sigma_a, double sigma_b, const RegionSpec& spec,
                            double k = 3.0);
// Smallest max(|dA - e_A| / sigma_a, |dB - e_B| / sigma_b) over points e of the qubit ellipse.
double ellipse_sigma_distance(const VariancePoint& p, double sigma_a, double sigma_b, double theta);

struct Observation {
  std::size_t state = 0;
  std::size_t setting = 0;
  CountRecord counts;          // pooled over repeats
  std::array<double, 3> p_hat{};
  double trials = 0.0;
  std::optional<double> qubit_p_hat;
  double qubit_trials = 0.0;
};

struct PanelPoint {
  std::size_t state = 0;
  StateFamily family = StateFamily::Generic;
  VariancePoint point;
  double sigma_a = 0.0;
  double sigma_b = 0.0;
  Membership membership{Verdict::Outside, Part::None, 0.0};
  bool within_tolerance = false;
  // Boundary-family qubit points only: distance to the ellipse in sigma units.
  std::optional<double> ellipse_sigmas;
};

struct Panel {
  std::size_t j = 0;
  std::size_t k = 0;
  RegionSpec spec{0.0, DimClass::Qubit};
  std::vector<PanelPoint> points;
  std::vector<VariancePoint> boundary;  // empty when the region fills the box
};

struct ExperimentDataset {
  std::vector<Observation> observations;  // state-major, then setting
  std::vector<Panel> qutrit_panels;
  std::vector<Panel> qubit_panels;
};

ExperimentDataset run_experiment(const ExperimentPlan& plan, unsigned threads = 1);

}  // namespace uregion
