#include "uregion/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "uregion/io.hpp"
#include "uregion/jordan.hpp"
#include "uregion/photonics.hpp"
#include "uregion/regions.hpp"
#include "uregion/sampling.hpp"
#include "uregion/wavepacket.hpp"

namespace uregion {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::array<double, 4> kPanelAngles{kPi / 12, kPi / 6, kPi / 4, kPi / 3};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict flipped(Verdict v) {
  switch (v) {
    case Verdict::Interior: return Verdict::Outside;
    case Verdict::Outside: return Verdict::Interior;
    default: return v;
  }
}

// Counts Outside verdicts (and exceptions) over a point list.
std::size_t count_outside(const std::vector<VariancePoint>& pts, const RegionSpec& spec, bool fault,
                          std::size_t& exceptions) {
  std::size_t n = 0;
  for (const auto& p : pts) {
    try {
      auto v = membership(p, spec).verdict;
      if (fault) v = flipped(v);
      n += v == Verdict::Outside ? 1 : 0;
    } catch (const std::exception&) {
      ++exceptions;
    }
  }
  return n;
}

struct Soundness {
  std::size_t outside = 0;
  std::size_t exceptions = 0;
  std::size_t points = 0;
};

Soundness soundness(std::size_t dim, std::uint64_t stream, const VerifyOptions& o) {
  Soundness s;
  const auto cls = dim == 2 ? DimClass::Qubit : DimClass::Qudit;
  for (std::size_t k = 0; k < kPanelAngles.size(); ++k) {
    const double t = kPanelAngles[k];
    const auto spec = RegionSpec::make(t, cls);
    for (auto family : {SampleFamily::Pure, SampleFamily::Mixed}) {
      const SeededRng rng(o.seed, stream + 2 * k + (family == SampleFamily::Mixed ? 1 : 0));
      const auto pts = sample_scatter(t, dim, 100000, family, rng, o.threads);
      s.outside += count_outside(pts, spec, o.inject_fault, s.exceptions);
      s.points += pts.size();
    }
  }
  return s;
}

// Worst per-angle fraction of deep-Interior cells (margin < -1/200) hit by the oracle.
double min_coverage(std::size_t dim, std::uint64_t stream, const VerifyOptions& o, std::string& detail) {
  const std::size_t res = 400;
  double worst = 1.0;
  for (std::size_t k = 0; k < kPanelAngles.size(); ++k) {
    const double t = kPanelAngles[k];
    const auto spec = RegionSpec::make(t, dim == 2 ? DimClass::Qubit : DimClass::Qudit);
    OracleOptions opt;
    opt.threads = o.threads;
    const auto grid = oracle_region(t, dim, 4'000'000, res, SeededRng(o.seed, stream + k), opt);
    const auto cells = classify_grid(spec, res, o.threads);
    std::size_t eligible = 0;
    std::size_t covered = 0;
    for (std::size_t i = 0; i < res; ++i)
      for (std::size_t j = 0; j < res; ++j) {
        const auto& m = cells[i * res + j];
        if (m.verdict == Verdict::Interior && m.margin < -1.0 / 200.0) {
          ++eligible;
          covered += grid.marked(i, j) ? 1 : 0;
        }
      }
    const double cov = eligible ? static_cast<double>(covered) / static_cast<double>(eligible) : 1.0;
    worst = std::min(worst, cov);
    detail += fmt("%stheta=pi/%d coverage %.5f of %zu cells", detail.empty() ? "" : "; ",
                  static_cast<int>(std::lround(kPi / t)), cov, eligible);
  }
  return worst;
}

CriterionResult a1(const VerifyOptions& o) {
  const auto s = soundness(2, 100, o);
  const double bad = static_cast<double>(s.outside + s.exceptions);
  return {"A1", bad <= 0.0, bad, 0.0, "<=", 30.0, 0.0,
          fmt("%zu qubit points, %zu outside, %zu exceptions", s.points, s.outside, s.exceptions)};
}

CriterionResult a2(const VerifyOptions& o) {
  std::string detail;
  const double cov = min_coverage(2, 200, o, detail);
  return {"A2", cov >= 0.99, cov, 0.99, ">=", 0.0, 0.0, detail};
}

CriterionResult a3(const VerifyOptions& o) {
  VerifyOptions sound = o;
  sound.inject_fault = false;
  const auto s = soundness(3, 300, sound);
  std::string detail;
  const double cov = min_coverage(3, 320, o, detail);
  const auto full = classify_grid(RegionSpec::make(kPi / 3, DimClass::Qudit), 400, o.threads);
  const auto outside = static_cast<std::size_t>(
      std::count_if(full.begin(), full.end(), [](const Membership& m) { return m.verdict == Verdict::Outside; }));
  const bool pass = s.outside == 0 && s.exceptions == 0 && outside == 0 && cov >= 0.99;
  detail = fmt("%zu qutrit points, %zu outside, %zu exceptions; pi/3 grid 400x400 outside cells %zu; ", s.points,
               s.outside, s.exceptions, outside) +
           detail;
  return {"A3", pass, cov, 0.99, ">=", 0.0, 0.0, detail};
}

CriterionResult a4(const VerifyOptions& o) {
  const std::size_t res = 200;
  std::size_t compared = 0;
  std::size_t mismatches = 0;
  for (double t : {kPi / 12, kPi / 6, kPi / 4}) {
    const auto cells = classify_grid(RegionSpec::make(t, DimClass::Qudit), res, o.threads);
    for (std::size_t i = 0; i < res; ++i)
      for (std::size_t j = 0; j < res; ++j) {
        const auto& m = cells[i * res + j];
        if (std::abs(m.margin) <= 1e-6) continue;
        ++compared;
        const bool inside = m.verdict != Verdict::Outside;
        mismatches += alpha_feasible(grid_center(i, j, res), t).feasible != inside ? 1 : 0;
      }
  }
  return {"A4", mismatches == 0, static_cast<double>(mismatches), 0.0, "<=", 0.0, 0.0,
          fmt("%zu cells compared over 3 angles", compared)};
}

CriterionResult a5(const VerifyOptions& o) {
  SeededRng rng(o.seed, 500);
  double worst_rec = 0.0;
  double worst_unit = 0.0;
  double worst_inv = 0.0;
  std::size_t bad_angles = 0;
  std::size_t failures = 0;
  std::size_t blocks = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng() % 7);
    const auto rp = static_cast<std::size_t>(rng() % (d + 1));
    const auto rq = static_cast<std::size_t>(rng() % (d + 1));
    try {
      const auto p = random_projector(d, rp, rng);
      const auto q = random_projector(d, rq, rng);
      const auto dec = jordan_decompose(p, q);
      blocks += dec.blocks.size();
      const auto [pr, qr] = reconstruct(dec);
      worst_rec = std::max({worst_rec, max_abs_diff(pr, p.matrix()), max_abs_diff(qr, q.matrix())});
      worst_unit = std::max(worst_unit, unitarity_residual(dec.basis));
      const auto angles = dec.angles();
      for (double a : angles) bad_angles += (a > 0.0 && a <= kPi / 2) ? 0 : 1;
      const auto u = haar_unitary(d, rng);
      const auto pc = Projector::from_matrix(u * p.matrix() * u.adjoint(), 1e-9);
      const auto qc = Projector::from_matrix(u * q.matrix() * u.adjoint(), 1e-9);
      const auto moved = principal_angles(pc, qc);
      if (moved.size() != angles.size()) {
        ++failures;
        continue;
      }
      for (std::size_t i = 0; i < angles.size(); ++i) worst_inv = std::max(worst_inv, std::abs(moved[i] - angles[i]));
    } catch (const std::exception&) {
      ++failures;
    }
  }
  const bool pass = worst_rec <= 1e-9 && worst_unit <= 1e-10 && worst_inv <= 1e-9 && bad_angles == 0 && failures == 0;
  return {"A5", pass, worst_rec, 1e-9, "<=", 10.0, 0.0,
          fmt("1000 pairs, %zu blocks; unitarity %.3g (tol 1e-10); conjugation drift %.3g (tol 1e-9); "
              "angles outside (0, pi/2]: %zu; failures %zu",
              blocks, worst_unit, worst_inv, bad_angles, failures)};
}

CriterionResult a6(const VerifyOptions& o) {
  const auto ds = run_experiment(default_plan(o.seed), o.threads);
  std::size_t nt = 0, ht = 0, nq = 0, hq = 0, nb = 0, hb = 0;
  for (const auto& panel : ds.qutrit_panels)
    for (const auto& p : panel.points) {
      ++nt;
      ht += p.within_tolerance ? 1 : 0;
    }
  for (const auto& panel : ds.qubit_panels)
    for (const auto& p : panel.points) {
      ++nq;
      hq += p.within_tolerance ? 1 : 0;
      if (!p.ellipse_sigmas) continue;
      ++nb;
      hb += *p.ellipse_sigmas <= 3.0 ? 1 : 0;
    }
  auto ratio = [](std::size_t hit, std::size_t n) { return n ? static_cast<double>(hit) / static_cast<double>(n) : 0.0; };
  const double qutrit = ratio(ht, nt);
  const double qubit = ratio(hq, nq);
  const double ellipse = ratio(hb, nb);
  const double worst = std::min({qutrit, qubit, ellipse});
  return {"A6", worst >= 0.99, worst, 0.99, ">=", 60.0, 0.0,
          fmt("qutrit %.4f of %zu, qubit %.4f of %zu, boundary on ellipse within 3 sigma %.4f of %zu", qutrit, nt,
              qubit, nq, ellipse, nb)};
}

CriterionResult a7(const VerifyOptions& o) {
  const std::size_t res = 200;
  double worst = 0.0;
  std::string detail;
  for (std::size_t k = 0; k < kPanelAngles.size(); ++k) {
    const double t = kPanelAngles[k];
    OracleOptions pure_only{true, false, false, o.threads};
    OracleOptions mixed_only{false, true, false, o.threads};
    const auto a = oracle_region(t, 2, 8'000'000, res, SeededRng(o.seed, 700 + k), pure_only);
    const auto b = oracle_region(t, 2, 8'000'000, res, SeededRng(o.seed, 710 + k), mixed_only);
    const double frac = static_cast<double>(a.difference(b)) / static_cast<double>(res * res);
    worst = std::max(worst, frac);
    detail += fmt("%stheta=pi/%d %zu cells differ", detail.empty() ? "" : "; ",
                  static_cast<int>(std::lround(kPi / t)), a.difference(b));
  }
  return {"A7", worst < 0.005, worst, 0.005, "<", 0.0, 0.0, detail};
}

CriterionResult a8(const VerifyOptions& o) {
  const auto sic = sic_tetrahedron();
  std::vector<Projector> proj;
  for (const auto& s : sic) proj.push_back(Projector::rank_one(s.amplitudes()));
  SeededRng rng(o.seed, 800);
  double worst = 0.0;
  double min_dist = 1.0;
  for (int k = 0; k < 10000; ++k) {
    const auto psi = haar_pure(2, rng);
    worst = std::max(worst, std::abs(sic_variance_sum(psi) - 2.0 / 3.0));
    double d2 = 0.0;
    for (const auto& p : proj) d2 += std::pow(variance(p.matrix(), psi) - 0.25, 2);
    min_dist = std::min(min_dist, std::sqrt(d2));
  }
  const auto half = DensityMatrix::maximally_mixed(2);
  double corner = 0.0;
  for (const auto& p : proj) corner = std::max(corner, std::abs(variance(p.matrix(), half) - 0.25));
  const bool pass = worst <= 1e-12 && corner <= 1e-15 && min_dist > 0.01;
  return {"A8", pass, worst, 1e-12, "<=", 0.0, 0.0,
          fmt("I/2 gives (1/4,1/4,1/4,1/4) to %.3g; nearest pure-state point at distance %.6f (need > 0.01)", corner,
              min_dist)};
}

CriterionResult a9(const VerifyOptions& o) {
  SeededRng rng(o.seed, 900);
  auto packet = [&](double t_scale) {
    const double a = 0.3 + 2.0 * rng.uniform();
    const double k0 = -2.0 + 4.0 * rng.uniform();
    const double m = 0.5 + 2.0 * rng.uniform();
    const double hbar = 0.5 + rng.uniform();
    return GaussianPacket::make(a, k0, m, hbar, t_scale * rng.uniform());
  };
  std::size_t below = 0;
  double worst_eq = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const auto g = packet(5.0);
    below += spreads(g).product() < (g.hbar / 2.0) * (1.0 - 1e-12) ? 1 : 0;
    auto g0 = g;
    g0.t = 0.0;
    worst_eq = std::max(worst_eq, std::abs(spreads(g0).product() - g0.hbar / 2.0) / (g0.hbar / 2.0));
  }
  double worst_inv = 0.0;
  std::size_t unsolved = 0;
  for (int k = 0; k < 10000; ++k) {
    const double hbar = 0.5 + rng.uniform();
    const double m = 0.1 + 3.0 * rng.uniform();
    const double y = 0.05 + 3.0 * rng.uniform();
    const double x = hbar / (2.0 * y) * (1.0 + 20.0 * rng.uniform());
    const auto g = solve_packet_for(x, y, m, hbar);
    if (!g) {
      ++unsolved;
      continue;
    }
    const auto s = spreads(*g);
    worst_inv = std::max({worst_inv, std::abs(s.delta_x - x) / x, std::abs(s.delta_p - y) / y});
  }
  double worst_quad = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto g = packet(5.0);
    const auto q = quadrature_moments(g);
    const auto xs = position_stats(g);
    const auto ps = momentum_stats(g);
    const auto sp = spreads(g);
    auto rel = [](double got, double want, double floor) {
      return std::abs(got - want) / std::max(std::abs(want), floor);
    };
    worst_quad = std::max({worst_quad, rel(q.position.mean, xs.mean, sp.delta_x),
                           rel(q.position.second, xs.second, 0.0), rel(q.momentum.mean, ps.mean, sp.delta_p),
                           rel(q.momentum.second, ps.second, 0.0)});
  }
  const bool pass = below == 0 && worst_eq <= 1e-12 && unsolved == 0 && worst_inv <= 1e-9 && worst_quad <= 1e-6;
  return {"A9", pass, worst_quad, 1e-6, "<=", 0.0, 0.0,
          fmt("packets below hbar/2: %zu of 10000; t=0 equality %.3g; inverse round trip %.3g (tol 1e-9), "
              "unsolved %zu",
              below, worst_eq, worst_inv, unsolved)};
}

CriterionResult a10(const VerifyOptions& o) {
  std::size_t documents = 0;
  std::size_t differing = 0;
  auto compare = [&](const std::string& a, const std::string& b) {
    ++documents;
    differing += a == b ? 0 : 1;
  };
  for (auto family : {SampleFamily::Pure, SampleFamily::Mixed, SampleFamily::Boundary})
    for (std::size_t dim : {2, 3}) {
      const SeededRng rng(o.seed, 1000 + dim);
      compare(io::scatter_csv(sample_scatter(kPi / 6, dim, 50000, family, rng, 1), to_string(family)),
              io::scatter_csv(sample_scatter(kPi / 6, dim, 50000, family, rng, 8), to_string(family)));
    }
  const auto spec = RegionSpec::make(kPi / 5, DimClass::Qudit);
  compare(io::region_grid_csv(spec, 200, 1), io::region_grid_csv(spec, 200, 8));
  for (std::size_t dim : {2, 3}) {
    ++documents;
    OracleOptions one;
    OracleOptions eight;
    eight.threads = 8;
    const SeededRng rng(o.seed, 1010 + dim);
    differing += oracle_region(kPi / 5, dim, 200000, 100, rng, one) == oracle_region(kPi / 5, dim, 200000, 100, rng, eight)
                     ? 0
                     : 1;
  }
  const auto plan = default_plan(o.seed);
  const auto serial = run_experiment(plan, 1);
  const auto wide = run_experiment(plan, 8);
  for (std::size_t k = 0; k < serial.qutrit_panels.size(); ++k) {
    compare(io::panel_csv(serial.qutrit_panels[k]), io::panel_csv(wide.qutrit_panels[k]));
    compare(io::panel_csv(serial.qubit_panels[k]), io::panel_csv(wide.qubit_panels[k]));
  }
  return {"A10", differing == 0, static_cast<double>(differing), 0.0, "<=", 0.0, 0.0,
          fmt("%zu documents compared between 1 and 8 workers", documents)};
}

using Runner = CriterionResult (*)(const VerifyOptions&);

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r{{"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},
                                                             {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8},
                                                             {"A9", a9}, {"A10", a10}};
  return r;
}

}  // namespace

std::vector<std::string> criterion_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, run] : registry()) ids.push_back(id);
  return ids;
}

std::vector<CriterionResult> run_verification(const VerifyOptions& options,
                                              const std::function<void(const CriterionResult&)>& on_done) {
  const auto ids = criterion_ids();
  for (const auto& id : options.only)
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw std::invalid_argument("unknown criterion " + id);
  std::vector<CriterionResult> out;
  for (const auto& [id, run] : registry()) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end())
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = run(options);
    } catch (const std::exception& e) {
      r = CriterionResult{id, false, 0.0, 0.0, "<=", 0.0, 0.0, std::string("error: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.budget_seconds > 0.0 && r.seconds >= r.budget_seconds) {
      r.pass = false;
      r.detail += "; over runtime budget";
    }
    if (on_done) on_done(r);
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::json verification_report(const VerifyOptions& options, const std::vector<CriterionResult>& results) {
  nlohmann::json criteria = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    criteria.push_back({{"id", r.id},
                        {"pass", r.pass},
                        {"measured", r.measured},
                        {"tolerance", r.tolerance},
                        {"comparison", r.comparison},
                        {"budget_seconds", r.budget_seconds},
                        {"detail", r.detail}});
  }
  return {{"seed", options.seed}, {"all_pass", all}, {"criteria", std::move(criteria)}};
}

}  // namespace uregion
