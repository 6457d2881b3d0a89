#include "uregion/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <thread>

#include "uregion/io.hpp"
#include "uregion/jordan.hpp"
#include "uregion/photonics.hpp"
#include "uregion/regions.hpp"
#include "uregion/sampling.hpp"
#include "uregion/verify.hpp"
#include "uregion/wavepacket.hpp"

namespace uregion {

namespace {

namespace fs = std::filesystem;
using io::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string out;
  std::string out_dir;
  std::string format;
  bool degrees = false;

  double angle(double v) const { return degrees ? v * std::numbers::pi / 180.0 : v; }
};

void emit(const Globals& g, const std::string& content, std::ostream& out) {
  if (g.out.empty())
    out << content;
  else
    io::write_file_atomic(g.out, content);
}

std::string format_or(const Globals& g, const std::string& fallback, std::initializer_list<const char*> allowed) {
  const std::string f = g.format.empty() ? fallback : g.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw UsageError("--format " + f + " is not available for this subcommand");
}

std::pair<double, double> parse_pair(const std::string& s, const char* flag) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(s);
    std::size_t used = 0;
    const double a = std::stod(s.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(s);
    const std::string rest = s.substr(comma + 1);
    const double b = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
    return {a, b};
  } catch (const std::logic_error&) {
    throw UsageError(std::string(flag) + " expects two numbers as x,y");
  }
}

DimClass parse_dim_class(const std::string& s) { return s == "qubit" ? DimClass::Qubit : DimClass::Qudit; }

json membership_json(const VariancePoint& p, const Membership& m) {
  return json{{"dA", p.dA},
              {"dB", p.dB},
              {"verdict", std::string(to_string(m.verdict))},
              {"part", std::string(to_string(m.which_part))},
              {"margin", m.margin}};
}

struct RegionArgs {
  double theta = 0.0;
  std::string dim_class = "qubit";
  std::size_t grid = 400;
  std::size_t boundary_points = 256;
  std::string point;
};

void cmd_region(const Globals& g, const RegionArgs& a, bool grid_given, bool boundary_given, std::ostream& out) {
  const auto spec = RegionSpec::make(g.angle(a.theta), parse_dim_class(a.dim_class));
  if (!a.point.empty()) {
    const auto [x, y] = parse_pair(a.point, "--point");
    const auto p = VariancePoint::make(x, y);
    emit(g, io::dump(membership_json(p, membership(p, spec))), out);
    return;
  }
  const auto format = format_or(g, "csv", {"csv", "svg", "json"});
  if (format == "svg") {
    emit(g, io::region_svg(spec, a.grid, a.boundary_points, g.threads), out);
  } else if (format == "csv") {
    const bool boundary_only = boundary_given && !grid_given;
    emit(g, boundary_only ? io::region_boundary_csv(spec, a.boundary_points)
                          : io::region_grid_csv(spec, a.grid, g.threads),
         out);
  } else {
    const auto cells = classify_grid(spec, a.grid, g.threads);
    std::size_t inside = 0;
    for (const auto& m : cells) inside += m.verdict != Verdict::Outside ? 1 : 0;
    json boundary = json::array();
    for (const auto& p : io::region_outline(spec, a.boundary_points)) boundary.push_back(json::array({p.dA, p.dB}));
    emit(g,
         io::dump(json{{"theta", spec.theta},
                       {"dim_class", std::string(to_string(spec.dim_class))},
                       {"grid", a.grid},
                       {"covered_fraction", static_cast<double>(inside) / static_cast<double>(cells.size())},
                       {"boundary", std::move(boundary)}}),
         out);
  }
}

struct SampleArgs {
  double theta = 0.0;
  std::size_t dim = 2;
  std::size_t samples = 10000;
  bool mixed = false;
  bool boundary = false;
};

void cmd_sample(const Globals& g, const SampleArgs& a, std::ostream& out) {
  format_or(g, "csv", {"csv"});
  const auto family = a.mixed ? SampleFamily::Mixed : a.boundary ? SampleFamily::Boundary : SampleFamily::Pure;
  const auto pts = sample_scatter(g.angle(a.theta), a.dim, a.samples, family, SeededRng(g.seed, 0), g.threads);
  emit(g, io::scatter_csv(pts, to_string(family)), out);
}

void cmd_jordan(const Globals& g, const std::string& p_path, const std::string& q_path, std::ostream& out) {
  format_or(g, "json", {"json"});
  const auto p = io::projector_from_json(io::read_json_file(p_path));
  const auto q = io::projector_from_json(io::read_json_file(q_path));
  emit(g, io::dump(io::jordan_to_json(jordan_decompose(p, q))), out);
}

struct PacketArgs {
  double a = 1.0;
  double k0 = 0.0;
  double m = 1.0;
  double hbar = 1.0;
  double t = 0.0;
  std::string target;
  bool sweep = false;
  std::size_t sweep_points = 25;
};

json packet_json(const GaussianPacket& p) {
  const auto x = position_stats(p);
  const auto k = momentum_stats(p);
  const auto s = spreads(p);
  return json{{"a", p.a},
              {"k0", p.k0},
              {"m", p.m},
              {"hbar", p.hbar},
              {"t", p.t},
              {"position", {{"mean", x.mean}, {"second", x.second}}},
              {"momentum", {{"mean", k.mean}, {"second", k.second}}},
              {"delta_x", s.delta_x},
              {"delta_p", s.delta_p},
              {"product", s.product()},
              {"in_region", xp_membership(s.delta_x, s.delta_p, p.hbar)}};
}

void cmd_wavepacket(const Globals& g, const PacketArgs& a, std::ostream& out) {
  if (a.sweep) {
    format_or(g, "csv", {"csv"});
    if (a.sweep_points < 2) throw UsageError("--sweep-points must be at least 2");
    io::CsvWriter csv({"a", "t", "delta_x", "delta_p"});
    const std::size_t n = a.sweep_points;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double width = 0.2 * std::pow(25.0, static_cast<double>(i) / static_cast<double>(n - 1));
        const double t = 5.0 * static_cast<double>(j) / static_cast<double>(n - 1);
        const auto s = spreads(GaussianPacket::make(width, a.k0, a.m, a.hbar, t));
        csv.row({io::format_real(width), io::format_real(t), io::format_real(s.delta_x), io::format_real(s.delta_p)});
      }
    emit(g, csv.str(), out);
    return;
  }
  format_or(g, "json", {"json"});
  if (!a.target.empty()) {
    const auto [x, y] = parse_pair(a.target, "--target");
    const auto packet = solve_packet_for(x, y, a.m, a.hbar);
    if (!packet) throw std::runtime_error("target spreads violate delta_x delta_p >= hbar/2");
    emit(g, io::dump(packet_json(*packet)), out);
    return;
  }
  emit(g, io::dump(packet_json(GaussianPacket::make(a.a, a.k0, a.m, a.hbar, a.t))), out);
}

struct SimulateArgs {
  std::string plan;
  bool default_plan = false;
  std::uint64_t shots = 0;
  unsigned repeats = 0;
  bool ideal = false;
};

void cmd_simulate(const Globals& g, const SimulateArgs& a, bool seed_given, std::ostream& out) {
  if (g.out_dir.empty()) throw UsageError("simulate needs --out-dir");
  if (!g.out.empty()) throw UsageError("simulate writes several files; use --out-dir");
  ExperimentPlan plan = a.default_plan ? default_plan(g.seed) : io::plan_from_json(io::read_json_file(a.plan));
  if (seed_given) plan.seed = g.seed;
  if (a.shots) plan.shots = a.shots;
  if (a.repeats) plan.repeats = a.repeats;
  if (a.ideal) plan.ideal = true;
  plan.validate();

  const auto ds = run_experiment(plan, g.threads);
  const fs::path dir(g.out_dir);
  fs::create_directories(dir);
  io::write_file_atomic(dir / "plan.json", io::dump(io::plan_to_json(plan)));

  io::CsvWriter obs({"state-index", "setting", "n0", "n1", "n2"});
  for (const auto& o : ds.observations)
    obs.row({std::to_string(o.state), std::to_string(o.setting), std::to_string(o.counts.n0),
             std::to_string(o.counts.n1), std::to_string(o.counts.n2)});
  io::write_file_atomic(dir / "observations.csv", obs.str());

  json panels = json::array();
  for (const auto* group : {&ds.qutrit_panels, &ds.qubit_panels})
    for (const auto& panel : *group) {
      const auto stem = io::panel_stem(panel);
      io::write_file_atomic(dir / (stem + ".csv"), io::panel_csv(panel));
      const auto title = stem + ", angle " + io::format_real(panel.spec.theta);
      io::write_file_atomic(dir / (stem + ".svg"), io::panel_svg(panel, title));
      std::size_t ok = 0;
      for (const auto& p : panel.points) ok += p.within_tolerance ? 1 : 0;
      panels.push_back(json{{"name", stem},
                            {"theta", panel.spec.theta},
                            {"points", panel.points.size()},
                            {"within_tolerance", ok}});
    }
  out << io::dump(json{{"out_dir", dir.string()}, {"seed", plan.seed}, {"panels", std::move(panels)}});
}

struct VerifyArgs {
  std::vector<std::string> only;
  bool inject_fault = false;
};

std::string seconds_label(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

int cmd_verify(const Globals& g, const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  VerifyOptions opt;
  opt.seed = g.seed;
  opt.threads = g.threads;
  opt.inject_fault = a.inject_fault;
  opt.only = a.only;
  const auto results = run_verification(opt, [&](const CriterionResult& r) {
    err << r.id << (r.pass ? " PASS " : " FAIL ") << io::format_real(r.measured) << ' ' << r.comparison << ' '
        << io::format_real(r.tolerance) << " (" << seconds_label(r.seconds) << ")\n";
  });
  const auto report = verification_report(opt, results);
  emit(g, io::dump(report), out);
  return report.at("all_pass").get<bool>() ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variance uncertainty regions for pairs of projectors", "uregion"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file (default: standard output)");
  app.add_option("--out-dir", g.out_dir, "Output directory");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_flag("--degrees", g.degrees, "Read angle flags in degrees");

  RegionArgs ra;
  auto* region = app.add_subcommand("region", "Classify a grid or point, or trace the region boundary");
  region->add_option("--theta", ra.theta, "Principal angle")->required();
  region->add_option("--dim-class", ra.dim_class, "qubit or qudit")->check(CLI::IsMember({"qubit", "qudit"}));
  auto* grid_opt = region->add_option("--grid", ra.grid, "Grid resolution")->check(CLI::PositiveNumber);
  auto* bnd_opt =
      region->add_option("--boundary-points", ra.boundary_points, "Boundary points")->check(CLI::Range(3, 1000000));
  region->add_option("--point", ra.point, "Classify a single point dA,dB");

  SampleArgs sa;
  bool pure = false;
  auto* sample = app.add_subcommand("sample", "Variance points of random states");
  sample->add_option("--theta", sa.theta, "Principal angle")->required();
  sample->add_option("--dim", sa.dim, "State dimension")->check(CLI::Range(2, 16));
  sample->add_option("--samples", sa.samples, "Number of states");
  auto* f_pure = sample->add_flag("--pure", pure, "Haar pure states (default)");
  auto* f_mixed = sample->add_flag("--mixed", sa.mixed, "Hilbert-Schmidt mixed states");
  auto* f_bnd = sample->add_flag("--boundary", sa.boundary, "Equatorial boundary states");
  f_pure->excludes(f_mixed)->excludes(f_bnd);
  f_mixed->excludes(f_bnd);

  std::string p_path;
  std::string q_path;
  auto* jordan = app.add_subcommand("jordan", "Jordan decomposition of two projectors given as JSON files");
  jordan->add_option("--p", p_path, "First projector")->required()->check(CLI::ExistingFile);
  jordan->add_option("--q", q_path, "Second projector")->required()->check(CLI::ExistingFile);

  PacketArgs pa;
  auto* packet = app.add_subcommand("wavepacket", "Gaussian wave packet moments, inverse solve and sweep");
  packet->add_option("--a", pa.a, "Initial width");
  packet->add_option("--k0", pa.k0, "Carrier wavenumber times a");
  packet->add_option("--m", pa.m, "Mass");
  packet->add_option("--hbar", pa.hbar, "Reduced Planck constant");
  packet->add_option("--t", pa.t, "Time");
  auto* target = packet->add_option("--target", pa.target, "Target spreads delta_x,delta_p");
  auto* sweep = packet->add_flag("--sweep", pa.sweep, "CSV of spreads over a grid of widths and times");
  packet->add_option("--sweep-points", pa.sweep_points, "Grid points per axis");
  target->excludes(sweep);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate the counting experiment");
  auto* plan_opt = simulate->add_option("--plan", sim.plan, "Plan JSON file")->check(CLI::ExistingFile);
  auto* dflt = simulate->add_flag("--default-plan", sim.default_plan, "Built-in plan drawn from --seed");
  plan_opt->excludes(dflt);
  simulate->add_option("--shots", sim.shots, "Shots per repeat")->check(CLI::PositiveNumber);
  simulate->add_option("--repeats", sim.repeats, "Repeats per setting")->check(CLI::PositiveNumber);
  simulate->add_flag("--ideal", sim.ideal, "Exact probabilities instead of sampled counts");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--only", va.only, "Criterion ids to run")->delimiter(',');
  verify->add_flag("--inject-fault", va.inject_fault, "Flip membership verdicts (self-test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "uregion: " << e.what() << "\n";
    return 2;
  }

  try {
    if (region->parsed()) {
      cmd_region(g, ra, grid_opt->count() > 0, bnd_opt->count() > 0, out);
    } else if (sample->parsed()) {
      cmd_sample(g, sa, out);
    } else if (jordan->parsed()) {
      cmd_jordan(g, p_path, q_path, out);
    } else if (packet->parsed()) {
      cmd_wavepacket(g, pa, out);
    } else if (simulate->parsed()) {
      if (!sim.default_plan && sim.plan.empty()) throw UsageError("simulate needs --plan or --default-plan");
      cmd_simulate(g, sim, seed_opt->count() > 0, out);
    } else if (verify->parsed()) {
      return cmd_verify(g, va, out, err);
    }
  } catch (const UsageError& e) {
    err << "uregion: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "uregion: invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "uregion: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace uregion
