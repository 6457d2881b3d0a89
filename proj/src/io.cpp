#include "uregion/io.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>
#include <unistd.h>

namespace uregion::io {

namespace {

constexpr double kLeft = 70.0;
constexpr double kTop = 40.0;
constexpr double kSpan = 500.0;

double sx(double dA) { return kLeft + dA * 4.0 * kSpan; }
double sy(double dB) { return kTop + kSpan - dB * 4.0 * kSpan; }

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw IoError(std::string("missing JSON field '") + key + "'");
  return j.at(key);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

CVector vector_from_json(const json& j) {
  if (!j.is_array()) throw IoError("expected an array of [re, im] pairs");
  CVector v;
  v.reserve(j.size());
  for (const auto& z : j) v.push_back(complex_from_json(z));
  return v;
}

json vector_to_json(std::span<const Complex> v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(complex_to_json(z));
  return a;
}

void check_dim(const json& j, std::size_t actual) {
  if (j.is_object() && j.contains("dim") && j.at("dim").get<std::size_t>() != actual)
    throw IoError("declared dim does not match the data");
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw IoError("complex numbers are written as [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return json{{"dim", m.dim()}, {"matrix", std::move(rows)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  const json& rows = j.is_object() ? field(j, "matrix") : j;
  if (!rows.is_array() || rows.empty()) throw IoError("matrix must be a non-empty nested array");
  const std::size_t d = rows.size();
  std::vector<Complex> e;
  e.reserve(d * d);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != d) throw IoError("matrix rows must all have length dim");
    for (const auto& z : row) e.push_back(complex_from_json(z));
  }
  check_dim(j, d);
  return ComplexMatrix(d, std::move(e));
}

json state_to_json(const PureState& psi) {
  return json{{"dim", psi.dim()}, {"amplitudes", vector_to_json(psi.amplitudes())}};
}

PureState state_from_json(const json& j) {
  auto v = vector_from_json(j.is_object() ? field(j, "amplitudes") : j);
  check_dim(j, v.size());
  return PureState(std::move(v));
}

json projector_to_json(const Projector& p) {
  json j = matrix_to_json(p.matrix());
  j["rank"] = p.rank();
  return j;
}

Projector projector_from_json(const json& j) {
  if (j.is_object() && j.contains("vector")) {
    const auto v = vector_from_json(j.at("vector"));
    check_dim(j, v.size());
    return Projector::rank_one(v);
  }
  return Projector::from_matrix(matrix_from_json(j), 1e-9);
}

json jordan_to_json(const JordanDecomposition& dec) {
  json blocks = json::array();
  for (const auto& b : dec.blocks) {
    if (b.is_two())
      blocks.push_back(json{{"kind", "2d"}, {"theta", b.theta}});
    else
      blocks.push_back(json{{"kind", "1d"}, {"p", b.p}, {"q", b.q}});
  }
  json basis = matrix_to_json(dec.basis);
  return json{{"dim", dec.basis.dim()},
              {"basis", std::move(basis.at("matrix"))},
              {"blocks", std::move(blocks)},
              {"angles", dec.angles()}};
}

json plan_to_json(const ExperimentPlan& plan) {
  json states = json::array();
  for (const auto& s : plan.states)
    states.push_back(json{{"theta_A", s.prep.theta_A},
                          {"theta_B", s.prep.theta_B},
                          {"phi_1", s.prep.phi_1},
                          {"phi_2", s.prep.phi_2},
                          {"family", std::string(to_string(s.family))}});
  json settings = json::array();
  for (const auto& m : plan.settings) settings.push_back(m.theta_2);
  json pairs = json::array();
  for (const auto& [a, b] : plan.pairs) pairs.push_back(json::array({a, b}));
  return json{{"seed", plan.seed},
              {"shots", plan.shots},
              {"repeats", plan.repeats},
              {"ideal", plan.ideal},
              {"noise", {{"angle_jitter", plan.noise.angle_jitter}, {"visibility", plan.noise.visibility}}},
              {"settings", std::move(settings)},
              {"pairs", std::move(pairs)},
              {"states", std::move(states)}};
}

ExperimentPlan plan_from_json(const json& j) {
  ExperimentPlan plan;
  try {
    plan.seed = get_or<std::uint64_t>(j, "seed", plan.seed);
    plan.shots = get_or<std::uint64_t>(j, "shots", plan.shots);
    plan.repeats = get_or<unsigned>(j, "repeats", plan.repeats);
    plan.ideal = get_or<bool>(j, "ideal", plan.ideal);
    if (j.contains("noise")) {
      const json& n = j.at("noise");
      plan.noise.angle_jitter = get_or<double>(n, "angle_jitter", plan.noise.angle_jitter);
      plan.noise.visibility = get_or<double>(n, "visibility", plan.noise.visibility);
    }
    for (const auto& s : field(j, "settings")) plan.settings.push_back(MeasConfig{s.get<double>()});
    for (const auto& s : field(j, "states")) {
      PlanState ps;
      ps.prep.theta_A = get_or<double>(s, "theta_A", 0.0);
      ps.prep.theta_B = get_or<double>(s, "theta_B", 0.0);
      ps.prep.phi_1 = get_or<double>(s, "phi_1", 0.0);
      ps.prep.phi_2 = get_or<double>(s, "phi_2", 0.0);
      const auto fam = get_or<std::string>(s, "family", "generic");
      if (fam == "generic")
        ps.family = StateFamily::Generic;
      else if (fam == "boundary")
        ps.family = StateFamily::Boundary;
      else
        throw IoError("unknown state family '" + fam + "'");
      plan.states.push_back(ps);
    }
    if (j.contains("pairs")) {
      for (const auto& p : j.at("pairs")) {
        if (!p.is_array() || p.size() != 2) throw IoError("pairs are [j, k] index arrays");
        plan.pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
      }
    } else {
      for (std::size_t a = 0; a < plan.settings.size(); ++a)
        for (std::size_t b = a + 1; b < plan.settings.size(); ++b) plan.pairs.emplace_back(a, b);
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("bad plan: ") + e.what());
  }
  plan.validate();
  return plan;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  if (header.empty()) throw std::invalid_argument("CSV header must not be empty");
  row(header);
  rows_ = 0;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::invalid_argument("CSV row width differs from the header");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out_ += ',';
    out_ += csv_field(cells[k]);
  }
  out_ += "\r\n";
  ++rows_;
}

SvgPlot::SvgPlot(std::string title) : title_(std::move(title)) {}

void SvgPlot::mask(const std::vector<bool>& cells, std::size_t resolution, std::string_view fill) {
  if (cells.size() != resolution * resolution) throw std::invalid_argument("mask size must be resolution^2");
  const double w = kSpan / static_cast<double>(resolution);
  const double cell = 0.25 / static_cast<double>(resolution);
  body_ += "<g fill=\"" + std::string(fill) + "\" stroke=\"none\">\n";
  for (std::size_t i = 0; i < resolution; ++i) {
    std::size_t j = 0;
    while (j < resolution) {
      if (!cells[i * resolution + j]) {
        ++j;
        continue;
      }
      std::size_t end = j;
      while (end < resolution && cells[i * resolution + end]) ++end;
      body_ += "<rect x=\"" + fixed2(sx(i * cell)) + "\" y=\"" + fixed2(sy(end * cell)) + "\" width=\"" +
               fixed2(w) + "\" height=\"" + fixed2(w * static_cast<double>(end - j)) + "\"/>\n";
      j = end;
    }
  }
  body_ += "</g>\n";
}

void SvgPlot::polyline(const std::vector<VariancePoint>& pts, std::string_view stroke, bool closed) {
  if (pts.empty()) return;
  body_ += closed ? "<polygon" : "<polyline";
  body_ += " fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) body_ += ' ';
    body_ += fixed2(sx(pts[k].dA)) + "," + fixed2(sy(pts[k].dB));
  }
  body_ += "\"/>\n";
}

void SvgPlot::scatter(const std::vector<VariancePoint>& pts, std::string_view fill, double radius) {
  body_ += "<g fill=\"" + std::string(fill) + "\" fill-opacity=\"0.7\">\n";
  const std::string r = fixed2(radius);
  for (const auto& p : pts)
    body_ += "<circle cx=\"" + fixed2(sx(p.dA)) + "\" cy=\"" + fixed2(sy(p.dB)) + "\" r=\"" + r + "\"/>\n";
  body_ += "</g>\n";
}

std::string SvgPlot::render() const {
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"600\" height=\"600\" fill=\"white\"/>\n";
  s += "<text x=\"300\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">" +
       xml_escape(title_) + "</text>\n";
  s += body_;
  s += "<rect x=\"" + fixed2(kLeft) + "\" y=\"" + fixed2(kTop) + "\" width=\"" + fixed2(kSpan) + "\" height=\"" +
       fixed2(kSpan) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<g font-family=\"sans-serif\" font-size=\"12\" stroke=\"black\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double v = 0.05 * k;
    const std::string x = fixed2(sx(v));
    const std::string y = fixed2(sy(v));
    char label[16];
    std::snprintf(label, sizeof label, "%.2f", v);
    s += "<line x1=\"" + x + "\" y1=\"" + fixed2(kTop + kSpan) + "\" x2=\"" + x + "\" y2=\"" +
         fixed2(kTop + kSpan + 5) + "\"/>\n";
    s += "<text x=\"" + x + "\" y=\"" + fixed2(kTop + kSpan + 20) + "\" text-anchor=\"middle\" stroke=\"none\">" +
         label + "</text>\n";
    s += "<line x1=\"" + fixed2(kLeft - 5) + "\" y1=\"" + y + "\" x2=\"" + fixed2(kLeft) + "\" y2=\"" + y + "\"/>\n";
    s += "<text x=\"" + fixed2(kLeft - 8) + "\" y=\"" + fixed2(sy(v) + 4) +
         "\" text-anchor=\"end\" stroke=\"none\">" + label + "</text>\n";
  }
  s += "</g>\n";
  s += "<text x=\"320\" y=\"585\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">Var A</text>\n";
  s += "<text x=\"18\" y=\"290\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
       "transform=\"rotate(-90 18 290)\">Var B</text>\n";
  s += "</svg>\n";
  return s;
}

std::vector<VariancePoint> region_outline(const RegionSpec& spec, std::size_t n_points) {
  if (spec.dim_class == DimClass::Qubit) return qubit_boundary(spec.theta, n_points);
  try {
    return qudit_boundary(spec.theta, n_points);
  } catch (const BoxBoundaryFallback&) {
    return {};
  }
}

std::string region_grid_csv(const RegionSpec& spec, std::size_t resolution, unsigned threads) {
  const auto cells = classify_grid(spec, resolution, threads);
  CsvWriter csv({"dA", "dB", "verdict", "part"});
  for (std::size_t i = 0; i < resolution; ++i)
    for (std::size_t j = 0; j < resolution; ++j) {
      const auto c = grid_center(i, j, resolution);
      const auto& m = cells[i * resolution + j];
      csv.row({format_real(c.dA), format_real(c.dB), std::string(to_string(m.verdict)),
               std::string(to_string(m.which_part))});
    }
  return csv.str();
}

std::string region_boundary_csv(const RegionSpec& spec, std::size_t n_points) {
  CsvWriter csv({"dA", "dB", "verdict", "part"});
  for (const auto& p : region_outline(spec, n_points)) {
    const auto m = membership(p, spec, 1e-8);
    csv.row({format_real(p.dA), format_real(p.dB), std::string(to_string(m.verdict)),
             std::string(to_string(m.which_part))});
  }
  return csv.str();
}

std::string region_svg(const RegionSpec& spec, std::size_t resolution, std::size_t n_points, unsigned threads) {
  const auto cells = classify_grid(spec, resolution, threads);
  std::vector<bool> mask(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) mask[k] = cells[k].verdict != Verdict::Outside;
  SvgPlot plot(std::string(to_string(spec.dim_class)) + " region, theta = " + format_real(spec.theta));
  plot.mask(mask, resolution);
  plot.polyline(region_outline(spec, n_points));
  return plot.render();
}

std::string scatter_csv(const std::vector<VariancePoint>& pts, std::string_view kind) {
  CsvWriter csv({"dA", "dB", "state-kind"});
  const std::string k(kind);
  for (const auto& p : pts) csv.row({format_real(p.dA), format_real(p.dB), k});
  return csv.str();
}

std::string panel_csv(const Panel& panel) {
  CsvWriter csv({"state-index", "family", "dA", "dB", "verdict"});
  for (const auto& p : panel.points)
    csv.row({std::to_string(p.state), std::string(to_string(p.family)), format_real(p.point.dA),
             format_real(p.point.dB), std::string(to_string(p.membership.verdict))});
  return csv.str();
}

std::string panel_svg(const Panel& panel, std::string_view title) {
  SvgPlot plot{std::string(title)};
  const std::size_t res = 100;
  const auto cells = classify_grid(panel.spec, res);
  std::vector<bool> mask(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) mask[k] = cells[k].verdict != Verdict::Outside;
  plot.mask(mask, res);
  plot.polyline(panel.boundary);
  std::vector<VariancePoint> generic;
  std::vector<VariancePoint> boundary;
  for (const auto& p : panel.points) (p.family == StateFamily::Boundary ? boundary : generic).push_back(p.point);
  plot.scatter(generic);
  plot.scatter(boundary, "#15803d");
  return plot.render();
}

std::string panel_stem(const Panel& panel) {
  return std::string(panel.spec.dim_class == DimClass::Qubit ? "qubit" : "qutrit") + "_pair_" +
         std::to_string(panel.j) + "_" + std::to_string(panel.k);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

}  // namespace uregion::io
