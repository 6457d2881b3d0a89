#pragma once

// Serialization shared by the CLI and the bindings: JSON for states,
// operators, decompositions and experiment plans, RFC-4180 CSV, and a small
// fixed-viewport SVG plot writer.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uregion/jordan.hpp"
#include "uregion/photonics.hpp"
#include "uregion/qcore.hpp"
#include "uregion/regions.hpp"
#include "uregion/sampling.hpp"

namespace uregion::io {

using nlohmann::json;

// Thrown for malformed JSON documents and files that cannot be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Shortest form that reads back to the same double ("%.17g").
std::string format_real(double v);

json complex_to_json(Complex z);  // [re, im]
Complex complex_from_json(const json& j);

// {"dim": d, "matrix": [[[re, im], ...], ...]} with rows outermost.
json matrix_to_json(const ComplexMatrix& m);
// Accepts the object above or a bare nested array.
ComplexMatrix matrix_from_json(const json& j);

// {"dim": d, "amplitudes": [[re, im], ...]}
json state_to_json(const PureState& psi);
PureState state_from_json(const json& j);

// {"dim": d, "rank": r, "matrix": ...}. On input a "vector" key instead of
// "matrix" gives the rank-one projector on that (normalized) vector.
json projector_to_json(const Projector& p);
Projector projector_from_json(const json& j);

// {"dim", "basis", "blocks": [{"kind": "2d", "theta"} | {"kind": "1d", "p", "q"}], "angles"}
json jordan_to_json(const JordanDecomposition& dec);

json plan_to_json(const ExperimentPlan& plan);
// Missing shots, repeats, seed, noise and ideal take the ExperimentPlan
// defaults; missing pairs means every pair j < k. The result is validated.
ExperimentPlan plan_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
// Pretty-printed with two-space indent and a trailing newline.
std::string dump(const json& j);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  // Throws std::invalid_argument when the width differs from the header.
  void row(const std::vector<std::string>& cells);
  std::size_t rows() const { return rows_; }
  const std::string& str() const { return out_; }

 private:
  std::size_t width_;
  std::size_t rows_ = 0;
  std::string out_;
};

// Quotes fields containing a comma, quote, CR or LF.
std::string csv_field(std::string_view s);

// 600 x 600 plot of [0, 1/4]^2 with dA to the right and dB up.
class SvgPlot {
 public:
  static constexpr int kSize = 600;

  explicit SvgPlot(std::string title);
  // Cell (i, j) of a res x res mask filled, dA index outer as in classify_grid.
  void mask(const std::vector<bool>& cells, std::size_t resolution, std::string_view fill = "#cfe0f5");
  void polyline(const std::vector<VariancePoint>& pts, std::string_view stroke = "#1f4e9c", bool closed = true);
  void scatter(const std::vector<VariancePoint>& pts, std::string_view fill = "#c2410c", double radius = 1.6);
  std::string render() const;

 private:
  std::string title_;
  std::string body_;
};

// Documents emitted by the CLI. All are pure functions of their arguments,
// independent of the worker count.

// Boundary outline for plotting; empty when the region fills the box.
std::vector<VariancePoint> region_outline(const RegionSpec& spec, std::size_t n_points);
// Cell centers of a res x res grid: dA, dB, verdict, part.
std::string region_grid_csv(const RegionSpec& spec, std::size_t resolution, unsigned threads = 1);
// Boundary points with their own classification: dA, dB, verdict, part.
std::string region_boundary_csv(const RegionSpec& spec, std::size_t n_points);
std::string region_svg(const RegionSpec& spec, std::size_t resolution, std::size_t n_points, unsigned threads = 1);

// dA, dB, state-kind
std::string scatter_csv(const std::vector<VariancePoint>& pts, std::string_view kind);
// state-index, family, dA, dB, verdict
std::string panel_csv(const Panel& panel);
std::string panel_svg(const Panel& panel, std::string_view title);
// e.g. "qutrit_pair_0_1"
std::string panel_stem(const Panel& panel);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace uregion::io
