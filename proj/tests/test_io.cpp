#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "uregion/io.hpp"
#include "support.hpp"

using namespace uregion;
using namespace uregion::io;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Count of '<' minus matched closing forms; 0 for balanced markup.
int tag_balance(const std::string& s) {
  int depth = 0;
  for (std::size_t k = s.find('<'); k != std::string::npos; k = s.find('<', k + 1)) {
    const std::size_t end = s.find('>', k);
    if (end == std::string::npos) return -1000;
    if (s[k + 1] == '?') continue;
    if (s[k + 1] == '/')
      --depth;
    else if (s[end - 1] != '/')
      ++depth;
  }
  return depth;
}

}  // namespace

TEST_CASE("format_real round trips") {
  CHECK(format_real(0.25) == "0.25");
  CHECK(format_real(1.0 / 3.0) == "0.33333333333333331");
  for (double v : {std::numbers::pi, 1e-300, -2.5e17, 0.1875})
    CHECK(std::stod(format_real(v)) == v);
}

TEST_CASE("complex and matrix JSON") {
  CHECK(complex_to_json({1.5, -2.0}).dump() == "[1.5,-2.0]");
  CHECK(complex_from_json(json::parse("[0.5, 3]")) == Complex(0.5, 3.0));
  CHECK_THROWS_AS(complex_from_json(json::parse("[1]")), IoError);

  std::mt19937_64 gen(3);
  const auto m = testing_support::random_hermitian(4, gen);
  const auto j = matrix_to_json(m);
  CHECK(j["dim"] == 4);
  CHECK(j["matrix"].size() == 4);
  CHECK(j["matrix"][1].size() == 4);
  CHECK(max_abs_diff(matrix_from_json(j), m) == 0.0);
  CHECK(max_abs_diff(matrix_from_json(json::parse(j.dump())), m) == 0.0);
  CHECK(max_abs_diff(matrix_from_json(j["matrix"]), m) == 0.0);

  json bad = j;
  bad["dim"] = 3;
  CHECK_THROWS_AS(matrix_from_json(bad), IoError);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[[1,0],[0,0]],[[0,0]]]")), IoError);
}

TEST_CASE("state and projector JSON") {
  const PureState psi(CVector{Complex(0.6, 0.0), Complex(0.0, 0.8)});
  const auto back = state_from_json(state_to_json(psi));
  CHECK(back[0] == psi[0]);
  CHECK(back[1] == psi[1]);
  CHECK_THROWS(state_from_json(json::parse(R"({"amplitudes": [[1,0],[1,0]]})")));

  const auto p = projector_from_json(json::parse(R"({"dim": 2, "vector": [[1,0],[1,0]]})"));
  CHECK(p.rank() == 1);
  CHECK(std::abs(p.matrix()(0, 1).real() - 0.5) < 1e-15);
  const auto q = projector_from_json(projector_to_json(p));
  CHECK(max_abs_diff(q.matrix(), p.matrix()) == 0.0);
  CHECK(projector_to_json(p)["rank"] == 1);
  CHECK_THROWS(projector_from_json(json::parse(R"({"matrix": [[[1,0],[1,0]],[[0,0],[0,0]]]})")));
}

TEST_CASE("jordan JSON") {
  const double t = 0.4;
  const auto p = Projector::rank_one(CVector{1.0, 0.0, 0.0});
  const auto q = Projector::rank_one(CVector{std::cos(t), std::sin(t), 0.0});
  const auto j = jordan_to_json(jordan_decompose(p, q));
  CHECK(j["dim"] == 3);
  REQUIRE(j["blocks"].size() == 2);
  CHECK(j["blocks"][0]["kind"] == "2d");
  CHECK(std::abs(j["blocks"][0]["theta"].get<double>() - t) < 1e-12);
  CHECK(j["blocks"][1]["kind"] == "1d");
  CHECK(j["blocks"][1]["p"] == 0);
  CHECK(j["angles"].size() == 1);
  CHECK(unitarity_residual(matrix_from_json(j["basis"])) < 1e-12);
}

TEST_CASE("plan JSON round trip") {
  auto plan = default_plan(5);
  plan.noise.visibility = 0.97;
  const auto j = plan_to_json(plan);
  const auto back = plan_from_json(json::parse(j.dump()));
  CHECK(plan_to_json(back) == j);
  REQUIRE(back.states.size() == 400);
  CHECK(back.states[17].prep.theta_A == plan.states[17].prep.theta_A);
  CHECK(back.count(StateFamily::Boundary) == 100);
  CHECK(back.pairs == plan.pairs);

  const auto minimal = plan_from_json(json::parse(R"({"settings": [0, 0.1, 0.2], "states": [{"theta_A": 1}]})"));
  CHECK(minimal.shots == 45000);
  CHECK(minimal.repeats == 5);
  CHECK(minimal.pairs.size() == 3);
  CHECK_THROWS(plan_from_json(json::parse(R"({"settings": [0], "states": [{}], "pairs": [[0, 4]]})")));
  CHECK_THROWS_AS(plan_from_json(json::parse(R"({"settings": [0]})")), IoError);
  CHECK_THROWS_AS(plan_from_json(json::parse(R"({"settings": [0], "states": [{"family": "x"}]})")), IoError);
}

TEST_CASE("CSV writer") {
  CsvWriter w({"a", "b"});
  w.row({"1", "x,y"});
  w.row({"say \"hi\"", "line\nbreak"});
  CHECK(w.rows() == 2);
  CHECK(w.str() == "a,b\r\n1,\"x,y\"\r\n\"say \"\"hi\"\"\",\"line\nbreak\"\r\n");
  CHECK_THROWS_AS(w.row({"1"}), std::invalid_argument);
}

TEST_CASE("SVG plot") {
  SvgPlot plot("qubit <pi/6> & more");
  const auto spec = RegionSpec::make(std::numbers::pi / 6, DimClass::Qubit);
  const std::size_t res = 40;
  const auto cells = classify_grid(spec, res);
  std::vector<bool> mask;
  for (const auto& m : cells) mask.push_back(m.verdict != Verdict::Outside);
  plot.mask(mask, res);
  plot.polyline(qubit_boundary(std::numbers::pi / 6, 50));
  plot.scatter({{0.1, 0.2}, {0.25, 0.0}});
  const auto svg = plot.render();
  CHECK(svg.find("viewBox=\"0 0 600 600\"") != std::string::npos);
  CHECK(svg.find("&lt;pi/6&gt; &amp;") != std::string::npos);
  CHECK(svg.find("cx=\"570.00\" cy=\"540.00\"") != std::string::npos);
  CHECK(tag_balance(svg) == 0);
  CHECK(plot.render() == svg);
  CHECK_THROWS(plot.mask(mask, res + 1));
}

TEST_CASE("atomic write") {
  const auto dir = std::filesystem::temp_directory_path() / "uregion_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  write_file_atomic(path, "first");
  write_file_atomic(path, "second\n");
  CHECK(slurp(path) == "second\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK_THROWS_AS(write_file_atomic(dir / "missing" / "x.txt", "x"), IoError);
  std::filesystem::remove_all(dir);
}
