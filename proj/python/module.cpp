#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uregion/io.hpp"
#include "uregion/jordan.hpp"
#include "uregion/photonics.hpp"
#include "uregion/regions.hpp"
#include "uregion/sampling.hpp"
#include "uregion/verify.hpp"
#include "uregion/wavepacket.hpp"

namespace py = pybind11;
using namespace uregion;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw std::invalid_argument("expected a square matrix");
  const auto d = static_cast<std::size_t>(a.shape(0));
  return ComplexMatrix(d, std::vector<Complex>(a.data(), a.data() + d * d));
}

CArray to_array(const ComplexMatrix& m) {
  const auto d = static_cast<py::ssize_t>(m.dim());
  CArray out({d, d});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

py::array_t<double> points_array(const std::vector<VariancePoint>& pts) {
  py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    v(k, 0) = pts[k].dA;
    v(k, 1) = pts[k].dB;
  }
  return out;
}

DimClass dim_class(const std::string& s) {
  if (s == "qubit") return DimClass::Qubit;
  if (s == "qudit") return DimClass::Qudit;
  throw std::invalid_argument("dim_class must be 'qubit' or 'qudit'");
}

SampleFamily family(const std::string& s) {
  if (s == "pure") return SampleFamily::Pure;
  if (s == "mixed") return SampleFamily::Mixed;
  if (s == "boundary") return SampleFamily::Boundary;
  throw std::invalid_argument("family must be 'pure', 'mixed' or 'boundary'");
}

}  // namespace

PYBIND11_MODULE(_uregion, m) {
  m.doc() = "Variance uncertainty regions for pairs of projectors";

  py::register_exception<OutOfAnalyticScope>(m, "OutOfAnalyticScope", PyExc_ValueError);
  py::register_exception<BoxBoundaryFallback>(m, "BoxBoundaryFallback", PyExc_ValueError);
  py::register_exception<NoQubitEvents>(m, "NoQubitEvents", PyExc_RuntimeError);

  py::class_<Membership>(m, "Membership")
      .def_property_readonly("verdict", [](const Membership& x) { return std::string(to_string(x.verdict)); })
      .def_property_readonly("part", [](const Membership& x) { return std::string(to_string(x.which_part)); })
      .def_readonly("margin", &Membership::margin)
      .def("__repr__", [](const Membership& x) {
        return "Membership(" + std::string(to_string(x.verdict)) + ", " + std::string(to_string(x.which_part)) + ")";
      });

  m.def(
      "membership",
      [](double dA, double dB, double theta, const std::string& cls, double tol) {
        return membership(VariancePoint::make(dA, dB), RegionSpec::make(theta, dim_class(cls)), tol);
      },
      py::arg("dA"), py::arg("dB"), py::arg("theta"), py::arg("dim_class") = "qubit", py::arg("tol") = kMembershipTol);

  m.def(
      "classify_grid",
      [](double theta, const std::string& cls, std::size_t res, unsigned threads) {
        const auto cells = classify_grid(RegionSpec::make(theta, dim_class(cls)), res, threads);
        py::array_t<std::int8_t> out({static_cast<py::ssize_t>(res), static_cast<py::ssize_t>(res)});
        auto* p = out.mutable_data();
        for (std::size_t k = 0; k < cells.size(); ++k) p[k] = static_cast<std::int8_t>(cells[k].verdict);
        return out;
      },
      py::arg("theta"), py::arg("dim_class") = "qubit", py::arg("resolution") = 200, py::arg("threads") = 1,
      "Verdict codes per cell center (0 interior, 1 boundary, 2 outside), dA index first.");

  m.def("qubit_boundary", [](double theta, std::size_t n) { return points_array(qubit_boundary(theta, n)); },
        py::arg("theta"), py::arg("n") = 256);
  m.def("qudit_boundary", [](double theta, std::size_t n) { return points_array(qudit_boundary(theta, n)); },
        py::arg("theta"), py::arg("n") = 256);

  m.def(
      "alpha_feasible",
      [](double dA, double dB, double theta) {
        const auto r = alpha_feasible(VariancePoint::make(dA, dB), theta);
        return py::make_tuple(r.feasible, r.alpha_witness ? py::cast(*r.alpha_witness) : py::none());
      },
      py::arg("dA"), py::arg("dB"), py::arg("theta"));

  m.def(
      "jordan_decompose",
      [](const CArray& p, const CArray& q) {
        const auto dec = jordan_decompose(Projector::from_matrix(to_matrix(p), 1e-9),
                                          Projector::from_matrix(to_matrix(q), 1e-9));
        py::list blocks;
        for (const auto& b : dec.blocks) {
          if (b.is_two())
            blocks.append(py::dict(py::arg("kind") = "2d", py::arg("theta") = b.theta));
          else
            blocks.append(py::dict(py::arg("kind") = "1d", py::arg("p") = b.p, py::arg("q") = b.q));
        }
        return py::dict(py::arg("basis") = to_array(dec.basis), py::arg("blocks") = blocks,
                        py::arg("angles") = dec.angles());
      },
      py::arg("p"), py::arg("q"));

  m.def(
      "principal_angles",
      [](const CArray& p, const CArray& q) {
        return principal_angles(Projector::from_matrix(to_matrix(p), 1e-9), Projector::from_matrix(to_matrix(q), 1e-9));
      },
      py::arg("p"), py::arg("q"));

  m.def(
      "sample_scatter",
      [](double theta, std::size_t dim, std::size_t n, const std::string& fam, std::uint64_t seed, unsigned threads) {
        std::vector<VariancePoint> pts;
        {
          py::gil_scoped_release release;
          pts = sample_scatter(theta, dim, n, family(fam), SeededRng(seed, 0), threads);
        }
        return points_array(pts);
      },
      py::arg("theta"), py::arg("dim"), py::arg("n"), py::arg("family") = "pure", py::arg("seed") = 1,
      py::arg("threads") = 1);

  m.def(
      "oracle_region",
      [](double theta, std::size_t dim, std::size_t n, std::size_t res, std::uint64_t seed, bool pure, bool mixed,
         bool sweeps, unsigned threads) {
        OracleOptions opt{pure, mixed, sweeps, threads};
        std::optional<OccupancyGrid> grid;
        {
          py::gil_scoped_release release;
          grid.emplace(oracle_region(theta, dim, n, res, SeededRng(seed, 0), opt));
        }
        py::array_t<bool> out({static_cast<py::ssize_t>(res), static_cast<py::ssize_t>(res)});
        auto v = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < res; ++i)
          for (std::size_t j = 0; j < res; ++j) v(i, j) = grid->marked(i, j);
        return out;
      },
      py::arg("theta"), py::arg("dim"), py::arg("n_samples"), py::arg("resolution"), py::arg("seed") = 1,
      py::arg("pure") = true, py::arg("mixed") = true, py::arg("sweeps") = true, py::arg("threads") = 1);

  py::class_<GaussianPacket>(m, "GaussianPacket")
      .def(py::init(&GaussianPacket::make), py::arg("a") = 1.0, py::arg("k0") = 0.0, py::arg("m") = 1.0,
           py::arg("hbar") = 1.0, py::arg("t") = 0.0)
      .def_readonly("a", &GaussianPacket::a)
      .def_readonly("k0", &GaussianPacket::k0)
      .def_readonly("m", &GaussianPacket::m)
      .def_readonly("hbar", &GaussianPacket::hbar)
      .def_readonly("t", &GaussianPacket::t)
      .def("spreads", [](const GaussianPacket& p) {
        const auto s = spreads(p);
        return py::make_tuple(s.delta_x, s.delta_p);
      })
      .def("position_moments", [](const GaussianPacket& p) {
        const auto s = position_stats(p);
        return py::make_tuple(s.mean, s.second);
      })
      .def("momentum_moments", [](const GaussianPacket& p) {
        const auto s = momentum_stats(p);
        return py::make_tuple(s.mean, s.second);
      })
      .def("wavefunction", &wavefunction, py::arg("x"));

  m.def("solve_packet_for", &solve_packet_for, py::arg("delta_x"), py::arg("delta_p"), py::arg("m") = 1.0,
        py::arg("hbar") = 1.0);
  m.def("xp_membership", &xp_membership, py::arg("delta_x"), py::arg("delta_p"), py::arg("hbar") = 1.0);

  m.def("default_plan_json", [](std::uint64_t seed) { return io::plan_to_json(default_plan(seed)).dump(); },
        py::arg("seed") = 1);
  m.def(
      "run_experiment_json",
      [](const std::string& plan_json, unsigned threads) {
        const auto plan = io::plan_from_json(io::json::parse(plan_json));
        ExperimentDataset ds;
        {
          py::gil_scoped_release release;
          ds = run_experiment(plan, threads);
        }
        py::list panels;
        for (const auto* group : {&ds.qutrit_panels, &ds.qubit_panels})
          for (const auto& p : *group) {
            std::vector<VariancePoint> pts;
            py::list verdicts;
            std::vector<bool> ok;
            for (const auto& x : p.points) {
              pts.push_back(x.point);
              verdicts.append(std::string(to_string(x.membership.verdict)));
              ok.push_back(x.within_tolerance);
            }
            panels.append(py::dict(py::arg("name") = io::panel_stem(p), py::arg("theta") = p.spec.theta,
                                   py::arg("points") = points_array(pts), py::arg("verdicts") = verdicts,
                                   py::arg("within_tolerance") = ok, py::arg("boundary") = points_array(p.boundary)));
          }
        return panels;
      },
      py::arg("plan_json"), py::arg("threads") = 1);

  m.def(
      "verify_json",
      [](std::uint64_t seed, unsigned threads, const std::vector<std::string>& only, bool inject_fault) {
        VerifyOptions opt;
        opt.seed = seed;
        opt.threads = threads;
        opt.only = only;
        opt.inject_fault = inject_fault;
        std::vector<CriterionResult> results;
        {
          py::gil_scoped_release release;
          results = run_verification(opt);
        }
        return verification_report(opt, results).dump();
      },
      py::arg("seed") = 1, py::arg("threads") = 1, py::arg("only") = std::vector<std::string>{},
      py::arg("inject_fault") = false);
}
