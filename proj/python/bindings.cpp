#include "pilotseq/bounds.hpp"
#include "pilotseq/construct.hpp"
#include "pilotseq/metrics.hpp"
#include "pilotseq/mm.hpp"
#include "pilotseq/model.hpp"
#include "pilotseq/sim.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace pilotseq;

namespace {

SequenceSet makeSet(const CMatrix& data, int cells) {
  if (cells <= 0 || data.cols() % cells != 0)
    throw std::invalid_argument("number of columns must be a multiple of cells");
  return SequenceSet(cells, static_cast<int>(data.cols()) / cells, data);
}

py::object optionalValue(const std::optional<double>& v) {
  return v ? py::cast(*v) : py::none();
}

py::dict boundDict(const BoundReport& r) {
  py::dict d;
  d["welch"] = r.welch;
  d["extended_two_cell"] = optionalValue(r.extendedTwoCell);
  d["new_extended"] = optionalValue(r.newExtended);
  d["welch_reason"] = r.welchReason;
  d["extended_two_cell_reason"] = r.extendedTwoCellReason;
  d["new_extended_reason"] = r.newExtendedReason;
  d["b_is_positive_definite"] = r.bIsPositiveDefinite;
  d["b_class"] = toString(r.bClass);
  return d;
}

}  // namespace

PYBIND11_MODULE(_pilotseq, m) {
  m.doc() = "Pilot sequence design for multi-cell massive MIMO";

  py::register_exception<std::invalid_argument>(m, "ValidationError", PyExc_ValueError);

  py::class_<InterferenceMatrix>(m, "InterferenceMatrix")
      .def(py::init<RMatrix>(), py::arg("entries"))
      .def_static("toeplitz", &InterferenceMatrix::toeplitz, py::arg("cells"), py::arg("beta"))
      .def_static("identity", &InterferenceMatrix::identity, py::arg("cells"))
      .def_property_readonly("order", &InterferenceMatrix::order)
      .def_property_readonly("entries", &InterferenceMatrix::entries)
      .def("sum", &InterferenceMatrix::sum)
      .def("__repr__", [](const InterferenceMatrix& b) {
        return "InterferenceMatrix(order=" + std::to_string(b.order()) + ")";
      });

  m.def(
      "etsc", [](const CMatrix& s, const InterferenceMatrix& b) { return etsc(makeSet(s, b.order()), b); },
      py::arg("pilots"), py::arg("beta"), "Extended total squared correlation of a tau x JK matrix.");
  m.def(
      "tsc", [](const CMatrix& s) { return tsc(SequenceSet(1, static_cast<int>(s.cols()), s)); },
      py::arg("pilots"));
  m.def(
      "interference_split",
      [](const CMatrix& s, const InterferenceMatrix& b) {
        const auto split = interferenceSplit(makeSet(s, b.order()), b);
        return py::make_tuple(split.intra, split.inter);
      },
      py::arg("pilots"), py::arg("beta"), "Returns (intra, inter).");
  m.def(
      "sum_mse_analytic",
      [](const CMatrix& s, const InterferenceMatrix& b, double sigmaSq) {
        return sumMseAnalytic(makeSet(s, b.order()), b, sigmaSq);
      },
      py::arg("pilots"), py::arg("beta"), py::arg("sigma_sq"));
  m.def(
      "papr_db", [](const CVector& v) { return paprDb(v); }, py::arg("sequence"));

  m.def("welch_bound", &welchBound, py::arg("tau"), py::arg("cells"), py::arg("users"));
  m.def(
      "bound_report",
      [](int tau, int cells, int users, const InterferenceMatrix& b) {
        return boundDict(boundReport(tau, cells, users, b));
      },
      py::arg("tau"), py::arg("cells"), py::arg("users"), py::arg("beta"));

  m.def("wbe_truncated_dft", &wbeTruncatedDft, py::arg("tau"), py::arg("users"));
  m.def(
      "optimal_multi_cell",
      [](int tau, int users, const InterferenceMatrix& b, std::optional<std::uint64_t> seed) {
        return optimalMultiCell(tau, users, b, seed).data();
      },
      py::arg("tau"), py::arg("users"), py::arg("beta"), py::arg("row_permutation_seed") = py::none());
  m.def(
      "pooled_wbe", [](int tau, int cells, int users) { return pooledWbe(tau, cells, users).data(); },
      py::arg("tau"), py::arg("cells"), py::arg("users"));
  m.def(
      "random_set",
      [](int tau, int cells, int users, const std::string& constraint, std::uint64_t seed) {
        return randomSet(tau, cells, users, constraintFromString(constraint), seed).data();
      },
      py::arg("tau"), py::arg("cells"), py::arg("users"), py::arg("constraint") = "unit-norm",
      py::arg("seed") = 0);

  m.def(
      "solve",
      [](int tau, int cells, int users, const InterferenceMatrix& b, const std::string& constraint,
         int maxIterations, double epsilon, std::uint64_t seed, const std::string& acceleration) {
        OptimizerSettings settings{maxIterations, epsilon, seed, accelerationFromString(acceleration)};
        DesignProblem problem(tau, cells, users, b, constraintFromString(constraint), settings);
        DesignResult result = [&] {
          py::gil_scoped_release release;
          return solve(problem);
        }();
        py::dict trace;
        trace["objectives"] = result.trace.objectives;
        trace["termination"] = toString(result.trace.terminationReason);
        trace["wall_time"] = result.trace.wallTime;
        trace["map_evaluations"] = result.trace.mapEvaluations;
        return py::make_tuple(result.set.data(), trace);
      },
      py::arg("tau"), py::arg("cells"), py::arg("users"), py::arg("beta"),
      py::arg("constraint") = "unit-norm", py::arg("max_iterations") = 20000,
      py::arg("epsilon") = 1e-10, py::arg("seed") = 0, py::arg("acceleration") = "plain",
      "Runs ETSC-MM. Returns (pilots, trace).");

  m.def(
      "simulate",
      [](const CMatrix& s, const InterferenceMatrix& b, std::vector<double> sigmaSq, int trials,
         std::uint64_t seed, int threads) {
        SimulationConfig cfg{makeSet(s, b.order()), b, std::move(sigmaSq), trials, seed, threads};
        SimulationReport report = [&] {
          py::gil_scoped_release release;
          return runMonteCarlo(cfg);
        }();
        py::list rows;
        for (const auto& p : report.points) {
          py::dict d;
          d["sigma_sq"] = p.sigmaSq;
          d["empirical"] = p.empiricalMean;
          d["stderr"] = p.standardError;
          d["analytic"] = p.analytic;
          rows.append(d);
        }
        return rows;
      },
      py::arg("pilots"), py::arg("beta"), py::arg("sigma_sq"), py::arg("trials") = 10000,
      py::arg("seed") = 0, py::arg("threads") = 1);
}
