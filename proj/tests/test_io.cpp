#include "pilotseq/construct.hpp"
#include "pilotseq/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace pilotseq;

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pilotseq_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("double formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 271.38461538461536, 0.0})
    CHECK(std::stod(io::formatDouble(v)) == v);
}

TEST_CASE("beta matrix formats") {
  const auto rows = io::parseBetaMatrix("[[1, 0.2], [0.2, 1]]");
  CHECK(rows(0, 1) == 0.2);
  const auto wrapped = io::parseBetaMatrix(R"({"B": [[1, 0.2], [0.2, 1]]})");
  CHECK(wrapped.entries() == rows.entries());
  const auto toeplitz = io::parseBetaMatrix(R"({"toeplitz": 0.5, "cells": 3})");
  CHECK(toeplitz.order() == 3);
  CHECK(toeplitz(2, 0) == 0.5);

  const auto b = InterferenceMatrix::toeplitz(4, 0.1);
  CHECK(io::parseBetaMatrix(io::formatBetaMatrix(b)).entries() == b.entries());

  CHECK_THROWS_AS(io::parseBetaMatrix("[[1, 0.2], [0.2]]"), io::IoError);
  CHECK_THROWS_AS(io::parseBetaMatrix("[[1, 0.3], [0.2, 1]]"), std::invalid_argument);
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    io::parseBetaMatrix("[[1, 0.2],\n [0.2 1]]", "b.json");
    FAIL("expected a parse error");
  } catch (const io::IoError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("b.json") != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
  }
}

TEST_CASE("sequence set round trip is bit exact") {
  for (auto c : {Constraint::UnitNorm, Constraint::Unimodular}) {
    const auto s = randomSet(5, 3, 2, c, 13);
    const std::string text = io::formatSequenceSet(s);
    const auto back = io::parseSequenceSet(text);
    CHECK(back.cells() == 3);
    CHECK(back.usersPerCell() == 2);
    CHECK(back.data() == s.data());
    CHECK(io::formatSequenceSet(back) == text);
  }
  const auto path = scratch("set.json");
  const auto s = optimalMultiCell(3, 4, InterferenceMatrix::toeplitz(2, 0.4));
  io::writeSequenceSet(path, s);
  CHECK(io::readSequenceSet(path).data() == s.data());
}

TEST_CASE("sequence set schema errors") {
  CHECK_THROWS_AS(io::parseSequenceSet(R"({"tau": 1, "J": 1, "K": 1})"), io::IoError);
  CHECK_THROWS_AS(io::parseSequenceSet(R"({"tau": 1, "J": 1, "K": 2, "entries": [[[1, 0]]]})"),
                  io::IoError);
  CHECK_THROWS_AS(io::parseSequenceSet(R"({"tau": 1, "J": 1, "K": 1, "entries": [[[1]]]})"),
                  io::IoError);
  CHECK_THROWS_AS(io::readSequenceSet(scratch("missing.json")), io::IoError);
}

TEST_CASE("problem round trip") {
  OptimizerSettings s;
  s.maxIterations = 123;
  s.epsilon = 3.3e-11;
  s.seed = 18446744073709551615ULL;
  s.acceleration = Acceleration::Squarem;
  const DesignProblem p(7, 2, 5, InterferenceMatrix::toeplitz(2, 0.3), Constraint::Unimodular, s);
  const std::string text = io::formatProblem(p);
  const auto back = io::parseProblem(text);
  CHECK(back.tau() == 7);
  CHECK(back.constraint() == Constraint::Unimodular);
  CHECK(back.settings().epsilon == s.epsilon);
  CHECK(back.settings().seed == s.seed);
  CHECK(back.settings().acceleration == Acceleration::Squarem);
  CHECK(back.beta().entries() == p.beta().entries());
  CHECK(io::formatProblem(back) == text);

  const auto defaults = io::parseProblem(R"({"tau": 4, "J": 1, "K": 4, "B": [[1]]})");
  CHECK(defaults.settings().maxIterations == 20000);
  CHECK(defaults.constraint() == Constraint::UnitNorm);
  CHECK_THROWS_AS(io::parseProblem(R"({"tau": 4, "J": 2, "K": 4, "B": [[1]]})"),
                  std::invalid_argument);
}

TEST_CASE("simulate config resolves relative paths") {
  const auto set = scratch("sim_set.json");
  io::writeSequenceSet(set, optimalMultiCell(2, 2, InterferenceMatrix::identity(2)));
  const auto cfg = scratch("sim.json");
  io::writeFile(cfg, R"({"B": {"toeplitz": 0.2, "cells": 2},
    "sets": [{"label": "built", "path": "sim_set.json"}],
    "sigmaSq": [0.1, 1], "trials": 50})");
  const auto c = io::readSimulateConfig(cfg);
  CHECK(c.sets.size() == 1);
  CHECK(c.sets[0].label == "built");
  CHECK(c.sigmaSqGrid.size() == 2);
  CHECK(c.trials == 50);
}

TEST_CASE("CSV writers") {
  OptimizerTrace t;
  t.objectives = {2.0, 1.5};
  t.elapsedSeconds = {0.0, 0.25};
  std::ostringstream a, b;
  io::writeTraceCsv(a, t, true);
  io::writeTraceCsv(b, t, false);
  CHECK(a.str() == "iteration,etsc,elapsed_seconds\n0,2,0\n1,1.5,0.25\n");
  CHECK(b.str() == "iteration,etsc,elapsed_seconds\n0,2,0\n1,1.5,0\n");

  std::ostringstream c;
  io::writeCcdfCsv(c, {{1.0, 0.5}});
  CHECK(c.str() == "papr_db,ccdf\n1,0.5\n");

  std::ostringstream d;
  io::writeSimulationCsvHeader(d);
  io::writeSimulationCsvRows(d, "x", SimulationReport{{{0.1, 1.0, 0.01, 1.1, 0.5, 10}}});
  CHECK(d.str() == "sigmaSq,setLabel,empiricalMse,stderr,analyticMse\n0.10000000000000001,x,1,0.01,1.1000000000000001\n");
}

TEST_CASE("bound report JSON marks absent bounds as null") {
  const auto text = io::formatBoundReport(boundReport(39, 3, 42, InterferenceMatrix(RMatrix::Ones(3, 3))));
  CHECK(text.find("\"newExtended\": null") != std::string::npos);
  CHECK(text.find("\"bIsPositiveDefinite\": false") != std::string::npos);
}
