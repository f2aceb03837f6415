#pragma once

#include "pilotseq/bounds.hpp"
#include "pilotseq/metrics.hpp"
#include "pilotseq/mm.hpp"
#include "pilotseq/model.hpp"
#include "pilotseq/sim.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace pilotseq::io {

/// File could not be read, written or parsed. what() carries the path and,
/// for syntax errors, line and column.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest exact text would also round-trip; files use a fixed 17
/// significant digits instead so output width is predictable.
std::string formatDouble(double v);

std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, const std::string& contents);

// Interference matrix: a J x J array of rows, {"B": rows}, or the shorthand
// {"toeplitz": beta, "cells": J}.
InterferenceMatrix parseBetaMatrix(const std::string& text, const std::string& origin = "<input>");
InterferenceMatrix readBetaMatrix(const std::filesystem::path& path);
std::string formatBetaMatrix(const InterferenceMatrix& beta);

// Sequence set: {"tau", "J", "K", "entries"} with entries a tau-row array of
// J*K [re, im] pairs per row.
SequenceSet parseSequenceSet(const std::string& text, const std::string& origin = "<input>");
SequenceSet readSequenceSet(const std::filesystem::path& path);
std::string formatSequenceSet(const SequenceSet& set);
void writeSequenceSet(const std::filesystem::path& path, const SequenceSet& set);

// Problem config: {"tau", "J", "K", "B", "constraint", "optimizer": {
// "maxIterations", "epsilon", "seed", "acceleration"}}.
DesignProblem parseProblem(const std::string& text, const std::string& origin = "<input>");
DesignProblem readProblem(const std::filesystem::path& path);
std::string formatProblem(const DesignProblem& problem);

struct LabeledSet {
  std::string label;
  SequenceSet set;
};

struct SimulateConfig {
  InterferenceMatrix beta;
  std::vector<LabeledSet> sets;
  std::vector<double> sigmaSqGrid;
  int trials;
  std::uint64_t seed;
};

// Simulate config: {"B", "sets": [{"label", "path"}], "sigmaSq": [...],
// "trials", "seed"}. Relative set paths resolve against the config's folder.
SimulateConfig readSimulateConfig(const std::filesystem::path& path);

std::string formatBoundReport(const BoundReport& report);
std::string formatEvaluation(const EvaluationRecord& record);

/// iteration,etsc,elapsed_seconds. With `includeTiming` false the timing
/// column is written as 0 so the file is reproducible byte for byte.
void writeTraceCsv(std::ostream& out, const OptimizerTrace& trace, bool includeTiming = true);
void writeCcdfCsv(std::ostream& out, const std::vector<CcdfPoint>& ccdf);
void writeSimulationCsvHeader(std::ostream& out);
void writeSimulationCsvRows(std::ostream& out, const std::string& label,
                            const SimulationReport& report);

}  // namespace pilotseq::io
