// pilotseq: construct, design, bound, eval and simulate pilot sequence sets.
//
// Exit codes: 0 success, 1 invalid arguments or validation failure, 2 file
// I/O or malformed file.

#include "pilotseq/bounds.hpp"
#include "pilotseq/construct.hpp"
#include "pilotseq/io.hpp"
#include "pilotseq/metrics.hpp"
#include "pilotseq/mm.hpp"
#include "pilotseq/random.hpp"
#include "pilotseq/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace pilotseq;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

void writeText(const std::string& path, const std::string& text) { io::writeFile(path, text); }

int threadsFromEnvironment() {
  if (const char* v = std::getenv("PILOTSEQ_THREADS")) {
    const int n = std::atoi(v);
    if (n > 0) return n;
  }
  return 1;
}

struct DimensionArgs {
  int tau = 0;
  int users = 0;
  int cells = 0;
  std::string betaPath;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tau", tau, "Sequence length")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--users", users, "Users per cell K")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--cells", cells, "Number of cells J")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--beta-matrix", betaPath, "Interference matrix JSON file")->required();
  }

  InterferenceMatrix beta() const {
    InterferenceMatrix b = io::readBetaMatrix(betaPath);
    if (b.order() != cells)
      throw std::invalid_argument(betaPath + ": matrix order " + std::to_string(b.order()) +
                                  " does not match --cells " + std::to_string(cells));
    return b;
  }
};

int runConstruct(const DimensionArgs& dims, const std::string& out,
                 std::optional<std::uint64_t> permuteSeed) {
  const InterferenceMatrix beta = dims.beta();
  const SequenceSet set = optimalMultiCell(dims.tau, dims.users, beta, permuteSeed);
  io::writeSequenceSet(out, set);
  const double achieved = etsc(set, beta);
  const double bound = *newExtendedWelchBound(dims.tau, dims.users, beta).value;
  ordered_json j;
  j["etsc"] = achieved;
  j["newExtendedBound"] = bound;
  j["relativeGap"] = (achieved - bound) / bound;
  j["out"] = out;
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct DesignArgs {
  std::string config;
  std::string out;
  std::string trace;
  std::string ccdf;
  bool unimodular = false;
  bool accelerate = false;
  bool noTiming = false;
  std::uint64_t seed = 0;
  std::optional<int> maxIterations;
};

int runDesign(const DesignArgs& a) {
  DesignProblem problem = io::readProblem(a.config);
  OptimizerSettings settings = problem.settings();
  settings.seed = a.seed;
  if (a.accelerate) settings.acceleration = Acceleration::Squarem;
  if (a.maxIterations) settings.maxIterations = *a.maxIterations;
  problem = problem.withSettings(settings);
  if (a.unimodular) problem = problem.withConstraint(Constraint::Unimodular);

  const DesignResult result = solve(problem);
  io::writeSequenceSet(a.out, result.set);

  std::ostringstream trace;
  io::writeTraceCsv(trace, result.trace, !a.noTiming);
  writeText(a.trace, trace.str());

  const auto papr = paprPerUserDb(result.set);
  if (!a.ccdf.empty()) {
    std::ostringstream ccdf;
    io::writeCcdfCsv(ccdf, paprCcdf(papr));
    writeText(a.ccdf, ccdf.str());
  }

  const BoundReport bounds =
      boundReport(problem.tau(), problem.cells(), problem.usersPerCell(), problem.beta());
  const double bound = bounds.tightestEtscBound(problem.constraint(), problem.beta());
  ordered_json j;
  j["constraint"] = toString(problem.constraint());
  j["acceleration"] = toString(settings.acceleration);
  j["seed"] = settings.seed;
  j["iterations"] = result.trace.objectives.size() - 1;
  j["termination"] = toString(result.trace.terminationReason);
  j["initialEtsc"] = result.trace.objectives.front();
  j["finalEtsc"] = result.trace.objectives.back();
  j["bound"] = bound > 0.0 ? ordered_json(bound) : ordered_json(nullptr);
  j["maxPaprDb"] = *std::max_element(papr.begin(), papr.end());
  std::cout << j.dump(2) << "\n";
  return 0;
}

int runBound(const DimensionArgs& dims) {
  std::cout << io::formatBoundReport(boundReport(dims.tau, dims.cells, dims.users, dims.beta()));
  return 0;
}

int runEval(const std::string& setPath, const std::string& betaPath, const std::string& ccdfPath) {
  const SequenceSet set = io::readSequenceSet(setPath);
  const InterferenceMatrix beta = io::readBetaMatrix(betaPath);
  const EvaluationRecord record = evaluate(set, beta);
  if (!ccdfPath.empty()) {
    std::ostringstream ccdf;
    io::writeCcdfCsv(ccdf, paprCcdf(record.paprPerUserDb));
    writeText(ccdfPath, ccdf.str());
  }
  std::cout << io::formatEvaluation(record);
  return 0;
}

int runSimulate(const std::string& configPath, std::uint64_t seed, std::optional<int> trials,
                const std::string& outPath) {
  const io::SimulateConfig cfg = io::readSimulateConfig(configPath);
  std::ostringstream csv;
  io::writeSimulationCsvHeader(csv);
  for (std::size_t i = 0; i < cfg.sets.size(); ++i) {
    SimulationConfig sc{cfg.sets[i].set, cfg.beta, cfg.sigmaSqGrid, trials.value_or(cfg.trials),
                        CounterRng::deriveKey(seed, {i}), threadsFromEnvironment()};
    io::writeSimulationCsvRows(csv, cfg.sets[i].label, runMonteCarlo(sc));
  }
  if (outPath.empty())
    std::cout << csv.str();
  else
    writeText(outPath, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design and evaluate non-orthogonal pilot sequence sets for multi-cell networks"};
  app.require_subcommand(1);

  DimensionArgs constructDims;
  std::string constructOut;
  std::optional<std::uint64_t> permuteSeed;
  auto* construct = app.add_subcommand("construct", "Build the bound-achieving set (K >= tau, PD B)");
  constructDims.attach(construct);
  construct->add_option("--out", constructOut, "Output sequence-set file")->required();
  construct->add_option("--permute-rows-seed", permuteSeed,
                        "Permute each cell's rows independently (ETSC unchanged)");

  DesignArgs design;
  auto* designCmd = app.add_subcommand("design", "Run the ETSC-MM optimizer");
  designCmd->add_option("--config", design.config, "Problem config JSON")->required();
  designCmd->add_option("--out", design.out, "Output sequence-set file")->required();
  designCmd->add_option("--trace", design.trace, "Convergence trace CSV")->required();
  designCmd->add_option("--seed", design.seed, "Initialization seed")->required();
  designCmd->add_option("--max-iterations", design.maxIterations, "Override the iteration budget")
      ->check(CLI::PositiveNumber);
  designCmd->add_option("--papr-ccdf", design.ccdf, "Write the per-user PAPR CCDF CSV");
  designCmd->add_flag("--unimodular", design.unimodular, "Constrain pilots to be unimodular");
  designCmd->add_flag("--accelerate", design.accelerate, "Use SQUAREM acceleration");
  designCmd->add_flag("--no-timing", design.noTiming, "Write 0 in the trace timing column");

  DimensionArgs boundDims;
  auto* bound = app.add_subcommand("bound", "Report the applicable lower bounds as JSON");
  boundDims.attach(bound);

  std::string evalSet, evalBeta, evalCcdf;
  auto* evalCmd = app.add_subcommand("eval", "Evaluate a sequence set as JSON");
  evalCmd->add_option("--set", evalSet, "Sequence-set file")->required();
  evalCmd->add_option("--beta-matrix", evalBeta, "Interference matrix JSON file")->required();
  evalCmd->add_option("--papr-ccdf", evalCcdf, "Write the per-user PAPR CCDF CSV");

  std::string simConfig, simOut;
  std::uint64_t simSeed = 0;
  std::optional<int> simTrials;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo LS channel estimation sum MSE");
  simulate->add_option("--config", simConfig, "Simulation config JSON")->required();
  simulate->add_option("--seed", simSeed, "Monte-Carlo seed")->required();
  simulate->add_option("--trials", simTrials, "Override trials per grid point")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--out", simOut, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (construct->parsed()) return runConstruct(constructDims, constructOut, permuteSeed);
    if (designCmd->parsed()) return runDesign(design);
    if (bound->parsed()) return runBound(boundDims);
    if (evalCmd->parsed()) return runEval(evalSet, evalBeta, evalCcdf);
    if (simulate->parsed()) return runSimulate(simConfig, simSeed, simTrials, simOut);
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}
