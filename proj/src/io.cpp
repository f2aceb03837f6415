#include "pilotseq/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pilotseq::io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string lineColumn(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parseJson(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte points one past the offending character
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw IoError(origin + ": " + lineColumn(text, at) + ": malformed JSON");
  }
}

template <typename T>
T field(const json& j, const char* key, const std::string& origin) {
  if (!j.is_object() || !j.contains(key))
    throw IoError(origin + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw IoError(origin + ": field '" + key + "' has the wrong type");
  }
}

InterferenceMatrix betaFromJson(const json& j, const std::string& origin) {
  if (j.is_object() && j.contains("toeplitz")) {
    return InterferenceMatrix::toeplitz(field<int>(j, "cells", origin),
                                        field<double>(j, "toeplitz", origin));
  }
  const json& rows = (j.is_object() && j.contains("B")) ? j.at("B") : j;
  if (rows.is_object()) return betaFromJson(rows, origin);
  if (!rows.is_array() || rows.empty())
    throw IoError(origin + ": interference matrix must be a non-empty array of rows");
  const auto J = static_cast<Eigen::Index>(rows.size());
  RMatrix b(J, J);
  for (Eigen::Index m = 0; m < J; ++m) {
    const json& row = rows[static_cast<std::size_t>(m)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != J)
      throw IoError(origin + ": interference matrix row " + std::to_string(m) +
                    " must have " + std::to_string(J) + " entries");
    for (Eigen::Index n = 0; n < J; ++n) {
      if (!row[static_cast<std::size_t>(n)].is_number())
        throw IoError(origin + ": interference matrix entry is not a number");
      b(m, n) = row[static_cast<std::size_t>(n)].get<double>();
    }
  }
  return InterferenceMatrix(std::move(b));
}

ordered_json betaToJson(const InterferenceMatrix& beta) {
  ordered_json rows = ordered_json::array();
  for (int m = 0; m < beta.order(); ++m) {
    ordered_json row = ordered_json::array();
    for (int n = 0; n < beta.order(); ++n) row.push_back(beta(m, n));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json optional(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::string formatDouble(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << contents;
  if (!out) throw IoError(path.string() + ": write failed");
}

InterferenceMatrix parseBetaMatrix(const std::string& text, const std::string& origin) {
  return betaFromJson(parseJson(text, origin), origin);
}

InterferenceMatrix readBetaMatrix(const std::filesystem::path& path) {
  return parseBetaMatrix(readFile(path), path.string());
}

std::string formatBetaMatrix(const InterferenceMatrix& beta) {
  ordered_json j;
  j["B"] = betaToJson(beta);
  return j.dump(2) + "\n";
}

SequenceSet parseSequenceSet(const std::string& text, const std::string& origin) {
  const json j = parseJson(text, origin);
  const int tau = field<int>(j, "tau", origin);
  const int J = field<int>(j, "J", origin);
  const int K = field<int>(j, "K", origin);
  if (tau < 1 || J < 1 || K < 1) throw IoError(origin + ": tau, J and K must be >= 1");
  const json& rows = j.contains("entries") ? j.at("entries") : json();
  if (!rows.is_array() || static_cast<int>(rows.size()) != tau)
    throw IoError(origin + ": 'entries' must hold tau = " + std::to_string(tau) + " rows");
  CMatrix s(tau, J * K);
  for (int t = 0; t < tau; ++t) {
    const json& row = rows[static_cast<std::size_t>(t)];
    if (!row.is_array() || static_cast<int>(row.size()) != J * K)
      throw IoError(origin + ": row " + std::to_string(t) + " must hold J*K = " +
                    std::to_string(J * K) + " entries");
    for (int n = 0; n < J * K; ++n) {
      const json& e = row[static_cast<std::size_t>(n)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw IoError(origin + ": entry (" + std::to_string(t) + ", " + std::to_string(n) +
                      ") must be a [re, im] pair");
      s(t, n) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return SequenceSet(J, K, std::move(s));
}

SequenceSet readSequenceSet(const std::filesystem::path& path) {
  return parseSequenceSet(readFile(path), path.string());
}

std::string formatSequenceSet(const SequenceSet& set) {
  std::string out;
  out += "{\n  \"tau\": " + std::to_string(set.tau()) + ",\n";
  out += "  \"J\": " + std::to_string(set.cells()) + ",\n";
  out += "  \"K\": " + std::to_string(set.usersPerCell()) + ",\n";
  out += "  \"entries\": [\n";
  const CMatrix& s = set.data();
  for (Eigen::Index t = 0; t < s.rows(); ++t) {
    out += "    [";
    for (Eigen::Index n = 0; n < s.cols(); ++n) {
      if (n) out += ", ";
      out += "[" + formatDouble(s(t, n).real()) + ", " + formatDouble(s(t, n).imag()) + "]";
    }
    out += t + 1 < s.rows() ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

void writeSequenceSet(const std::filesystem::path& path, const SequenceSet& set) {
  writeFile(path, formatSequenceSet(set));
}

DesignProblem parseProblem(const std::string& text, const std::string& origin) {
  const json j = parseJson(text, origin);
  const int tau = field<int>(j, "tau", origin);
  const int J = field<int>(j, "J", origin);
  const int K = field<int>(j, "K", origin);
  if (!j.contains("B")) throw IoError(origin + ": missing field 'B'");
  InterferenceMatrix beta = betaFromJson(j.at("B"), origin);

  Constraint constraint = Constraint::UnitNorm;
  if (j.contains("constraint"))
    constraint = constraintFromString(field<std::string>(j, "constraint", origin));

  OptimizerSettings settings;
  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    if (o.contains("maxIterations")) settings.maxIterations = field<int>(o, "maxIterations", origin);
    if (o.contains("epsilon")) settings.epsilon = field<double>(o, "epsilon", origin);
    if (o.contains("seed")) settings.seed = field<std::uint64_t>(o, "seed", origin);
    if (o.contains("acceleration"))
      settings.acceleration =
          accelerationFromString(field<std::string>(o, "acceleration", origin));
  }
  return DesignProblem(tau, J, K, std::move(beta), constraint, settings);
}

DesignProblem readProblem(const std::filesystem::path& path) {
  return parseProblem(readFile(path), path.string());
}

std::string formatProblem(const DesignProblem& problem) {
  ordered_json j;
  j["tau"] = problem.tau();
  j["J"] = problem.cells();
  j["K"] = problem.usersPerCell();
  j["B"] = betaToJson(problem.beta());
  j["constraint"] = toString(problem.constraint());
  const auto& s = problem.settings();
  j["optimizer"] = {{"maxIterations", s.maxIterations},
                    {"epsilon", s.epsilon},
                    {"seed", s.seed},
                    {"acceleration", toString(s.acceleration)}};
  return j.dump(2) + "\n";
}

SimulateConfig readSimulateConfig(const std::filesystem::path& path) {
  const std::string origin = path.string();
  const json j = parseJson(readFile(path), origin);
  if (!j.contains("B")) throw IoError(origin + ": missing field 'B'");
  InterferenceMatrix beta = betaFromJson(j.at("B"), origin);

  std::vector<LabeledSet> sets;
  if (!j.contains("sets") || !j.at("sets").is_array() || j.at("sets").empty())
    throw IoError(origin + ": 'sets' must list at least one sequence-set file");
  const auto base = path.parent_path();
  for (const json& entry : j.at("sets")) {
    const auto label = field<std::string>(entry, "label", origin);
    std::filesystem::path p = field<std::string>(entry, "path", origin);
    if (p.is_relative()) p = base / p;
    sets.push_back({label, readSequenceSet(p)});
  }

  auto grid = field<std::vector<double>>(j, "sigmaSq", origin);
  const int trials = j.contains("trials") ? field<int>(j, "trials", origin) : 10000;
  const std::uint64_t seed = j.contains("seed") ? field<std::uint64_t>(j, "seed", origin) : 0;
  return {std::move(beta), std::move(sets), std::move(grid), trials, seed};
}

std::string formatBoundReport(const BoundReport& r) {
  ordered_json j;
  j["tau"] = r.tau;
  j["J"] = r.cells;
  j["K"] = r.users;
  j["welch"] = r.welch;
  j["extendedTwoCell"] = optional(r.extendedTwoCell);
  j["newExtended"] = optional(r.newExtended);
  j["applicability"] = {{"welch", r.welchReason},
                        {"extendedTwoCell", r.extendedTwoCellReason},
                        {"newExtended", r.newExtendedReason}};
  j["bIsPositiveDefinite"] = r.bIsPositiveDefinite;
  j["bClass"] = toString(r.bClass);
  return j.dump(2) + "\n";
}

std::string formatEvaluation(const EvaluationRecord& r) {
  ordered_json j;
  j["etsc"] = r.etsc;
  j["tsc"] = r.tsc;
  j["iIntra"] = r.iIntra;
  j["iInter"] = r.iInter;
  j["paprPerUserDb"] = r.paprPerUserDb;
  j["maxPaprDb"] = r.maxPaprDb;
  return j.dump(2) + "\n";
}

void writeTraceCsv(std::ostream& out, const OptimizerTrace& trace, bool includeTiming) {
  out << "iteration,etsc,elapsed_seconds\n";
  for (std::size_t i = 0; i < trace.objectives.size(); ++i) {
    out << i << ',' << formatDouble(trace.objectives[i]) << ','
        << (includeTiming ? formatDouble(trace.elapsedSeconds[i]) : std::string("0")) << '\n';
  }
}

void writeCcdfCsv(std::ostream& out, const std::vector<CcdfPoint>& ccdf) {
  out << "papr_db,ccdf\n";
  for (const auto& p : ccdf) out << formatDouble(p.paprDb) << ',' << formatDouble(p.probability) << '\n';
}

void writeSimulationCsvHeader(std::ostream& out) {
  out << "sigmaSq,setLabel,empiricalMse,stderr,analyticMse\n";
}

void writeSimulationCsvRows(std::ostream& out, const std::string& label,
                            const SimulationReport& report) {
  for (const auto& p : report.points) {
    out << formatDouble(p.sigmaSq) << ',' << label << ',' << formatDouble(p.empiricalMean) << ','
        << formatDouble(p.standardError) << ',' << formatDouble(p.analytic) << '\n';
  }
}

}  // namespace pilotseq::io
