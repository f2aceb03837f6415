#include "pilotseq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pilotseq {

namespace {

void requireOrder(const SequenceSet& set, const InterferenceMatrix& beta) {
  if (beta.order() != set.cells())
    throw std::invalid_argument("interference matrix order " + std::to_string(beta.order()) +
                                " does not match J = " + std::to_string(set.cells()));
}

CMatrix gramOf(const SequenceSet& set) {
  const CMatrix& s = set.data();
  return s.adjoint() * s;
}

// ||S_m^H S_n||_F^2 for every cell pair, read off the full Gram matrix.
RMatrix blockEnergies(const SequenceSet& set) {
  const CMatrix g = gramOf(set);
  const int J = set.cells();
  const int K = set.usersPerCell();
  RMatrix e(J, J);
  for (int m = 0; m < J; ++m)
    for (int n = 0; n < J; ++n) e(m, n) = g.block(m * K, n * K, K, K).squaredNorm();
  return e;
}

}  // namespace

GramBlocks extendedGram(const SequenceSet& set, const InterferenceMatrix& beta) {
  requireOrder(set, beta);
  CMatrix g = gramOf(set);
  const int J = set.cells();
  const int K = set.usersPerCell();
  for (int m = 0; m < J; ++m)
    for (int n = 0; n < J; ++n) g.block(m * K, n * K, K, K) *= std::sqrt(beta(m, n));
  return GramBlocks(J, K, std::move(g));
}

double etsc(const SequenceSet& set, const InterferenceMatrix& beta) {
  requireOrder(set, beta);
  return blockEnergies(set).cwiseProduct(beta.entries()).sum();
}

double tsc(const SequenceSet& set) { return gramOf(set).squaredNorm(); }

double weightedGramEnergy(const CMatrix& gram, const RMatrix& weights) {
  return gram.cwiseAbs2().cwiseProduct(weights).sum();
}

InterferenceSplit interferenceSplit(const SequenceSet& set, const InterferenceMatrix& beta) {
  requireOrder(set, beta);
  const RMatrix e = blockEnergies(set);
  const double intra = e.diagonal().sum() - static_cast<double>(set.size());
  RMatrix offDiagonal = e.cwiseProduct(beta.entries());
  offDiagonal.diagonal().setZero();
  return {intra, offDiagonal.sum()};
}

double sumMseAnalytic(const SequenceSet& set, const InterferenceMatrix& beta, double sigmaSq) {
  if (!(sigmaSq >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");
  const double users = static_cast<double>(set.size());
  return etsc(set, beta) - users + users * sigmaSq;
}

double paprRatio(const CVector& sequence) {
  const Eigen::VectorXd power = sequence.cwiseAbs2();
  const double mean = power.mean();
  if (sequence.size() == 0 || mean == 0.0)
    throw std::invalid_argument("PAPR of an all-zero sequence is undefined");
  return power.maxCoeff() / mean;
}

double paprDb(const CVector& sequence) { return 10.0 * std::log10(paprRatio(sequence)); }

std::vector<double> paprPerUserDb(const SequenceSet& set) {
  std::vector<double> out;
  out.reserve(set.size());
  for (int n = 0; n < set.size(); ++n) out.push_back(paprDb(set.data().col(n)));
  return out;
}

std::vector<CcdfPoint> paprCcdf(std::span<const double> paprDbValues) {
  std::vector<double> sorted(paprDbValues.begin(), paprDbValues.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<CcdfPoint> out;
  const double total = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    out.push_back({sorted[i], static_cast<double>(sorted.size() - j) / total});
    i = j;
  }
  return out;
}

EvaluationRecord evaluate(const SequenceSet& set, const InterferenceMatrix& beta) {
  const auto split = interferenceSplit(set, beta);
  EvaluationRecord r{etsc(set, beta), tsc(set), split.intra, split.inter, paprPerUserDb(set), 0.0};
  r.maxPaprDb = *std::max_element(r.paprPerUserDb.begin(), r.paprPerUserDb.end());
  return r;
}

}  // namespace pilotseq
