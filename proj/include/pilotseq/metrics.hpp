#pragma once

#include "pilotseq/model.hpp"

#include <span>
#include <vector>

namespace pilotseq {

/// The extended Gram matrix G_B, stored assembled. Block (m, n) is
/// sqrt(beta_{m,n}) * S_m^H S_n.
class GramBlocks {
 public:
  GramBlocks(int cells, int users, CMatrix assembled)
      : cells_(cells), users_(users), g_(std::move(assembled)) {}

  int cells() const { return cells_; }
  int users() const { return users_; }
  const CMatrix& matrix() const { return g_; }
  auto block(int m, int n) const { return g_.block(m * users_, n * users_, users_, users_); }

 private:
  int cells_;
  int users_;
  CMatrix g_;
};

GramBlocks extendedGram(const SequenceSet& set, const InterferenceMatrix& beta);

/// ||G_B||_F^2 = sum_{m,n} beta_{m,n} ||S_m^H S_n||_F^2.
double etsc(const SequenceSet& set, const InterferenceMatrix& beta);

/// ||S^H S||_F^2 over the whole pool.
double tsc(const SequenceSet& set);

/// sum_{m,n} w_{m,n} |G_{m,n}|^2 for a plain Gram matrix G and an N x N weight matrix.
double weightedGramEnergy(const CMatrix& gram, const RMatrix& weights);

struct InterferenceSplit {
  double intra;  // sum_j ||S_j^H S_j||_F^2 - JK
  double inter;  // sum_{m != n} beta_{m,n} ||S_m^H S_n||_F^2
};

InterferenceSplit interferenceSplit(const SequenceSet& set, const InterferenceMatrix& beta);

/// Expected LS sum MSE over all JK users: ETSC - JK + JK * sigmaSq.
double sumMseAnalytic(const SequenceSet& set, const InterferenceMatrix& beta, double sigmaSq);

/// Linear peak-to-average power ratio max|s|^2 / mean|s|^2.
double paprRatio(const CVector& sequence);
double paprDb(const CVector& sequence);
std::vector<double> paprPerUserDb(const SequenceSet& set);

struct CcdfPoint {
  double paprDb;
  double probability;  // fraction of users with PAPR strictly above paprDb
};

/// Empirical CCDF evaluated at every distinct observed value, ascending.
std::vector<CcdfPoint> paprCcdf(std::span<const double> paprDbValues);

struct EvaluationRecord {
  double etsc;
  double tsc;
  double iIntra;
  double iInter;
  std::vector<double> paprPerUserDb;
  double maxPaprDb;
};

EvaluationRecord evaluate(const SequenceSet& set, const InterferenceMatrix& beta);

}  // namespace pilotseq
