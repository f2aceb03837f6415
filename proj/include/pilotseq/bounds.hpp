#pragma once

#include "pilotseq/model.hpp"

#include <optional>
#include <string>

namespace pilotseq {

enum class BClass { SpecialToeplitz, DiagonallyDominant, GeneralPD, NotPD };

std::string toString(BClass c);

/// Eigenvalue threshold below which B is not treated as positive definite.
inline constexpr double kPdEigenTol = 1e-10;

struct PdClassification {
  bool positiveDefinite;
  BClass bClass;
  std::optional<double> toeplitzBeta;   // set for SpecialToeplitz
  std::optional<double> minEigenvalue;  // set whenever the eigenvalue test ran
};

/// Classifies B. Equal off-diagonals with beta < 1 are accepted without an
/// eigensolve; weak diagonal dominance is confirmed by the eigenvalue test.
PdClassification isPositiveDefinite(const InterferenceMatrix& beta);

double smallestEigenvalue(const RMatrix& symmetric);

struct BoundValue {
  std::optional<double> value;
  std::string reason;  // why the bound applies, or why it is absent
};

/// Classic Welch bound on TSC: (JK)^2 / tau.
double welchBound(int tau, int cells, int users);

/// Two-cell extended Welch bound 2K^2(1+beta) / (K + beta(tau-K)); present
/// only for K <= tau <= 2K.
BoundValue extendedWelchBoundTwoCell(int tau, int users, double beta);

/// (K^2/tau) * sum_{i,j} beta_{i,j}; present only for K >= tau with B
/// positive definite. Stated for unimodular pilot sets.
BoundValue newExtendedWelchBound(int tau, int users, const InterferenceMatrix& beta);

/// The expression (K^2/tau) * sum beta without applicability gating.
double newExtendedWelchExpression(int tau, int users, const InterferenceMatrix& beta);

struct BoundReport {
  int tau;
  int cells;
  int users;
  double welch;
  std::string welchReason;
  std::optional<double> extendedTwoCell;
  std::string extendedTwoCellReason;
  std::optional<double> newExtended;
  std::string newExtendedReason;
  bool bIsPositiveDefinite;
  BClass bClass;

  /// Largest bound that applies to ETSC of a set under the given constraint,
  /// or 0 when none does. The Welch bound constrains TSC, not ETSC, so it only
  /// counts when B is all ones.
  double tightestEtscBound(Constraint constraint, const InterferenceMatrix& beta) const;
};

BoundReport boundReport(int tau, int cells, int users, const InterferenceMatrix& beta);

}  // namespace pilotseq
