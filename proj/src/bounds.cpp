#include "pilotseq/bounds.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <stdexcept>

namespace pilotseq {

std::string toString(BClass c) {
  switch (c) {
    case BClass::SpecialToeplitz: return "SpecialToeplitz";
    case BClass::DiagonallyDominant: return "DiagonallyDominant";
    case BClass::GeneralPD: return "GeneralPD";
    case BClass::NotPD: return "NotPD";
  }
  return "NotPD";
}

double smallestEigenvalue(const RMatrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

PdClassification isPositiveDefinite(const InterferenceMatrix& beta) {
  const RMatrix& b = beta.entries();
  const int J = beta.order();

  // Special Toeplitz: eigenvalues 1 - beta and 1 + (J-1) beta.
  const double common = J > 1 ? b(0, 1) : 0.0;
  bool toeplitz = true;
  for (int m = 0; m < J && toeplitz; ++m)
    for (int n = 0; n < J; ++n)
      if (m != n && b(m, n) != common) {
        toeplitz = false;
        break;
      }
  if (toeplitz && common < 1.0) return {true, BClass::SpecialToeplitz, common, std::nullopt};

  bool dominant = true;
  for (int m = 0; m < J; ++m)
    if (b.row(m).sum() - 1.0 > 1.0) dominant = false;

  const double lmin = smallestEigenvalue(b);
  if (lmin <= kPdEigenTol) return {false, BClass::NotPD, std::nullopt, lmin};
  return {true, dominant ? BClass::DiagonallyDominant : BClass::GeneralPD, std::nullopt, lmin};
}

double welchBound(int tau, int cells, int users) {
  if (tau < 1 || cells < 1 || users < 1) throw std::invalid_argument("tau, J, K must be >= 1");
  const double n = static_cast<double>(cells) * users;
  return n * n / tau;
}

BoundValue extendedWelchBoundTwoCell(int tau, int users, double beta) {
  if (tau < 1 || users < 1) throw std::invalid_argument("tau and K must be >= 1");
  if (users > tau || tau > 2 * users)
    return {std::nullopt, "requires K <= tau <= 2K (K = " + std::to_string(users) +
                              ", tau = " + std::to_string(tau) + ")"};
  const double K = users;
  return {2.0 * K * K * (1.0 + beta) / (K + beta * (tau - K)),
          "two cells with K <= tau <= 2K"};
}

double newExtendedWelchExpression(int tau, int users, const InterferenceMatrix& beta) {
  const double K = users;
  return K * K / tau * beta.sum();
}

BoundValue newExtendedWelchBound(int tau, int users, const InterferenceMatrix& beta) {
  if (tau < 1 || users < 1) throw std::invalid_argument("tau and K must be >= 1");
  if (users < tau)
    return {std::nullopt, "requires K >= tau (K = " + std::to_string(users) +
                              ", tau = " + std::to_string(tau) + ")"};
  const auto pd = isPositiveDefinite(beta);
  if (!pd.positiveDefinite) return {std::nullopt, "B not positive definite"};
  return {newExtendedWelchExpression(tau, users, beta),
          "K >= tau and B positive definite (" + toString(pd.bClass) +
              "); stated for unimodular pilot sets"};
}

double BoundReport::tightestEtscBound(Constraint constraint, const InterferenceMatrix& beta) const {
  double best = 0.0;
  if (extendedTwoCell) best = std::max(best, *extendedTwoCell);
  if (newExtended && constraint == Constraint::Unimodular) best = std::max(best, *newExtended);
  if ((beta.entries().array() == 1.0).all()) best = std::max(best, welch);
  return best;
}

BoundReport boundReport(int tau, int cells, int users, const InterferenceMatrix& beta) {
  if (beta.order() != cells)
    throw std::invalid_argument("interference matrix order does not match J");
  BoundReport r{};
  r.tau = tau;
  r.cells = cells;
  r.users = users;
  r.welch = welchBound(tau, cells, users);
  r.welchReason = "TSC >= (JK)^2/tau for any unit-norm set";

  if (cells == 2) {
    auto two = extendedWelchBoundTwoCell(tau, users, beta(0, 1));
    r.extendedTwoCell = two.value;
    r.extendedTwoCellReason = two.reason;
  } else {
    r.extendedTwoCellReason = "requires J = 2 (J = " + std::to_string(cells) + ")";
  }

  auto ext = newExtendedWelchBound(tau, users, beta);
  r.newExtended = ext.value;
  r.newExtendedReason = ext.reason;

  const auto pd = isPositiveDefinite(beta);
  r.bIsPositiveDefinite = pd.positiveDefinite;
  r.bClass = pd.bClass;
  return r;
}

}  // namespace pilotseq
