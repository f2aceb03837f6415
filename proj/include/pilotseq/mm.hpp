#pragma once

// ETSC minimization by double majorization-minimization.
//
// The pilots are stacked as x = vec(S), i.e. the tau x N pilot matrix in
// column-major order, N = JK. One MM map is
//
//   surrogate = W .* conj(S^H S)               (N x N, Hermitian)
//   lambda2   = lambda_max(surrogate)
//   y_n       = -sum_m surrogate(n, m) x_m + (N tau + lambda2) x_n
//   x_n      <- projection of y_n onto the unit sphere or the unimodular set
//
// where W = B kron 1_{KxK}. The tau N x tau N matrix of the second
// majorization equals surrogate kron I_tau and is never formed; the largest
// eigenvalue of the first majorization matrix is always tau.

#include "pilotseq/model.hpp"

#include <optional>
#include <vector>

namespace pilotseq {

/// Surrogates up to this order get an exact dense eigensolve; larger ones use
/// warm-started power iteration.
inline constexpr int kDenseEigenLimit = 512;
inline constexpr double kPowerIterationTol = 1e-8;
inline constexpr int kPowerIterationMaxSweeps = 500;
/// Power iteration returns a Rayleigh quotient, which never exceeds lambda_max;
/// inflating it keeps lambda2 an upper bound in practice.
inline constexpr double kPowerIterationInflation = 1.01;
/// Blocks of y below this norm keep their previous value in unit-norm mode.
inline constexpr double kZeroBlockNorm = 1e-14;

/// N x N weights, W(m, n) = beta(m / K, n / K).
RMatrix weightMatrix(const InterferenceMatrix& beta, int users);

/// W .* conj(gram).
CMatrix surrogateMatrix(const CMatrix& gram, const RMatrix& weights);

struct EigenEstimate {
  double value;
  CVector vector;  // empty for the dense path
  bool powerIteration;
  int sweeps;
};

EigenEstimate largestEigenvalue(const CMatrix& hermitian, const CVector* warmStart = nullptr,
                                int denseLimit = kDenseEigenLimit);

/// Power iteration on a Gershgorin-shifted copy so the dominant eigenvalue is
/// the largest one even when the matrix is indefinite. The returned value is
/// already inflated by kPowerIterationInflation.
EigenEstimate powerIterationLargest(const CMatrix& hermitian, const CVector* warmStart = nullptr);

struct Lambda2 {
  double lambda2;
  CMatrix surrogate;
};

Lambda2 lambda2Of(const SequenceSet& set, const InterferenceMatrix& beta);

/// y with lambda1 = tau, using ||x||^2 = N. Columns of the result are the y_n.
CMatrix yVector(const CMatrix& x, const CMatrix& surrogate, double lambda2);

/// x_n = y_n / ||y_n||; a (near) zero block keeps `previous`'s column.
CMatrix projectUnitNorm(const CMatrix& y, const CMatrix& previous);

/// x_n[t] = exp(i arg y_n[t]) / sqrt(tau); zero entries take phase 0.
CMatrix projectUnimodular(const CMatrix& y);

struct MmState {
  CMatrix x;      // tau x N, column n is x_n
  CMatrix gram;   // x^H x, cached for the objective and the next surrogate
  int iteration = 0;
  int mapEvaluations = 0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double objective = 0.0;  // ETSC at x
  CVector eigenvector;     // warm start for power iteration
};

enum class Termination { Epsilon, MaxIterations };

struct OptimizerTrace {
  std::vector<double> objectives;      // entry 0 is the initial point
  std::vector<double> elapsedSeconds;  // wall time at each entry
  Termination terminationReason = Termination::MaxIterations;
  double wallTime = 0.0;
  std::uint64_t seed = 0;
  int mapEvaluations = 0;
};

std::string toString(Termination t);

/// One ETSC-MM run bound to a problem; caches the weight matrix.
class EtscMm {
 public:
  explicit EtscMm(DesignProblem problem, int denseEigenLimit = kDenseEigenLimit);

  const DesignProblem& problem() const { return problem_; }
  const RMatrix& weights() const { return weights_; }

  MmState stateAt(CMatrix x) const;
  MmState initialState() const;

  /// Plain MM map. Objective never increases beyond rounding.
  MmState step(const MmState& state) const;

  /// SQUAREM-1 extrapolation over two MM maps, projected back to the feasible
  /// set and polished by a third map; falls back to the second map whenever
  /// the result would raise the objective.
  MmState squaremStep(const MmState& state) const;

  CMatrix project(const CMatrix& y, const CMatrix& previous) const;

 private:
  DesignProblem problem_;
  RMatrix weights_;
  int denseLimit_;
};

MmState step(const MmState& state, const DesignProblem& problem);
MmState squaremStep(const MmState& state, const DesignProblem& problem);

struct DesignResult {
  SequenceSet set;
  OptimizerTrace trace;
};

/// Runs until ||x(l) - x(l-1)||^2 <= epsilon or maxIterations iterations.
/// One SQUAREM step counts as one iteration.
DesignResult solve(const DesignProblem& problem);

/// Same, starting from a given feasible point.
DesignResult solveFrom(const DesignProblem& problem, const CMatrix& start);

}  // namespace pilotseq
