#include "pilotseq/mm.hpp"

#include "pilotseq/construct.hpp"
#include "pilotseq/metrics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pilotseq {

RMatrix weightMatrix(const InterferenceMatrix& beta, int users) {
  if (users < 1) throw std::invalid_argument("K must be >= 1");
  const int J = beta.order();
  RMatrix w(J * users, J * users);
  for (int m = 0; m < J; ++m)
    for (int n = 0; n < J; ++n) w.block(m * users, n * users, users, users).setConstant(beta(m, n));
  return w;
}

CMatrix surrogateMatrix(const CMatrix& gram, const RMatrix& weights) {
  return gram.conjugate().cwiseProduct(weights.cast<cplx>());
}

EigenEstimate powerIterationLargest(const CMatrix& a, const CVector* warmStart) {
  const auto n = a.rows();
  // Gershgorin: every eigenvalue is >= min_i (a_ii - sum_{j != i} |a_ij|).
  double lower = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double radius = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
    lower = std::min(lower, a(i, i).real() - radius);
  }
  const double shift = std::max(0.0, -lower);

  CVector v = (warmStart && warmStart->size() == n && warmStart->norm() > 0.0)
                  ? CVector(*warmStart)
                  : CVector(CVector::Ones(n));
  v.normalize();
  double rq = 0.0;
  int sweep = 0;
  for (sweep = 1; sweep <= kPowerIterationMaxSweeps; ++sweep) {
    CVector w = a * v;
    const double next = v.dot(w).real();  // Rayleigh quotient of the unshifted matrix
    w += shift * v;
    const double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
    const bool converged = sweep > 1 && std::abs(next - rq) <= kPowerIterationTol * std::abs(next);
    rq = next;
    if (converged) break;
  }
  return {kPowerIterationInflation * rq, v, true, sweep};
}

EigenEstimate largestEigenvalue(const CMatrix& hermitian, const CVector* warmStart,
                                int denseLimit) {
  if (hermitian.rows() <= denseLimit) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().maxCoeff(), CVector(), false, 0};
  }
  return powerIterationLargest(hermitian, warmStart);
}

Lambda2 lambda2Of(const SequenceSet& set, const InterferenceMatrix& beta) {
  if (beta.order() != set.cells())
    throw std::invalid_argument("interference matrix order does not match J");
  const CMatrix gram = set.data().adjoint() * set.data();
  CMatrix s = surrogateMatrix(gram, weightMatrix(beta, set.usersPerCell()));
  const double l2 = largestEigenvalue(s).value;
  return {l2, std::move(s)};
}

CMatrix yVector(const CMatrix& x, const CMatrix& surrogate, double lambda2) {
  const double n = static_cast<double>(x.cols());
  const double tau = static_cast<double>(x.rows());
  // column n of x * surrogate^T is sum_m surrogate(n, m) x_m
  CMatrix y = x * surrogate.transpose();
  y = (n * tau + lambda2) * x - y;
  return y;
}

CMatrix projectUnitNorm(const CMatrix& y, const CMatrix& previous) {
  CMatrix x(y.rows(), y.cols());
  for (Eigen::Index n = 0; n < y.cols(); ++n) {
    const double norm = y.col(n).norm();
    if (norm < kZeroBlockNorm)
      x.col(n) = previous.col(n);
    else
      x.col(n) = y.col(n) / norm;
  }
  return x;
}

CMatrix projectUnimodular(const CMatrix& y) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(y.rows()));
  return y.unaryExpr([scale](const cplx& v) {
    return v == cplx(0.0, 0.0) ? cplx(scale, 0.0) : std::polar(scale, std::arg(v));
  });
}

std::string toString(Termination t) {
  return t == Termination::Epsilon ? "Epsilon" : "MaxIterations";
}

EtscMm::EtscMm(DesignProblem problem, int denseEigenLimit)
    : problem_(std::move(problem)),
      weights_(weightMatrix(problem_.beta(), problem_.usersPerCell())),
      denseLimit_(denseEigenLimit) {}

MmState EtscMm::stateAt(CMatrix x) const {
  if (x.rows() != problem_.tau() || x.cols() != problem_.size())
    throw std::invalid_argument("state does not match the problem dimensions");
  MmState s;
  s.gram = x.adjoint() * x;
  s.objective = weightedGramEnergy(s.gram, weights_);
  s.lambda1 = problem_.tau();
  s.x = std::move(x);
  return s;
}

MmState EtscMm::initialState() const {
  return stateAt(randomSet(problem_.tau(), problem_.cells(), problem_.usersPerCell(),
                           problem_.constraint(), problem_.settings().seed)
                     .data());
}

CMatrix EtscMm::project(const CMatrix& y, const CMatrix& previous) const {
  return problem_.constraint() == Constraint::Unimodular ? projectUnimodular(y)
                                                         : projectUnitNorm(y, previous);
}

MmState EtscMm::step(const MmState& state) const {
  const CMatrix surrogate = surrogateMatrix(state.gram, weights_);
  const EigenEstimate eig =
      largestEigenvalue(surrogate, state.eigenvector.size() ? &state.eigenvector : nullptr,
                        denseLimit_);
  MmState next = stateAt(project(yVector(state.x, surrogate, eig.value), state.x));
  next.iteration = state.iteration + 1;
  next.mapEvaluations = state.mapEvaluations + 1;
  next.lambda2 = eig.value;
  next.eigenvector = eig.vector;
  return next;
}

MmState EtscMm::squaremStep(const MmState& s0) const {
  const MmState s1 = step(s0);
  MmState s2 = step(s1);
  s2.iteration = s0.iteration + 1;

  const CMatrix r = s1.x - s0.x;
  const CMatrix v = s2.x - s1.x - r;
  const double rn = r.norm();
  const double vn = v.norm();
  if (!(vn > 0.0) || !(rn > 0.0)) return s2;

  const double alpha = std::min(-rn / vn, -1.0);
  const CMatrix extrapolated = s0.x - 2.0 * alpha * r + alpha * alpha * v;
  MmState s3 = step(stateAt(project(extrapolated, s2.x)));
  s3.iteration = s0.iteration + 1;
  s3.mapEvaluations = s2.mapEvaluations + 1;
  if (!(s3.objective <= s0.objective)) {
    s2.mapEvaluations = s3.mapEvaluations;
    return s2;
  }
  return s3;
}

MmState step(const MmState& state, const DesignProblem& problem) {
  return EtscMm(problem).step(state);
}

MmState squaremStep(const MmState& state, const DesignProblem& problem) {
  return EtscMm(problem).squaremStep(state);
}

namespace {

DesignResult run(const EtscMm& mm, MmState state) {
  using clock = std::chrono::steady_clock;
  const auto& problem = mm.problem();
  const auto& settings = problem.settings();
  const auto t0 = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

  OptimizerTrace trace;
  trace.seed = settings.seed;
  trace.objectives.reserve(static_cast<std::size_t>(settings.maxIterations) + 1);
  trace.elapsedSeconds.reserve(static_cast<std::size_t>(settings.maxIterations) + 1);
  trace.objectives.push_back(state.objective);
  trace.elapsedSeconds.push_back(0.0);

  const bool accelerate = settings.acceleration == Acceleration::Squarem;
  for (int l = 1; l <= settings.maxIterations; ++l) {
    MmState next = accelerate ? mm.squaremStep(state) : mm.step(state);
    const double moved = (next.x - state.x).squaredNorm();
    state = std::move(next);
    trace.objectives.push_back(state.objective);
    trace.elapsedSeconds.push_back(elapsed());
    if (moved <= settings.epsilon) {
      trace.terminationReason = Termination::Epsilon;
      break;
    }
  }
  trace.wallTime = elapsed();
  trace.mapEvaluations = state.mapEvaluations;
  return {SequenceSet(problem.cells(), problem.usersPerCell(), std::move(state.x)),
          std::move(trace)};
}

}  // namespace

DesignResult solve(const DesignProblem& problem) {
  EtscMm mm(problem);
  return run(mm, mm.initialState());
}

DesignResult solveFrom(const DesignProblem& problem, const CMatrix& start) {
  EtscMm mm(problem);
  return run(mm, mm.stateAt(start));
}

}  // namespace pilotseq
