#include "pilotseq/model.hpp"

#include <cmath>
#include <stdexcept>

namespace pilotseq {

namespace {

std::string fmt(const char* what, double v) {
  return std::string(what) + " " + std::to_string(v);
}

}  // namespace

InterferenceMatrix::InterferenceMatrix(RMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
    throw std::invalid_argument("interference matrix must be square and non-empty");
  const auto J = entries_.rows();
  for (Eigen::Index m = 0; m < J; ++m) {
    if (entries_(m, m) != 1.0)
      throw std::invalid_argument("interference matrix diagonal must be 1, got " +
                                  std::to_string(entries_(m, m)) + " at " + std::to_string(m));
    for (Eigen::Index n = 0; n < J; ++n) {
      const double v = entries_(m, n);
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument(fmt("interference factor outside [0, 1]:", v));
      if (v != entries_(n, m))
        throw std::invalid_argument("interference matrix is not symmetric at (" +
                                    std::to_string(m) + ", " + std::to_string(n) + ")");
    }
  }
}

InterferenceMatrix InterferenceMatrix::toeplitz(int cells, double beta) {
  if (cells < 1) throw std::invalid_argument("cells must be >= 1");
  RMatrix b = RMatrix::Constant(cells, cells, beta);
  b.diagonal().setOnes();
  return InterferenceMatrix(std::move(b));
}

InterferenceMatrix InterferenceMatrix::identity(int cells) {
  if (cells < 1) throw std::invalid_argument("cells must be >= 1");
  return InterferenceMatrix(RMatrix::Identity(cells, cells));
}

SequenceSet::SequenceSet(int cells, int usersPerCell, CMatrix data)
    : cells_(cells), users_(usersPerCell), data_(std::move(data)) {
  if (cells_ < 1 || users_ < 1) throw std::invalid_argument("cells and users per cell must be >= 1");
  if (data_.rows() < 1) throw std::invalid_argument("sequence length must be >= 1");
  if (data_.cols() != static_cast<Eigen::Index>(cells_) * users_)
    throw std::invalid_argument("pilot matrix has " + std::to_string(data_.cols()) +
                                " columns, expected J*K = " + std::to_string(cells_ * users_));
}

DesignProblem::DesignProblem(int tau, int cells, int usersPerCell, InterferenceMatrix beta,
                             Constraint constraint, OptimizerSettings settings)
    : tau_(tau),
      cells_(cells),
      users_(usersPerCell),
      beta_(std::move(beta)),
      constraint_(constraint),
      settings_(settings) {
  if (tau_ < 1 || cells_ < 1 || users_ < 1)
    throw std::invalid_argument("tau, J and K must all be >= 1");
  if (beta_.order() != cells_)
    throw std::invalid_argument("interference matrix order " + std::to_string(beta_.order()) +
                                " does not match J = " + std::to_string(cells_));
  if (settings_.maxIterations < 1) throw std::invalid_argument("maxIterations must be >= 1");
  if (!(settings_.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
}

DesignProblem DesignProblem::withSettings(OptimizerSettings settings) const {
  return DesignProblem(tau_, cells_, users_, beta_, constraint_, settings);
}

DesignProblem DesignProblem::withConstraint(Constraint constraint) const {
  return DesignProblem(tau_, cells_, users_, beta_, constraint, settings_);
}

ChannelModel::ChannelModel(double sigmaSq) : noiseVariance(sigmaSq) {
  if (!(sigmaSq >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");
}

ValidationReport validate(const SequenceSet& set, Constraint constraint) {
  ValidationReport report;
  const CMatrix& s = set.data();
  const double modulus = 1.0 / set.tau();
  for (Eigen::Index n = 0; n < s.cols(); ++n) {
    const double dev = std::abs(s.col(n).squaredNorm() - 1.0);
    if (dev > kFeasibilityTol) {
      report.violations.push_back({Violation::Kind::Norm, static_cast<int>(n), -1, dev,
                                   "column " + std::to_string(n) + " squared norm off by " +
                                       std::to_string(dev)});
    }
    report.worstNormDeviation = std::max(report.worstNormDeviation, dev);
    if (constraint != Constraint::Unimodular) continue;
    for (Eigen::Index t = 0; t < s.rows(); ++t) {
      const double mdev = std::abs(std::norm(s(t, n)) - modulus);
      if (mdev > kFeasibilityTol) {
        report.violations.push_back({Violation::Kind::Modulus, static_cast<int>(n),
                                     static_cast<int>(t), mdev,
                                     "entry (" + std::to_string(t) + ", " + std::to_string(n) +
                                         ") squared modulus off 1/tau by " +
                                         std::to_string(mdev)});
      }
      report.worstModulusDeviation = std::max(report.worstModulusDeviation, mdev);
    }
  }
  return report;
}

ValidationReport validate(const SequenceSet& set, const DesignProblem& problem) {
  auto dimension = [](const std::string& what, int got, int want) {
    return Violation{Violation::Kind::Dimension, -1, -1, static_cast<double>(std::abs(got - want)),
                     what + " is " + std::to_string(got) + ", problem expects " +
                         std::to_string(want)};
  };
  std::vector<Violation> dims;
  if (set.tau() != problem.tau()) dims.push_back(dimension("tau", set.tau(), problem.tau()));
  if (set.cells() != problem.cells()) dims.push_back(dimension("J", set.cells(), problem.cells()));
  if (set.usersPerCell() != problem.usersPerCell())
    dims.push_back(dimension("K", set.usersPerCell(), problem.usersPerCell()));

  ValidationReport report = validate(set, problem.constraint());
  report.violations.insert(report.violations.begin(), dims.begin(), dims.end());
  return report;
}

std::string toString(Constraint c) {
  return c == Constraint::Unimodular ? "unimodular" : "unit-norm";
}

std::string toString(Acceleration a) { return a == Acceleration::Squarem ? "squarem" : "plain"; }

Constraint constraintFromString(const std::string& s) {
  if (s == "unit-norm" || s == "UnitNorm") return Constraint::UnitNorm;
  if (s == "unimodular" || s == "Unimodular") return Constraint::Unimodular;
  throw std::invalid_argument("unknown constraint '" + s + "'");
}

Acceleration accelerationFromString(const std::string& s) {
  if (s == "plain" || s == "Plain") return Acceleration::Plain;
  if (s == "squarem" || s == "Squarem") return Acceleration::Squarem;
  throw std::invalid_argument("unknown acceleration '" + s + "'");
}

}  // namespace pilotseq
