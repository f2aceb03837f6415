#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace pilotseq {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

/// Squared-quantity tolerance used for norm and modulus feasibility checks.
inline constexpr double kFeasibilityTol = 1e-9;

/// Symmetric J x J matrix of inter-cell power factors with unit diagonal.
///
/// Entry (m, n) is the interference intensity from the users of cell m at the
/// base station of cell n. Asymmetric input is rejected rather than
/// symmetrized.
class InterferenceMatrix {
 public:
  explicit InterferenceMatrix(RMatrix entries);

  /// All off-diagonal entries equal to `beta`.
  static InterferenceMatrix toeplitz(int cells, double beta);
  static InterferenceMatrix identity(int cells);

  int order() const { return static_cast<int>(entries_.rows()); }
  double operator()(int m, int n) const { return entries_(m, n); }
  const RMatrix& entries() const { return entries_; }

  /// Sum over every entry, sum_{i,j} beta_{i,j}.
  double sum() const { return entries_.sum(); }

 private:
  RMatrix entries_;
};

/// The tau x (J*K) pilot matrix. Column n = j*K + k holds the pilot of user k
/// in cell j; cell j occupies columns [jK, (j+1)K).
///
/// Only the shape is checked at construction. Norm and modulus feasibility is
/// reported by validate() so that infeasible candidates can still be inspected.
class SequenceSet {
 public:
  SequenceSet(int cells, int usersPerCell, CMatrix data);

  int tau() const { return static_cast<int>(data_.rows()); }
  int cells() const { return cells_; }
  int usersPerCell() const { return users_; }
  int size() const { return cells_ * users_; }

  const CMatrix& data() const { return data_; }
  auto pilot(int cell, int user) const { return data_.col(cell * users_ + user); }
  auto cellBlock(int cell) const { return data_.middleCols(cell * users_, users_); }

 private:
  int cells_;
  int users_;
  CMatrix data_;
};

enum class Constraint { UnitNorm, Unimodular };
enum class Acceleration { Plain, Squarem };

struct OptimizerSettings {
  int maxIterations = 20000;
  double epsilon = 1e-10;  // stop once ||x(l) - x(l-1)||^2 <= epsilon
  std::uint64_t seed = 0;
  Acceleration acceleration = Acceleration::Plain;
};

/// One instance of the pilot design problem (unit-norm or unimodular).
class DesignProblem {
 public:
  DesignProblem(int tau, int cells, int usersPerCell, InterferenceMatrix beta,
                Constraint constraint = Constraint::UnitNorm,
                OptimizerSettings settings = {});

  int tau() const { return tau_; }
  int cells() const { return cells_; }
  int usersPerCell() const { return users_; }
  int size() const { return cells_ * users_; }
  const InterferenceMatrix& beta() const { return beta_; }
  Constraint constraint() const { return constraint_; }
  const OptimizerSettings& settings() const { return settings_; }

  DesignProblem withSettings(OptimizerSettings settings) const;
  DesignProblem withConstraint(Constraint constraint) const;

 private:
  int tau_;
  int cells_;
  int users_;
  InterferenceMatrix beta_;
  Constraint constraint_;
  OptimizerSettings settings_;
};

struct ChannelModel {
  explicit ChannelModel(double noiseVariance);
  double noiseVariance;
};

struct Violation {
  enum class Kind { Dimension, Norm, Modulus };
  Kind kind;
  int column = -1;  // -1 when the violation is not tied to a column
  int row = -1;
  double deviation = 0.0;  // magnitude on the squared quantity
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  double worstNormDeviation = 0.0;
  double worstModulusDeviation = 0.0;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const SequenceSet& set, Constraint constraint);
ValidationReport validate(const SequenceSet& set, const DesignProblem& problem);

std::string toString(Constraint c);
std::string toString(Acceleration a);
Constraint constraintFromString(const std::string& s);
Acceleration accelerationFromString(const std::string& s);

}  // namespace pilotseq
