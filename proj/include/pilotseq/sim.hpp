#pragma once

#include "pilotseq/model.hpp"

#include <cstdint>
#include <vector>

namespace pilotseq {

/// Channel coefficients h_{j, jbar, k}: from user k of cell jbar to the base
/// station of cell j.
class ChannelRealization {
 public:
  ChannelRealization(int cells, int users)
      : cells_(cells), users_(users), h_(static_cast<std::size_t>(cells) * cells * users) {}

  int cells() const { return cells_; }
  int users() const { return users_; }
  cplx& operator()(int j, int jbar, int k) { return h_[index(j, jbar, k)]; }
  cplx operator()(int j, int jbar, int k) const { return h_[index(j, jbar, k)]; }

 private:
  std::size_t index(int j, int jbar, int k) const {
    return (static_cast<std::size_t>(j) * cells_ + jbar) * users_ + k;
  }
  int cells_;
  int users_;
  std::vector<cplx> h_;
};

/// y_j = sum_{jbar} sqrt(beta_{j,jbar}) sum_k h_{j,jbar,k} s_{jbar,k} + n_j.
CVector receivedPilot(const SequenceSet& set, const InterferenceMatrix& beta,
                      const ChannelRealization& channels, const CVector& noise, int cell);

/// LS estimate s_{j,k}^H y_j.
cplx lsEstimate(const SequenceSet& set, const CVector& received, int cell, int user);

struct SimulationConfig {
  SequenceSet set;
  InterferenceMatrix beta;
  std::vector<double> sigmaSqGrid;
  int trials = 10000;
  std::uint64_t seed = 0;
  int threads = 1;  // results do not depend on this
};

struct GridPointResult {
  double sigmaSq;
  double empiricalMean;  // mean over trials of sum_{j,k} |h_{j,j,k} - h_hat_{j,j,k}|^2
  double standardError;
  double analytic;
  double perUserMean;
  int trials;
};

struct SimulationReport {
  std::vector<GridPointResult> points;
};

/// Sum of squared LS errors over all JK users for one trial. The draws come
/// from the stream keyed by (seed, grid index, trial index).
double trialSumSquaredError(const SequenceSet& set, const InterferenceMatrix& beta, double sigmaSq,
                            std::uint64_t seed, std::uint64_t gridIndex, std::uint64_t trial);

SimulationReport runMonteCarlo(const SimulationConfig& config);

/// Pairwise (cascade) summation; order-independent of how values were produced.
double pairwiseSum(const double* values, std::size_t count);

}  // namespace pilotseq
