#include "pilotseq/sim.hpp"

#include "pilotseq/metrics.hpp"
#include "pilotseq/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace pilotseq {

CVector receivedPilot(const SequenceSet& set, const InterferenceMatrix& beta,
                      const ChannelRealization& channels, const CVector& noise, int cell) {
  const int J = set.cells();
  const int K = set.usersPerCell();
  if (beta.order() != J || channels.cells() != J || channels.users() != K)
    throw std::invalid_argument("channel draw does not match the sequence set");
  if (noise.size() != set.tau()) throw std::invalid_argument("noise length must equal tau");
  if (cell < 0 || cell >= J) throw std::invalid_argument("cell index out of range");

  CVector y = noise;
  for (int jbar = 0; jbar < J; ++jbar) {
    const double gain = std::sqrt(beta(cell, jbar));
    if (gain == 0.0) continue;
    for (int k = 0; k < K; ++k) y += (gain * channels(cell, jbar, k)) * set.pilot(jbar, k);
  }
  return y;
}

cplx lsEstimate(const SequenceSet& set, const CVector& received, int cell, int user) {
  return set.pilot(cell, user).dot(received);  // dot conjugates the left operand
}

double trialSumSquaredError(const SequenceSet& set, const InterferenceMatrix& beta, double sigmaSq,
                            std::uint64_t seed, std::uint64_t gridIndex, std::uint64_t trial) {
  const int J = set.cells();
  const int K = set.usersPerCell();
  CounterRng rng(CounterRng::deriveKey(seed, {gridIndex, trial}));

  ChannelRealization h(J, K);
  for (int j = 0; j < J; ++j)
    for (int jbar = 0; jbar < J; ++jbar)
      for (int k = 0; k < K; ++k) h(j, jbar, k) = rng.complexNormal();

  double total = 0.0;
  CVector noise(set.tau());
  for (int j = 0; j < J; ++j) {
    for (int t = 0; t < set.tau(); ++t) noise[t] = rng.complexNormal(sigmaSq);
    const CVector y = receivedPilot(set, beta, h, noise, j);
    for (int k = 0; k < K; ++k) total += std::norm(h(j, j, k) - lsEstimate(set, y, j, k));
  }
  return total;
}

double pairwiseSum(const double* values, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += values[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwiseSum(values, half) + pairwiseSum(values + half, count - half);
}

SimulationReport runMonteCarlo(const SimulationConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config.beta.order() != config.set.cells())
    throw std::invalid_argument("interference matrix order does not match J");
  for (double s : config.sigmaSqGrid)
    if (!(s >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");

  const auto trials = static_cast<std::size_t>(config.trials);
  const int threads = std::max(1, std::min<int>(config.threads, config.trials));
  const double users = config.set.size();

  SimulationReport report;
  std::vector<double> errors(trials);
  std::vector<double> squared(trials);
  for (std::size_t g = 0; g < config.sigmaSqGrid.size(); ++g) {
    const double sigmaSq = config.sigmaSqGrid[g];
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t t = begin; t < end; ++t)
        errors[t] = trialSumSquaredError(config.set, config.beta, sigmaSq, config.seed, g, t);
    };
    if (threads == 1) {
      work(0, trials);
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (trials + threads - 1) / threads;
      for (int i = 0; i < threads; ++i) {
        const std::size_t b = std::min(trials, i * chunk);
        const std::size_t e = std::min(trials, b + chunk);
        pool.emplace_back(work, b, e);
      }
      for (auto& th : pool) th.join();
    }

    const double mean = pairwiseSum(errors.data(), trials) / config.trials;
    for (std::size_t t = 0; t < trials; ++t) squared[t] = (errors[t] - mean) * (errors[t] - mean);
    const double variance =
        trials > 1 ? pairwiseSum(squared.data(), trials) / static_cast<double>(trials - 1) : 0.0;
    report.points.push_back({sigmaSq, mean, std::sqrt(variance / config.trials),
                             sumMseAnalytic(config.set, config.beta, sigmaSq), mean / users,
                             config.trials});
  }
  return report;
}

}  // namespace pilotseq
