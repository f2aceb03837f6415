#include "pilotseq/construct.hpp"

#include "pilotseq/bounds.hpp"
#include "pilotseq/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace pilotseq {

CMatrix wbeTruncatedDft(int tau, int users) {
  if (tau < 1) throw std::invalid_argument("tau must be >= 1");
  if (users < tau)
    throw std::invalid_argument("truncated DFT WBE set needs K >= tau (K = " +
                                std::to_string(users) + ", tau = " + std::to_string(tau) + ")");
  CMatrix s(tau, users);
  const double scale = 1.0 / std::sqrt(static_cast<double>(tau));
  for (int k = 0; k < users; ++k)
    for (int mu = 0; mu < tau; ++mu) {
      // reduce mu*k mod K first so the angle stays accurate for large sizes
      const long long e = (static_cast<long long>(mu) * k) % users;
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(e) / users;
      s(mu, k) = std::polar(scale, angle);
    }
  return s;
}

SequenceSet tileCells(const CMatrix& cellBlock, int cells) {
  if (cells < 1) throw std::invalid_argument("cells must be >= 1");
  const auto K = cellBlock.cols();
  CMatrix s(cellBlock.rows(), K * cells);
  for (int j = 0; j < cells; ++j) s.middleCols(j * K, K) = cellBlock;
  return SequenceSet(cells, static_cast<int>(K), std::move(s));
}

SequenceSet optimalMultiCell(int tau, int users, const InterferenceMatrix& beta,
                             std::optional<std::uint64_t> rowPermutationSeed) {
  if (users < tau)
    throw std::invalid_argument("bound-achieving construction needs K >= tau");
  if (!isPositiveDefinite(beta).positiveDefinite)
    throw std::invalid_argument("bound-achieving construction needs a positive definite B");

  const CMatrix wbe = wbeTruncatedDft(tau, users);
  SequenceSet tiled = tileCells(wbe, beta.order());
  if (!rowPermutationSeed) return tiled;

  CMatrix s = tiled.data();
  for (int j = 0; j < beta.order(); ++j) {
    std::vector<int> perm(tau);
    std::iota(perm.begin(), perm.end(), 0);
    CounterRng rng(CounterRng::deriveKey(*rowPermutationSeed, {static_cast<std::uint64_t>(j)}));
    for (int i = tau - 1; i > 0; --i) {
      const auto r = static_cast<int>(rng.uniform() * (i + 1));
      std::swap(perm[i], perm[std::min(r, i)]);
    }
    for (int mu = 0; mu < tau; ++mu) s.block(mu, j * users, 1, users) = wbe.row(perm[mu]);
  }
  return SequenceSet(beta.order(), users, std::move(s));
}

SequenceSet pooledWbe(int tau, int cells, int users) {
  return SequenceSet(cells, users, wbeTruncatedDft(tau, cells * users));
}

SequenceSet randomSet(int tau, int cells, int users, Constraint constraint, std::uint64_t seed) {
  if (tau < 1 || cells < 1 || users < 1) throw std::invalid_argument("tau, J, K must be >= 1");
  const int n = cells * users;
  CMatrix s(tau, n);
  CounterRng rng(CounterRng::deriveKey(seed, {0}));
  if (constraint == Constraint::Unimodular) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(tau));
    for (int c = 0; c < n; ++c)
      for (int t = 0; t < tau; ++t)
        s(t, c) = std::polar(scale, 2.0 * std::numbers::pi * rng.uniform());
  } else {
    for (int c = 0; c < n; ++c) {
      double norm = 0.0;
      do {
        for (int t = 0; t < tau; ++t) s(t, c) = rng.complexNormal();
        norm = s.col(c).norm();
      } while (norm == 0.0);
      s.col(c) /= norm;
    }
  }
  return SequenceSet(cells, users, std::move(s));
}

}  // namespace pilotseq
