#pragma once

#include "pilotseq/model.hpp"

#include <cstdint>
#include <optional>

namespace pilotseq {

/// First tau rows of the K-point DFT, scaled by 1/sqrt(tau):
/// entry (mu, k) = exp(2 pi i mu k / K) / sqrt(tau). Requires K >= tau.
/// Rows are orthogonal with squared norm K/tau, so the set meets the Welch
/// bound with equality and every column is unimodular.
CMatrix wbeTruncatedDft(int tau, int users);

/// Places the same tau x K block in every one of `cells` cells.
SequenceSet tileCells(const CMatrix& cellBlock, int cells);

/// Bound-achieving multi-cell set for K >= tau and positive definite B: each
/// cell carries the truncated-DFT WBE set. With `rowPermutationSeed`, each
/// cell's rows are permuted independently; this leaves ETSC unchanged.
SequenceSet optimalMultiCell(int tau, int users, const InterferenceMatrix& beta,
                             std::optional<std::uint64_t> rowPermutationSeed = std::nullopt);

/// Baseline: a single WBE set of JK sequences (truncated DFT of size JK)
/// partitioned into cells in column order. Requires JK >= tau.
SequenceSet pooledWbe(int tau, int cells, int users);

/// Random feasible set. UnitNorm: normalized complex Gaussian columns.
/// Unimodular: i.i.d. uniform phases at modulus 1/sqrt(tau).
SequenceSet randomSet(int tau, int cells, int users, Constraint constraint, std::uint64_t seed);

}  // namespace pilotseq
