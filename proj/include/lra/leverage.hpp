#pragma once

// Leverage-score row sampling and the refinement step Y = (FX)^+ FM.

#include <cstdint>
#include <vector>

#include "lra/sketch.hpp"

namespace lra {

struct LeverageSample {
  VectorXd scores;     // squared row norms of an orthonormal basis, summing to l
  IndexList rows;      // k sampled rows, with replacement
  VectorXd scaling;    // 1 / sqrt(k p_i) for each sampled row
  bool orthonormalized = false;  // true when the input had to be orthonormalized first
};

/// Squared row norms of X. A non-orthonormal X is replaced by the Q factor
/// of its thin QR first (reported through `orthonormalized`).
VectorXd leverage_scores(const MatrixXd& X, bool* orthonormalized = nullptr);

/// ceil(1296 r^2 / (beta eps^2 delta^4)).
std::uint64_t sample_size(Index r, double eps, double delta, double beta = 1.0);

/// Draws k rows with probabilities p_i = score_i / l.
LeverageSample draw_leverage_sample(const MatrixXd& X, Index k, std::uint64_t seed);

struct RefineOptions {
  bool scaled = true;           // apply the 1/sqrt(k p_i) row weights
  bool exhaustive_when_full = true;  // k >= m samples every row exactly once
};

/// Returns (X, Y) with Y = (FX)^+ FM for a leverage-score sampling F.
/// Only the k sampled rows of M are read.
LraFactors refine_lra(const MatrixXd& M, const MatrixXd& X, Index k, std::uint64_t seed,
                      const RefineOptions& options = {});

}  // namespace lra
