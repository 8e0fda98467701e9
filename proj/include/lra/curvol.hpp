#pragma once

// CUR approximation, volumes of submatrices and maxvol row selection.

#include <optional>

#include "lra/types.hpp"

namespace lra {

enum class NucleusKind { canonical, rank_r_truncated, tau_threshold };

struct NucleusPolicy {
  NucleusKind kind = NucleusKind::canonical;
  Index r = 0;      // rank_r_truncated
  double tau = 0;   // tau_threshold: singular values of G not above tau are zeroed
};

struct CurFactors {
  IndexList I;  // rows, |I| = k
  IndexList J;  // columns, |J| = l
  MatrixXd C;   // M[:, J]
  MatrixXd U;   // l x k nucleus
  MatrixXd R;   // M[I, :]
  MatrixXd G;   // M[I, J], the generator
  NucleusPolicy policy;
  Cost cost;

  MatrixXd product() const { return C * U * R; }
};

/// v2 = product of all min(k, l) singular values, v2r = product of the top r.
struct VolumeReport {
  double v2 = 0;
  double v2r = 0;
  double log_v2 = 0;
  double log_v2r = 0;
  Index r = 0;
};

VolumeReport volume(const MatrixXd& M, std::optional<Index> r = std::nullopt);
double log_volume(const MatrixXd& M, std::optional<Index> r = std::nullopt);

/// sqrt((k+1)(l+1) / ((k-r+1)(l-r+1))).
double cheb_bound_f(Index k, Index l, Index r);

CurFactors build_cur(const MatrixXd& M, const IndexList& I, const IndexList& J, NucleusPolicy policy = {});

struct MaxvolResult {
  IndexList rows;
  int sweeps = 0;          // accepted swaps after initialization
  bool converged = true;   // false when max_sweeps stopped the swaps
  Cost cost;
};

/// Selects `count` rows of A (default: A.cols()) whose submatrix has weakly
/// h-maximal volume: no single swap of a selected row for an unselected one
/// multiplies the volume by more than h. The initial rows are the leading
/// pivots of a column-pivoted QR of A^T (greedy volume); count > cols appends
/// rows greedily to a square selection. Each case then swaps while the best
/// swap gains more than h. For count >= rank the selection depends only on the
/// column space of A. `init` warm-starts the
/// swap phase when it indexes a full-rank submatrix.
MaxvolResult maxvol_rows(const MatrixXd& A, double h = 1.05, int max_sweeps = 1000, Index count = -1,
                         const IndexList* init = nullptr);

/// Largest volume ratio achievable by one row swap (<= h certifies weak h-maximality).
double max_swap_ratio(const MatrixXd& A, const IndexList& I);

struct BruteForceResult {
  IndexList rows;
  double log_volume = 0;
  double volume = 0;
};

/// Exhaustive maximal-volume (or r-projective volume) selection of `count`
/// rows. Refuses more than 1e6 candidate subsets.
BruteForceResult brute_force_maxvol(const MatrixXd& A, std::optional<Index> r = std::nullopt, Index count = -1);

struct CrossSelection {
  IndexList I;
  IndexList J;
  double log_volume = 0;
};

/// Exhaustive search for the k x l cross of W with maximal (r-projective)
/// volume. Refuses more than 1e7 candidate crosses.
CrossSelection brute_force_cross(const MatrixXd& W, Index k, Index l, std::optional<Index> r = std::nullopt);

}  // namespace lra
