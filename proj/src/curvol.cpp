#include "lra/curvol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lra/access.hpp"
#include "lra/numkern.hpp"

namespace lra {

namespace {

double log_prod(const VectorXd& sigma, Index count) {
  double s = 0.0;
  for (Index j = 0; j < count; ++j) {
    if (sigma(j) <= 0.0) return -std::numeric_limits<double>::infinity();
    s += std::log(sigma(j));
  }
  return s;
}

MatrixXd take_rows(const MatrixXd& A, const IndexList& I) {
  MatrixXd out(static_cast<Index>(I.size()), A.cols());
  for (std::size_t i = 0; i < I.size(); ++i) out.row(static_cast<Index>(i)) = A.row(I[i]);
  return out;
}

bool contains(const IndexList& I, Index v) { return std::find(I.begin(), I.end(), v) != I.end(); }

// Enumerates all count-subsets of {0..m-1} in lexicographic order.
template <typename Visit>
void for_each_subset(Index m, Index count, Visit visit) {
  IndexList idx(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    Index pos = count - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - count + pos) --pos;
    if (pos < 0) return;
    ++idx[static_cast<std::size_t>(pos)];
    for (Index q = pos + 1; q < count; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
}

double binomial(Index n, Index k) {
  double b = 1.0;
  for (Index i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  return b;
}

bool full_rank_rows(const MatrixXd& A, const IndexList& I, Index rank_needed) {
  if (static_cast<Index>(I.size()) < rank_needed) return false;
  const VectorXd sv = singular_values(take_rows(A, I));
  return sv.size() >= rank_needed && sv(0) > 0.0 && sv(rank_needed - 1) > 1e-12 * sv(0);
}

// Square case: B = A A_I^{-1}; the volume ratio of swapping i in for I[j] is |B_ij|.
void square_swaps(const MatrixXd& A, double h, int max_sweeps, MaxvolResult& res) {
  const Index m = A.rows();
  const Index c = A.cols();
  auto recompute = [&]() {
    const MatrixXd AI = take_rows(A, res.rows);
    res.cost.multiplies += static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(c);
    return MatrixXd(AI.transpose().partialPivLu().solve(A.transpose()).transpose());
  };
  MatrixXd B = recompute();
  int since_refresh = 0;
  while (true) {
    Index bi = 0;
    Index bj = 0;
    double best = -1.0;
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < c; ++j) {
        const double v = std::abs(B(i, j));
        if (v > best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (best <= h) {
      if (since_refresh == 0) return;
      B = recompute();
      since_refresh = 0;
      continue;
    }
    if (res.sweeps >= max_sweeps) {
      res.converged = false;
      return;
    }
    ++res.sweeps;
    const VectorXd colj = B.col(bj);
    Eigen::RowVectorXd rowi = B.row(bi);
    rowi(bj) -= 1.0;
    B.noalias() -= colj * rowi / B(bi, bj);
    res.cost.multiplies += static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(c);
    res.rows[static_cast<std::size_t>(bj)] = bi;
    if (++since_refresh >= c) {
      B = recompute();
      since_refresh = 0;
    }
  }
}

struct SwapCandidate {
  double ratio2 = 0;  // squared volume ratio
  Index in = -1;      // row to add
  Index slot = -1;    // position in the selection to replace
};

// count < cols: volume^2 = det(A_J A_J^T); ratio^2 = B_ij^2 + r_i (G^{-1})_jj.
SwapCandidate best_swap_wide(const MatrixXd& A, const IndexList& J, Cost& cost) {
  const MatrixXd AJ = take_rows(A, J);
  const MatrixXd Ginv = (AJ * AJ.transpose()).inverse();
  const MatrixXd K = A * AJ.transpose();
  const MatrixXd B = K * Ginv;
  cost.multiplies += static_cast<std::uint64_t>(A.rows()) * static_cast<std::uint64_t>(A.cols()) * J.size();
  SwapCandidate best;
  for (Index i = 0; i < A.rows(); ++i) {
    if (contains(J, i)) continue;
    const double resid = std::max(0.0, A.row(i).squaredNorm() - B.row(i).dot(K.row(i)));
    for (Index j = 0; j < static_cast<Index>(J.size()); ++j) {
      const double v = B(i, j) * B(i, j) + resid * Ginv(j, j);
      if (v > best.ratio2) best = {v, i, j};
    }
  }
  return best;
}

// count > cols: ratio^2 = (1 + s_i)(1 - s_j) + c_ij^2 with s, c from (A_I^T A_I)^{-1}.
SwapCandidate best_swap_tall(const MatrixXd& A, const IndexList& I, Cost& cost) {
  const MatrixXd AI = take_rows(A, I);
  const MatrixXd Minv = (AI.transpose() * AI).inverse();
  const MatrixXd AM = A * Minv;
  const MatrixXd Cmat = AM * AI.transpose();  // c_ij = a_i Minv a_{I[j]}^T
  cost.multiplies += static_cast<std::uint64_t>(A.rows()) * static_cast<std::uint64_t>(A.cols()) *
                     static_cast<std::uint64_t>(A.cols() + I.size());
  SwapCandidate best;
  for (Index i = 0; i < A.rows(); ++i) {
    if (contains(I, i)) continue;
    const double si = AM.row(i).dot(A.row(i));
    for (Index j = 0; j < static_cast<Index>(I.size()); ++j) {
      const double sj = Cmat(I[static_cast<std::size_t>(j)], j);
      const double cij = Cmat(i, j);
      const double v = (1.0 + si) * (1.0 - sj) + cij * cij;
      if (v > best.ratio2) best = {v, i, j};
    }
  }
  return best;
}

template <typename BestSwap>
void generic_swaps(const MatrixXd& A, double h, int max_sweeps, MaxvolResult& res, BestSwap best_swap) {
  while (true) {
    const SwapCandidate cand = best_swap(A, res.rows, res.cost);
    if (cand.in < 0 || cand.ratio2 <= h * h) return;
    if (res.sweeps >= max_sweeps) {
      res.converged = false;
      return;
    }
    ++res.sweeps;
    res.rows[static_cast<std::size_t>(cand.slot)] = cand.in;
  }
}

IndexList greedy_wide_init(const MatrixXd& A, Index count, Cost& cost) {
  Eigen::ColPivHouseholderQR<MatrixXd> qr(A.transpose());
  cost.multiplies += qr_multiplies(A.cols(), A.rows());
  const MatrixXd& R = qr.matrixQR();
  const double lead = std::abs(R(0, 0));
  if (!(lead > 0.0) || !(std::abs(R(count - 1, count - 1)) > 1e-12 * lead)) {
    throw NumericalError("degenerate column set");
  }
  IndexList rows(static_cast<std::size_t>(count));
  for (Index j = 0; j < count; ++j) rows[static_cast<std::size_t>(j)] = qr.colsPermutation().indices()(j);
  return rows;
}

void greedy_tall_append(const MatrixXd& A, Index count, MaxvolResult& res) {
  while (static_cast<Index>(res.rows.size()) < count) {
    const MatrixXd AI = take_rows(A, res.rows);
    const MatrixXd Minv = (AI.transpose() * AI).inverse();
    const MatrixXd AM = A * Minv;
    res.cost.multiplies += static_cast<std::uint64_t>(A.rows()) * static_cast<std::uint64_t>(A.cols()) *
                           static_cast<std::uint64_t>(A.cols());
    Index best_i = -1;
    double best = -1.0;
    for (Index i = 0; i < A.rows(); ++i) {
      if (contains(res.rows, i)) continue;
      const double gain = 1.0 + AM.row(i).dot(A.row(i));
      if (gain > best) {
        best = gain;
        best_i = i;
      }
    }
    res.rows.push_back(best_i);
  }
}

}  // namespace

VolumeReport volume(const MatrixXd& M, std::optional<Index> r) {
  VolumeReport v;
  const VectorXd sigma = M.size() > 0 ? singular_values(M) : VectorXd();
  const Index q = sigma.size();
  v.r = r.value_or(q);
  if (v.r < 0 || v.r > q) throw std::invalid_argument("volume: r must lie in [0, min(k, l)]");
  v.log_v2 = log_prod(sigma, q);
  v.log_v2r = log_prod(sigma, v.r);
  v.v2 = std::exp(v.log_v2);
  v.v2r = std::exp(v.log_v2r);
  return v;
}

double log_volume(const MatrixXd& M, std::optional<Index> r) {
  const VolumeReport v = volume(M, r);
  return r ? v.log_v2r : v.log_v2;
}

double cheb_bound_f(Index k, Index l, Index r) {
  if (r < 1 || r > std::min(k, l)) throw std::invalid_argument("cheb_bound_f: need 1 <= r <= min(k, l)");
  const double num = static_cast<double>(k + 1) * static_cast<double>(l + 1);
  const double den = static_cast<double>(k - r + 1) * static_cast<double>(l - r + 1);
  return std::sqrt(num / den);
}

CurFactors build_cur(const MatrixXd& M, const IndexList& I, const IndexList& J, NucleusPolicy policy) {
  if (I.empty() || J.empty()) throw std::invalid_argument("build_cur: empty index set");
  for (Index i : I) {
    if (i < 0 || i >= M.rows()) throw std::invalid_argument("build_cur: row index out of range");
  }
  for (Index j : J) {
    if (j < 0 || j >= M.cols()) throw std::invalid_argument("build_cur: column index out of range");
  }
  CurFactors f;
  f.I = I;
  f.J = J;
  f.policy = policy;
  f.C = read_columns(M, J, f.cost);
  f.R = read_rows(M, I, f.cost);
  f.G = take_rows(f.C, I);

  switch (policy.kind) {
    case NucleusKind::canonical:
      f.U = pinv(f.G);
      break;
    case NucleusKind::rank_r_truncated:
      if (policy.r < 1 || policy.r > std::min(f.G.rows(), f.G.cols())) {
        throw std::invalid_argument("build_cur: nucleus rank must lie in [1, min(k, l)]");
      }
      f.U = pinv(truncate_rank(f.G, policy.r));
      break;
    case NucleusKind::tau_threshold: {
      const auto s = svd(f.G);
      Index keep = 0;
      while (keep < s.rank() && s.sigma(keep) > policy.tau) ++keep;
      f.U = s.V.leftCols(keep) * s.sigma.head(keep).cwiseInverse().asDiagonal() * s.U.leftCols(keep).transpose();
      break;
    }
  }
  f.cost.multiplies += svd_multiplies(f.G.rows(), f.G.cols());
  return f;
}

MaxvolResult maxvol_rows(const MatrixXd& A, double h, int max_sweeps, Index count, const IndexList* init) {
  if (!(h > 1.0)) throw std::invalid_argument("maxvol_rows: h must exceed 1");
  const Index m = A.rows();
  const Index c = A.cols();
  if (count < 0) count = c;
  if (count < 1 || count > m || c < 1) throw std::invalid_argument("maxvol_rows: need 1 <= count <= rows");

  MaxvolResult res;
  const Index rank_needed = std::min(count, c);
  const bool warm = init && static_cast<Index>(init->size()) == count && full_rank_rows(A, *init, rank_needed);
  if (warm) res.rows = *init;

  if (count == c) {
    if (!warm) res.rows = greedy_wide_init(A, c, res.cost);
    square_swaps(A, h, max_sweeps, res);
  } else if (count < c) {
    if (!warm) res.rows = greedy_wide_init(A, count, res.cost);
    generic_swaps(A, h, max_sweeps, res, best_swap_wide);
  } else {
    if (!warm) {
      res.rows = greedy_wide_init(A, c, res.cost);
      MaxvolResult square = res;
      square_swaps(A, h, max_sweeps, square);
      res.rows = square.rows;
      res.cost = square.cost;
      greedy_tall_append(A, count, res);
    }
    generic_swaps(A, h, max_sweeps, res, best_swap_tall);
  }
  return res;
}

double max_swap_ratio(const MatrixXd& A, const IndexList& I) {
  const Index count = static_cast<Index>(I.size());
  const Index c = A.cols();
  Cost scratch;
  if (count == c) {
    const MatrixXd AI = take_rows(A, I);
    const MatrixXd B = AI.transpose().partialPivLu().solve(A.transpose()).transpose();
    return B.cwiseAbs().maxCoeff();
  }
  const SwapCandidate cand = count < c ? best_swap_wide(A, I, scratch) : best_swap_tall(A, I, scratch);
  return std::sqrt(std::max(cand.ratio2, 0.0));
}

BruteForceResult brute_force_maxvol(const MatrixXd& A, std::optional<Index> r, Index count) {
  if (count < 0) count = A.cols();
  if (count < 1 || count > A.rows()) throw std::invalid_argument("brute_force_maxvol: need 1 <= count <= rows");
  if (binomial(A.rows(), count) > 1e6) throw std::invalid_argument("brute_force_maxvol: more than 1e6 subsets");
  BruteForceResult best;
  best.log_volume = -std::numeric_limits<double>::infinity();
  bool first = true;
  for_each_subset(A.rows(), count, [&](const IndexList& idx) {
    const double lv = log_volume(take_rows(A, idx), r);
    if (first || lv > best.log_volume) {
      best.log_volume = lv;
      best.rows = idx;
      first = false;
    }
  });
  best.volume = std::exp(best.log_volume);
  return best;
}

CrossSelection brute_force_cross(const MatrixXd& W, Index k, Index l, std::optional<Index> r) {
  if (k < 1 || k > W.rows() || l < 1 || l > W.cols()) throw std::invalid_argument("brute_force_cross: bad k or l");
  if (binomial(W.rows(), k) * binomial(W.cols(), l) > 1e7) {
    throw std::invalid_argument("brute_force_cross: more than 1e7 crosses");
  }
  CrossSelection best;
  best.log_volume = -std::numeric_limits<double>::infinity();
  bool first = true;
  for_each_subset(W.rows(), k, [&](const IndexList& I) {
    const MatrixXd rows = take_rows(W, I);
    for_each_subset(W.cols(), l, [&](const IndexList& J) {
      MatrixXd G(k, l);
      for (Index j = 0; j < l; ++j) G.col(j) = rows.col(J[static_cast<std::size_t>(j)]);
      const double lv = log_volume(G, r);
      if (first || lv > best.log_volume) {
        best = {I, J, lv};
        first = false;
      }
    });
  });
  return best;
}

}  // namespace lra
