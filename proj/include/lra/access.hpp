#pragma once

// Counted access to an input matrix. Sketch products only touch the rows or
// columns of M selected by the nonzero pattern of the test matrix, so a
// sampling test matrix reads exactly m*l (or k*n) entries.

#include <algorithm>

#include "lra/types.hpp"

namespace lra {

inline IndexList nonzero_rows(const MatrixXd& H) {
  IndexList rows;
  for (Index i = 0; i < H.rows(); ++i) {
    if ((H.row(i).array() != 0.0).any()) rows.push_back(i);
  }
  return rows;
}

inline IndexList nonzero_cols(const MatrixXd& F) {
  IndexList cols;
  for (Index j = 0; j < F.cols(); ++j) {
    if ((F.col(j).array() != 0.0).any()) cols.push_back(j);
  }
  return cols;
}

inline std::uint64_t count_nonzeros(const MatrixXd& A) {
  return static_cast<std::uint64_t>((A.array() != 0.0).count());
}

inline MatrixXd read_columns(const MatrixXd& M, const IndexList& J, Cost& cost) {
  MatrixXd C(M.rows(), static_cast<Index>(J.size()));
  for (std::size_t j = 0; j < J.size(); ++j) C.col(static_cast<Index>(j)) = M.col(J[j]);
  cost.entries_read += static_cast<std::uint64_t>(M.rows()) * J.size();
  return C;
}

inline MatrixXd read_rows(const MatrixXd& M, const IndexList& I, Cost& cost) {
  MatrixXd R(static_cast<Index>(I.size()), M.cols());
  for (std::size_t i = 0; i < I.size(); ++i) R.row(static_cast<Index>(i)) = M.row(I[i]);
  cost.entries_read += static_cast<std::uint64_t>(M.cols()) * I.size();
  return R;
}

inline MatrixXd read_block(const MatrixXd& M, const IndexList& I, const IndexList& J, Cost& cost) {
  MatrixXd G(static_cast<Index>(I.size()), static_cast<Index>(J.size()));
  for (std::size_t i = 0; i < I.size(); ++i) {
    for (std::size_t j = 0; j < J.size(); ++j) G(static_cast<Index>(i), static_cast<Index>(j)) = M(I[i], J[j]);
  }
  cost.entries_read += static_cast<std::uint64_t>(I.size()) * J.size();
  return G;
}

/// The whole of M (superlinear; used by the full-access algorithms).
inline const MatrixXd& read_all(const MatrixXd& M, Cost& cost) {
  cost.entries_read += static_cast<std::uint64_t>(M.size());
  return M;
}

/// M * H, reading only the columns of M that meet a nonzero row of H.
inline MatrixXd sketch_right(const MatrixXd& M, const MatrixXd& H, Cost& cost) {
  if (M.cols() != H.rows()) throw std::invalid_argument("sketch_right: shape mismatch");
  const IndexList J = nonzero_rows(H);
  const MatrixXd C = read_columns(M, J, cost);
  MatrixXd Hs(static_cast<Index>(J.size()), H.cols());
  for (std::size_t j = 0; j < J.size(); ++j) Hs.row(static_cast<Index>(j)) = H.row(J[j]);
  cost.multiplies += static_cast<std::uint64_t>(M.rows()) * count_nonzeros(Hs);
  return C * Hs;
}

/// F * M, reading only the rows of M that meet a nonzero column of F.
inline MatrixXd sketch_left(const MatrixXd& F, const MatrixXd& M, Cost& cost) {
  if (F.cols() != M.rows()) throw std::invalid_argument("sketch_left: shape mismatch");
  const IndexList I = nonzero_cols(F);
  const MatrixXd R = read_rows(M, I, cost);
  MatrixXd Fs(F.rows(), static_cast<Index>(I.size()));
  for (std::size_t i = 0; i < I.size(); ++i) Fs.col(static_cast<Index>(i)) = F.col(I[i]);
  cost.multiplies += static_cast<std::uint64_t>(M.cols()) * count_nonzeros(Fs);
  return Fs * R;
}

/// Nominal multiply counts of the dense kernels.
inline std::uint64_t qr_multiplies(Index m, Index n) {
  const auto a = static_cast<std::uint64_t>(std::max(m, n));
  const auto b = static_cast<std::uint64_t>(std::min(m, n));
  return 2ULL * a * b * b;
}
inline std::uint64_t svd_multiplies(Index m, Index n) {
  const auto a = static_cast<std::uint64_t>(std::max(m, n));
  const auto b = static_cast<std::uint64_t>(std::min(m, n));
  return 4ULL * a * b * b;
}
inline std::uint64_t gemm_multiplies(Index m, Index k, Index n) {
  return static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(n);
}

}  // namespace lra
