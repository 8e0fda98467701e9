#pragma once

#include <Eigen/SVD>

#include "lra/testmat.hpp"
#include "lra/types.hpp"

namespace lra::testing {

/// Singular values from Eigen's divide-and-conquer SVD, an implementation
/// independent of the library's own.
inline VectorXd eigen_singular_values(const MatrixXd& A) { return Eigen::BDCSVD<MatrixXd>(A).singularValues(); }

/// Exact rank-r m x n matrix with unit spectral norm scale.
inline MatrixXd low_rank(Index m, Index n, Index r, std::uint64_t seed) {
  return gaussian(m, r, derive_seed(seed, 100)) * gaussian(r, n, derive_seed(seed, 101));
}

inline double max_abs(const MatrixXd& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace lra::testing
