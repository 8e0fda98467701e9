#pragma once

// Dense kernels: QR (plain and column-pivoted), compact SVD, pseudoinverse,
// rank truncation, norms, numerical rank and the relative error statistic.
//
// The SVD is a Golub-Kahan-Reinsch implementation: Householder
// bidiagonalization followed by implicit Wilkinson-shift QR sweeps on the
// bidiagonal. QR factorizations are delegated to Eigen's Householder QR.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lra/types.hpp"

namespace lra {

enum class NormKind { spectral, frobenius, chebyshev };
enum class RankMode { absolute, relative };

template <typename Scalar>
struct SvdFactors {
  Matrix<Scalar> U;     // m x rho, orthonormal columns
  Vector<Scalar> sigma; // rho values, non-increasing, positive
  Matrix<Scalar> V;     // n x rho, orthonormal columns

  Index rank() const { return sigma.size(); }
  Matrix<Scalar> reconstruct() const { return U * sigma.asDiagonal() * V.transpose(); }
};

template <typename Scalar>
struct QrFactors {
  Matrix<Scalar> Q;             // m x k, orthonormal columns
  Matrix<Scalar> R;             // k x n upper trapezoidal (k x k when full column rank)
  std::optional<IndexList> perm; // column order of the pivoted variant: A[:, perm] = Q R

  Index rank() const { return Q.cols(); }
};

namespace detail {

template <typename Scalar>
inline Scalar svd_tolerance() {
  return std::max<Scalar>(Scalar(1e-14), Scalar(8) * std::numeric_limits<Scalar>::epsilon());
}

// x_i <- c x_i + s x_j, x_j <- -s x_i + c x_j on two columns.
template <typename Scalar>
inline void rotate_columns(Matrix<Scalar>& X, Index i, Index j, Scalar c, Scalar s) {
  Scalar* xi = X.col(i).data();
  Scalar* xj = X.col(j).data();
  for (Index r = 0; r < X.rows(); ++r) {
    const Scalar a = xi[r];
    const Scalar b = xj[r];
    xi[r] = c * a + s * b;
    xj[r] = -s * a + c * b;
  }
}

template <typename Scalar>
inline void givens(Scalar y, Scalar z, Scalar& c, Scalar& s, Scalar& r) {
  r = std::hypot(y, z);
  if (r == Scalar(0)) {
    c = Scalar(1);
    s = Scalar(0);
  } else {
    c = y / r;
    s = z / r;
  }
}

template <typename Scalar>
struct RawSvd {
  Vector<Scalar> sigma;  // all min(m, n) values, sorted non-increasing
  Matrix<Scalar> U;      // m x min(m, n) when vectors requested
  Matrix<Scalar> V;      // n x min(m, n)
};

// Upper bidiagonal B = U^T A V for a matrix with rows >= cols.
template <typename Scalar>
void bidiagonalize(Matrix<Scalar>& A, Vector<Scalar>& d, Vector<Scalar>& e,
                   Matrix<Scalar>* U, Matrix<Scalar>* V) {
  const Index m = A.rows();
  const Index n = A.cols();
  d.resize(n);
  e.resize(std::max<Index>(n - 1, 0));
  Vector<Scalar> tau_left(n);
  Vector<Scalar> tau_right(std::max<Index>(n - 1, 0));
  Vector<Scalar> work(std::max(m, n));

  for (Index k = 0; k < n; ++k) {
    Scalar tau;
    Scalar beta;
    A.col(k).tail(m - k).makeHouseholderInPlace(tau, beta);
    d(k) = beta;
    tau_left(k) = tau;
    if (k + 1 < n) {
      A.block(k, k + 1, m - k, n - k - 1)
          .applyHouseholderOnTheLeft(A.col(k).segment(k + 1, m - k - 1), tau, work.data());

      A.row(k).tail(n - k - 1).makeHouseholderInPlace(tau, beta);
      e(k) = beta;
      tau_right(k) = tau;
      if (k + 1 < m) {
        Vector<Scalar> essential = A.row(k).segment(k + 2, n - k - 2).transpose();
        A.block(k + 1, k + 1, m - k - 1, n - k - 1)
            .applyHouseholderOnTheRight(essential, tau, work.data());
      }
    }
  }

  if (U) {
    *U = Matrix<Scalar>::Identity(m, n);
    for (Index k = n - 1; k >= 0; --k) {
      Vector<Scalar> essential = A.col(k).segment(k + 1, m - k - 1);
      U->block(k, k, m - k, n - k).applyHouseholderOnTheLeft(essential, tau_left(k), work.data());
    }
  }
  if (V) {
    *V = Matrix<Scalar>::Identity(n, n);
    for (Index k = n - 2; k >= 0; --k) {
      Vector<Scalar> essential = A.row(k).segment(k + 2, n - k - 2).transpose();
      V->block(k + 1, k + 1, n - k - 1, n - k - 1)
          .applyHouseholderOnTheLeft(essential, tau_right(k), work.data());
    }
  }
}

// Implicit-shift QR iteration on an upper bidiagonal matrix (d, e).
template <typename Scalar>
void bidiagonal_qr(Vector<Scalar>& d, Vector<Scalar>& e, Matrix<Scalar>* U, Matrix<Scalar>* V) {
  const Index n = d.size();
  if (n == 0) return;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar tol = svd_tolerance<Scalar>();
  Scalar bnorm = d.cwiseAbs().maxCoeff();
  if (n > 1) bnorm = std::max(bnorm, e.cwiseAbs().maxCoeff());
  const Scalar floor = eps * bnorm;
  const long max_steps = 100L * static_cast<long>(std::max<Index>(n, 1)) + 100;
  long steps = 0;

  Index q = n - 1;
  while (q > 0) {
    for (Index i = 0; i < q; ++i) {
      if (std::abs(e(i)) <= tol * (std::abs(d(i)) + std::abs(d(i + 1))) || std::abs(e(i)) <= floor) {
        e(i) = Scalar(0);
      }
    }
    while (q > 0 && e(q - 1) == Scalar(0)) --q;
    if (q == 0) break;
    Index p = q - 1;
    while (p > 0 && e(p - 1) != Scalar(0)) --p;

    // A negligible diagonal entry splits the block once its row (or the
    // last column) is chased to zero.
    bool chased = false;
    for (Index i = p; i < q; ++i) {
      if (std::abs(d(i)) <= floor) {
        d(i) = Scalar(0);
        Scalar f = e(i);
        e(i) = Scalar(0);
        for (Index j = i + 1; j <= q; ++j) {
          Scalar c, s, r;
          givens(d(j), f, c, s, r);
          d(j) = r;
          if (j < q) {
            f = -s * e(j);
            e(j) = c * e(j);
          }
          if (U) rotate_columns(*U, j, i, c, s);
        }
        chased = true;
        break;
      }
    }
    if (!chased && std::abs(d(q)) <= floor) {
      d(q) = Scalar(0);
      Scalar f = e(q - 1);
      e(q - 1) = Scalar(0);
      for (Index j = q - 1; j >= p; --j) {
        Scalar c, s, r;
        givens(d(j), f, c, s, r);
        d(j) = r;
        if (j > p) {
          f = -s * e(j - 1);
          e(j - 1) = c * e(j - 1);
        }
        if (V) rotate_columns(*V, j, q, c, s);
      }
      chased = true;
    }
    if (chased) continue;

    if (++steps > max_steps) throw NumericalError("svd: implicit-shift iteration did not converge");

    // Wilkinson shift from the trailing 2x2 block of B^T B.
    const Scalar dm = d(q - 1);
    const Scalar dq = d(q);
    const Scalar fm = e(q - 1);
    const Scalar em = (q - 1 > p) ? e(q - 2) : Scalar(0);
    const Scalar t11 = dm * dm + em * em;
    const Scalar t22 = dq * dq + fm * fm;
    const Scalar t12 = dm * fm;
    const Scalar delta = (t11 - t22) / 2;
    const Scalar denom = delta + std::copysign(std::hypot(delta, t12), delta);
    const Scalar mu = denom == Scalar(0) ? t22 : t22 - t12 * t12 / denom;

    Scalar y = d(p) * d(p) - mu;
    Scalar z = d(p) * e(p);
    for (Index k = p; k < q; ++k) {
      Scalar c, s, r;
      givens(y, z, c, s, r);
      if (k > p) e(k - 1) = r;
      const Scalar dk = d(k);
      const Scalar ek = e(k);
      const Scalar dk1 = d(k + 1);
      d(k) = c * dk + s * ek;
      e(k) = -s * dk + c * ek;
      const Scalar bulge = s * dk1;
      d(k + 1) = c * dk1;
      if (V) rotate_columns(*V, k, k + 1, c, s);

      givens(d(k), bulge, c, s, r);
      d(k) = r;
      const Scalar ek2 = e(k);
      const Scalar dk1b = d(k + 1);
      e(k) = c * ek2 + s * dk1b;
      d(k + 1) = -s * ek2 + c * dk1b;
      if (k < q - 1) {
        z = s * e(k + 1);
        e(k + 1) = c * e(k + 1);
        y = e(k);
      }
      if (U) rotate_columns(*U, k, k + 1, c, s);
    }
  }
}

template <typename Scalar>
RawSvd<Scalar> svd_core(Matrix<Scalar> A, bool vectors) {
  RawSvd<Scalar> out;
  if (A.rows() < A.cols()) {
    RawSvd<Scalar> t = svd_core<Scalar>(A.transpose(), vectors);
    out.sigma = std::move(t.sigma);
    out.U = std::move(t.V);
    out.V = std::move(t.U);
    return out;
  }
  const Index m = A.rows();
  const Index n = A.cols();
  if (n == 0) {
    out.U.resize(m, 0);
    out.V.resize(0, 0);
    return out;
  }

  // Tall inputs: reduce to the n x n triangular factor first.
  Matrix<Scalar> Qtall;
  if (m >= 2 * n) {
    Eigen::HouseholderQR<Matrix<Scalar>> qr(A);
    if (vectors) Qtall = qr.householderQ() * Matrix<Scalar>::Identity(m, n);
    A = qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
  }

  Vector<Scalar> d, e;
  Matrix<Scalar> U, V;
  bidiagonalize<Scalar>(A, d, e, vectors ? &U : nullptr, vectors ? &V : nullptr);
  bidiagonal_qr<Scalar>(d, e, vectors ? &U : nullptr, vectors ? &V : nullptr);

  for (Index i = 0; i < n; ++i) {
    if (d(i) < Scalar(0)) {
      d(i) = -d(i);
      if (vectors) V.col(i) *= Scalar(-1);
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return d(a) > d(b); });

  out.sigma.resize(n);
  for (Index i = 0; i < n; ++i) out.sigma(i) = d(order[static_cast<std::size_t>(i)]);
  if (vectors) {
    if (Qtall.size() > 0) U = Qtall * U;
    out.U.resize(U.rows(), n);
    out.V.resize(V.rows(), n);
    for (Index i = 0; i < n; ++i) {
      out.U.col(i) = U.col(order[static_cast<std::size_t>(i)]);
      out.V.col(i) = V.col(order[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

}  // namespace detail

/// All min(m, n) singular values in non-increasing order.
template <typename Derived>
Vector<typename Derived::Scalar> singular_values(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  return detail::svd_core<Scalar>(Matrix<Scalar>(A), false).sigma;
}

/// Compact SVD. Singular values at or below max(m, n) * eps * sigma_1 are
/// treated as exact zeros and dropped, so a zero matrix yields rank 0.
template <typename Derived>
SvdFactors<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  auto raw = detail::svd_core<Scalar>(Matrix<Scalar>(A), true);
  Index rho = 0;
  if (raw.sigma.size() > 0 && raw.sigma(0) > Scalar(0)) {
    const Scalar cut = Scalar(std::max(A.rows(), A.cols())) * std::numeric_limits<Scalar>::epsilon() *
                       raw.sigma(0);
    while (rho < raw.sigma.size() && raw.sigma(rho) > cut) ++rho;
  }
  SvdFactors<Scalar> f;
  f.U = raw.U.leftCols(rho);
  f.sigma = raw.sigma.head(rho);
  f.V = raw.V.leftCols(rho);
  return f;
}

/// Thin QR. The plain variant requires rows >= cols; the pivoted variant
/// orders |R_ii| non-increasing and truncates at the first diagonal below
/// 1e-12 * |R_11|, returning R as rank x cols.
template <typename Derived>
QrFactors<typename Derived::Scalar> factorize_qr(const Eigen::MatrixBase<Derived>& A, bool pivoted) {
  using Scalar = typename Derived::Scalar;
  using Mat = Matrix<Scalar>;
  const Index m = A.rows();
  const Index n = A.cols();
  if (m == 0 || n == 0 || A.cwiseAbs().maxCoeff() == Scalar(0)) throw NumericalError("rank zero");

  QrFactors<Scalar> f;
  if (!pivoted) {
    if (m < n) throw std::invalid_argument("factorize_qr: thin QR requires rows >= cols");
    Eigen::HouseholderQR<Mat> qr(A);
    f.Q = qr.householderQ() * Mat::Identity(m, n);
    f.R = qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
  } else {
    Eigen::ColPivHouseholderQR<Mat> qr(A);
    const Index kmax = std::min(m, n);
    const Mat& packed = qr.matrixQR();
    const Scalar lead = std::abs(packed(0, 0));
    Index k = 0;
    while (k < kmax && std::abs(packed(k, k)) > Scalar(1e-12) * lead) ++k;
    f.Q = qr.householderQ() * Mat::Identity(m, k);
    f.R = packed.topRows(k).template triangularView<Eigen::Upper>();
    IndexList perm(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) perm[static_cast<std::size_t>(j)] = qr.colsPermutation().indices()(j);
    f.perm = std::move(perm);
  }
  for (Index j = 0; j < f.R.rows(); ++j) {
    if (f.R(j, j) < Scalar(0)) {
      f.R.row(j) *= Scalar(-1);
      f.Q.col(j) *= Scalar(-1);
    }
  }
  return f;
}

/// Orthonormal basis of the column space (Q of the pivoted QR, truncated at rank).
template <typename Derived>
Matrix<typename Derived::Scalar> orthonormal_basis(const Eigen::MatrixBase<Derived>& A) {
  return factorize_qr(A, true).Q;
}

/// Moore-Penrose pseudoinverse; singular values below 1e-12 * sigma_1 count as zero.
template <typename Derived>
Matrix<typename Derived::Scalar> pinv(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  auto raw = detail::svd_core<Scalar>(Matrix<Scalar>(A), true);
  Matrix<Scalar> out = Matrix<Scalar>::Zero(A.cols(), A.rows());
  if (raw.sigma.size() == 0 || raw.sigma(0) == Scalar(0)) return out;
  const Scalar cut = Scalar(1e-12) * raw.sigma(0);
  Index rho = 0;
  while (rho < raw.sigma.size() && raw.sigma(rho) > cut) ++rho;
  out.noalias() = raw.V.leftCols(rho) * raw.sigma.head(rho).cwiseInverse().asDiagonal() *
                  raw.U.leftCols(rho).transpose();
  return out;
}

/// Rank-r truncation M_r of the SVD (Eckart-Young optimum).
template <typename Derived>
Matrix<typename Derived::Scalar> truncate_rank(const Eigen::MatrixBase<Derived>& A, Index r) {
  using Scalar = typename Derived::Scalar;
  if (r < 0 || r > std::min(A.rows(), A.cols())) {
    throw std::invalid_argument("truncate_rank: r must lie in [0, min(m, n)]");
  }
  if (r == 0) return Matrix<Scalar>::Zero(A.rows(), A.cols());
  auto raw = detail::svd_core<Scalar>(Matrix<Scalar>(A), true);
  return raw.U.leftCols(r) * raw.sigma.head(r).asDiagonal() * raw.V.leftCols(r).transpose();
}

template <typename Derived>
typename Derived::Scalar norm(const Eigen::MatrixBase<Derived>& A, NormKind kind) {
  using Scalar = typename Derived::Scalar;
  if (A.size() == 0) return Scalar(0);
  switch (kind) {
    case NormKind::spectral:
      return singular_values(A)(0);
    case NormKind::frobenius:
      return A.norm();
    case NormKind::chebyshev:
      return A.cwiseAbs().maxCoeff();
  }
  return Scalar(0);
}

/// Count of sigma_j > eps (absolute), or sigma_j > eps * sigma_1 in relative mode.
template <typename Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived>& A, double eps, RankMode mode = RankMode::absolute) {
  if (!(eps > 0)) throw std::invalid_argument("numerical_rank: eps must be positive");
  if (A.size() == 0) return 0;
  const auto sigma = singular_values(A);
  const double cut = mode == RankMode::absolute ? eps : eps * static_cast<double>(sigma(0));
  Index count = 0;
  for (Index j = 0; j < sigma.size(); ++j) {
    if (static_cast<double>(sigma(j)) > cut) ++count;
  }
  return count;
}

/// ||M - Mtilde||_2 / sigma_{r+1}(M) given the optimal error sigma_{r+1}(M).
template <typename DerivedA, typename DerivedB>
double relative_error_given(const Eigen::MatrixBase<DerivedA>& M, const Eigen::MatrixBase<DerivedB>& Mtilde,
                            double optimal_error) {
  if (M.rows() != Mtilde.rows() || M.cols() != Mtilde.cols()) {
    throw std::invalid_argument("relative_error: shape mismatch");
  }
  if (!(optimal_error > 0)) throw NumericalError("optimal error zero; use absolute residual");
  return static_cast<double>(norm(M - Mtilde, NormKind::spectral)) / optimal_error;
}

/// ||M - Mtilde||_2 / ||M - M_r||_2.
template <typename DerivedA, typename DerivedB>
double relative_error(const Eigen::MatrixBase<DerivedA>& M, const Eigen::MatrixBase<DerivedB>& Mtilde, Index r) {
  if (r < 0) throw std::invalid_argument("relative_error: r must be non-negative");
  const auto sigma = singular_values(M);
  const double optimal = r < sigma.size() ? static_cast<double>(sigma(r)) : 0.0;
  return relative_error_given(M, Mtilde, optimal);
}

}  // namespace lra
