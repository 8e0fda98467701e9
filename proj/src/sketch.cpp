#include "lra/sketch.hpp"

#include <cmath>

#include "lra/access.hpp"
#include "lra/numkern.hpp"

namespace lra {

namespace {

// X = A T^{-1} for the chosen policy. Rank-deficient sketches fall back to
// the truncated Q factor of the pivoted QR.
MatrixXd column_basis(const MatrixXd& A, PostPolicy policy, std::vector<std::string>& warnings, Cost& cost) {
  const Index l = A.cols();
  QrFactors<double> pivoted;
  try {
    pivoted = factorize_qr(A, true);
  } catch (const NumericalError&) {
    warnings.emplace_back("sketch has rank zero");
    return MatrixXd(A.rows(), 0);
  }
  cost.multiplies += qr_multiplies(A.rows(), l);
  const bool full = pivoted.rank() == l;
  if (!full) warnings.emplace_back("sketch rank below its column count; using truncated pivoted QR");
  switch (policy) {
    case PostPolicy::identity:
      return full ? A : pivoted.Q;
    case PostPolicy::qr_r_factor:
      if (!full) return pivoted.Q;
      cost.multiplies += qr_multiplies(A.rows(), l);
      return factorize_qr(A, false).Q;
    case PostPolicy::qrp_r_factor:
      return pivoted.Q;
  }
  return A;
}

// F * A with F sparse: only the nonzero columns of F contribute.
MatrixXd sparse_left(const MatrixXd& F, const MatrixXd& A, Cost& cost) {
  const IndexList I = nonzero_cols(F);
  MatrixXd Fs(F.rows(), static_cast<Index>(I.size()));
  MatrixXd As(static_cast<Index>(I.size()), A.cols());
  for (std::size_t i = 0; i < I.size(); ++i) {
    Fs.col(static_cast<Index>(i)) = F.col(I[i]);
    As.row(static_cast<Index>(i)) = A.row(I[i]);
  }
  cost.multiplies += count_nonzeros(Fs) * static_cast<std::uint64_t>(A.cols());
  return Fs * As;
}

Index relative_rank(const MatrixXd& A, Cost& cost) {
  if (A.size() == 0) return 0;
  const VectorXd sv = singular_values(A);
  cost.multiplies += svd_multiplies(A.rows(), A.cols());
  Index rho = 0;
  while (rho < sv.size() && sv(rho) > 1e-10 * sv(0)) ++rho;
  return rho;
}

// The cross FMH is degenerate when it has lower numerical rank than MH.
bool cross_degenerate(const MatrixXd& MH, const MatrixXd& FMH, Cost& cost) {
  const Index full = relative_rank(MH, cost);
  return full == 0 || relative_rank(FMH, cost) < full;
}

// Row-and-column sketching from the two sketches AH (m x l) and BF (k x n)
// and the row test matrix F (k x m).
LraFactors row_column_core(const MatrixXd& AH, const MatrixXd& BF, const MatrixXd& F, PostPolicy s_policy,
                           PostPolicy t_policy, Cost cost) {
  LraFactors out;
  const MatrixXd X = column_basis(AH, t_policy, out.warnings, cost);
  const MatrixXd FX = sparse_left(F, X, cost);
  out.degenerate = cross_degenerate(AH, sparse_left(F, AH, cost), cost);
  if (out.degenerate) out.warnings.emplace_back("degenerate cross");

  const Index k = BF.rows();
  MatrixXd U = BF;
  MatrixXd W = FX;
  if (s_policy != PostPolicy::identity) {
    bool applied = false;
    if (k <= BF.cols()) {
      try {
        const auto qr = factorize_qr(BF.transpose(), s_policy == PostPolicy::qrp_r_factor);
        cost.multiplies += qr_multiplies(BF.cols(), k);
        if (qr.rank() == k) {
          MatrixXd PW = FX;
          if (qr.perm) {
            for (Index j = 0; j < k; ++j) PW.row(j) = FX.row((*qr.perm)[static_cast<std::size_t>(j)]);
          }
          const MatrixXd R = qr.R.leftCols(k);
          U = qr.Q.transpose();
          W = R.transpose().triangularView<Eigen::Lower>().solve(PW);
          cost.multiplies += static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(k) *
                             static_cast<std::uint64_t>(PW.cols());
          applied = true;
        }
      } catch (const NumericalError&) {
      }
    }
    if (!applied) out.warnings.emplace_back("row sketch rank below k; using S = I");
  }

  cost.multiplies += svd_multiplies(W.rows(), W.cols());
  cost.multiplies += gemm_multiplies(W.cols(), W.rows(), U.cols());
  out.X = X;
  out.Y = pinv(W) * U;
  out.cost = cost;
  return out;
}

}  // namespace

LraFactors range_finder(const MatrixXd& M, const MatrixXd& H, PostPolicy t_policy) {
  if (H.cols() < 1 || H.cols() > M.cols()) throw std::invalid_argument("range_finder: need 1 <= l <= n");
  LraFactors out;
  Cost cost;
  const MatrixXd MH = sketch_right(M, H, cost);
  out.X = column_basis(MH, t_policy, out.warnings, cost);
  const MatrixXd& all = read_all(M, cost);
  cost.multiplies += svd_multiplies(out.X.rows(), out.X.cols());
  cost.multiplies += gemm_multiplies(out.X.cols(), M.rows(), M.cols());
  out.Y = pinv(out.X) * all;
  out.cost = cost;
  return out;
}

LraFactors transposed_range_finder(const MatrixXd& M, const MatrixXd& F, PostPolicy s_policy) {
  if (F.rows() < 1 || F.rows() > M.rows()) throw std::invalid_argument("transposed_range_finder: need 1 <= k <= m");
  LraFactors out;
  out.orientation = Orientation::yx;
  Cost cost;
  const MatrixXd FM = sketch_left(F, M, cost);
  out.X = column_basis(FM.transpose(), s_policy, out.warnings, cost).transpose();
  const MatrixXd& all = read_all(M, cost);
  cost.multiplies += svd_multiplies(out.X.rows(), out.X.cols());
  cost.multiplies += gemm_multiplies(M.rows(), M.cols(), out.X.rows());
  out.Y = all * pinv(out.X);
  out.cost = cost;
  return out;
}

LraFactors row_column_sketch(const MatrixXd& M, const MatrixXd& F, const MatrixXd& H, PostPolicy s_policy,
                             PostPolicy t_policy, bool transposed) {
  if (F.cols() != M.rows() || H.rows() != M.cols()) throw std::invalid_argument("row_column_sketch: shape mismatch");
  const Index k = F.rows();
  const Index l = H.cols();
  if (!transposed && k < l) throw std::invalid_argument("row_column_sketch: need k >= l");
  if (transposed && l < k) throw std::invalid_argument("row_column_sketch: transposed variant needs l >= k");

  Cost cost;
  const MatrixXd MH = sketch_right(M, H, cost);
  const MatrixXd FM = sketch_left(F, M, cost);
  if (!transposed) return row_column_core(MH, FM, F, s_policy, t_policy, cost);

  LraFactors t = row_column_core(FM.transpose(), MH.transpose(), H.transpose(), s_policy, t_policy, cost);
  LraFactors out;
  out.X = t.X.transpose();
  out.Y = t.Y.transpose();
  out.orientation = Orientation::yx;
  out.cost = t.cost;
  out.degenerate = t.degenerate;
  out.warnings = std::move(t.warnings);
  return out;
}

PosteriorBound posterior_error_bound(const MatrixXd& M, const MatrixXd& H, Index r) {
  if (r < 1) throw std::invalid_argument("posterior_error_bound: r must be positive");
  if (H.rows() != M.cols()) throw std::invalid_argument("posterior_error_bound: shape mismatch");
  const auto f = svd(M);
  const Index rho = f.rank();
  if (r > rho) throw std::invalid_argument("posterior_error_bound: rank(M) < r");

  PosteriorBound b;
  const double hn = norm(H, NormKind::spectral);
  b.scale = hn > 1.0 ? hn : 1.0;
  const MatrixXd Hs = H / b.scale;

  const MatrixXd C1 = f.V.leftCols(r).transpose() * Hs;
  const VectorXd c1sv = singular_values(C1);
  if (c1sv.size() < r || !(c1sv(r - 1) > 1e-12 * c1sv(0))) {
    throw NumericalError("test matrix in/near null space of top singular space");
  }
  b.c1_pinv_norm = 1.0 / c1sv(r - 1);
  b.multiplier = std::sqrt(1.0 + b.c1_pinv_norm * b.c1_pinv_norm);

  const VectorXd sigma2 = f.sigma.tail(rho - r);
  const MatrixXd C2 = f.V.rightCols(rho - r).transpose() * Hs;
  const MatrixXd T = sigma2.asDiagonal() * C2 * pinv(C1);
  const double s_next = rho > r ? sigma2(0) : 0.0;
  const double t2 = T.size() > 0 ? norm(T, NormKind::spectral) : 0.0;
  b.bound2 = std::sqrt(s_next * s_next + t2 * t2);
  b.boundF = std::sqrt(sigma2.squaredNorm() + T.squaredNorm());
  return b;
}

namespace {

void require(bool ok, const char* inequality) {
  if (!ok) throw std::invalid_argument(std::string("precondition violated: ") + inequality);
}

}  // namespace

AprioriBound apriori_bounds(const AprioriQuery& q) {
  const double n = static_cast<double>(q.n);
  const double l = static_cast<double>(q.l);
  const double r = static_cast<double>(q.r);
  AprioriBound b;
  switch (q.model) {
    case AprioriModel::random_space_i:
    case AprioriModel::random_space_ii:
    case AprioriModel::factor_gaussian_i:
    case AprioriModel::factor_gaussian_ii: {
      require(q.r >= 1, "r >= 1");
      require(n > 36.0 * r, "n > 36r");
      require(l > 22.0 * (r - 1.0), "l > 22(r-1)");
      require(q.r <= q.l && q.l < q.n, "r <= l < n");
      const bool random_space = q.model == AprioriModel::random_space_i || q.model == AprioriModel::random_space_ii;
      const bool conditioned = q.model == AprioriModel::random_space_ii || q.model == AprioriModel::factor_gaussian_ii;
      const double kappa2 = conditioned ? q.kappa * q.kappa : 1.0;
      const double c = random_space ? 16.0 : 100.0;
      b.factor = std::sqrt(1.0 + c * kappa2 * n / l);
      double fail = std::exp(-n / 72.0) + std::exp(-(l - r) / 20.0);
      if (!random_space) fail += std::exp(-(n - r) / 20.0);
      b.failure_prob = fail;
      break;
    }
    case AprioriModel::gaussian_hmt:
      require(q.r >= 2, "2 <= r");
      require(q.r <= q.l - 2, "r <= l-2");
      b.factor = std::sqrt(1.0 + r / (l - r - 1.0));
      break;
    case AprioriModel::tyuc: {
      const double k = static_cast<double>(q.k);
      require(q.k > q.l, "k > l");
      require(q.l > q.r, "l > r");
      b.factor = std::sqrt(k * l / ((k - l) * (l - r)));
      break;
    }
  }
  return b;
}

double factor_gaussian_perturbation_limit(double sigma_r_of_A, Index n, Index l) {
  return sigma_r_of_A / (48.0 * std::sqrt(static_cast<double>(n) / static_cast<double>(l)) + 6.0);
}

PremultBound premult_bound(const MatrixXd& X, const MatrixXd& F) {
  if (F.cols() != X.rows()) throw std::invalid_argument("premult_bound: shape mismatch");
  const MatrixXd FX = F * X;
  const VectorXd sv = singular_values(FX);
  const Index l = X.cols();
  if (sv.size() < l || !(sv(l - 1) > 1e-12 * sv(0))) throw NumericalError("premult_bound: rank(FX) < l");
  PremultBound b;
  b.fx_pinv_norm = 1.0 / sv(l - 1);
  b.spectral = 1.0 + norm(X, NormKind::spectral) * norm(F, NormKind::spectral) * b.fx_pinv_norm;
  const double fx_pinv_frob = sv.head(l).cwiseInverse().norm();
  b.frobenius = std::sqrt(static_cast<double>(X.rows())) + X.norm() * F.norm() * fx_pinv_frob;
  return b;
}

double maxvol_pinv_bound(Index m, Index k, double h) {
  return std::sqrt(static_cast<double>(m - k) * static_cast<double>(k) * h * h + 1.0);
}

}  // namespace lra
