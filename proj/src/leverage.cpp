#include "lra/leverage.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "lra/access.hpp"
#include "lra/numkern.hpp"

namespace lra {

VectorXd leverage_scores(const MatrixXd& X, bool* orthonormalized) {
  const Index l = X.cols();
  const double defect = (X.transpose() * X - MatrixXd::Identity(l, l)).cwiseAbs().maxCoeff();
  const bool fix = !(defect <= 1e-8);
  if (orthonormalized) *orthonormalized = fix;
  if (!fix) return X.rowwise().squaredNorm();
  return factorize_qr(X, true).Q.rowwise().squaredNorm();
}

std::uint64_t sample_size(Index r, double eps, double delta, double beta) {
  if (r < 1) throw std::invalid_argument("sample_size: r must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("sample_size: need 0 < eps < 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("sample_size: need 0 < delta < 1");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("sample_size: need 0 < beta <= 1");
  const double rd = static_cast<double>(r);
  const double k = 1296.0 * rd * rd / (beta * eps * eps * std::pow(delta, 4));
  // Guard against representation error pushing an exact integer just above itself.
  const double rounded = std::round(k);
  if (std::abs(k - rounded) <= 1e-9 * k) return static_cast<std::uint64_t>(rounded);
  return static_cast<std::uint64_t>(std::ceil(k));
}

LeverageSample draw_leverage_sample(const MatrixXd& X, Index k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("draw_leverage_sample: k must be positive");
  LeverageSample s;
  s.scores = leverage_scores(X, &s.orthonormalized);
  const double total = s.scores.sum();
  std::discrete_distribution<Index> pick(s.scores.data(), s.scores.data() + s.scores.size());
  std::mt19937_64 rng(seed);
  s.rows.resize(static_cast<std::size_t>(k));
  s.scaling.resize(k);
  for (Index t = 0; t < k; ++t) {
    const Index i = pick(rng);
    s.rows[static_cast<std::size_t>(t)] = i;
    s.scaling(t) = 1.0 / std::sqrt(static_cast<double>(k) * s.scores(i) / total);
  }
  return s;
}

LraFactors refine_lra(const MatrixXd& M, const MatrixXd& X, Index k, std::uint64_t seed,
                      const RefineOptions& options) {
  if (X.rows() != M.rows()) throw std::invalid_argument("refine_lra: shape mismatch");
  const Index m = M.rows();
  const Index l = X.cols();

  LraFactors out;
  out.X = X;
  auto solve = [&](const IndexList& rows, const VectorXd& weights) -> bool {
    Cost cost;
    MatrixXd FM = read_rows(M, rows, cost);
    MatrixXd FX(static_cast<Index>(rows.size()), l);
    for (std::size_t t = 0; t < rows.size(); ++t) FX.row(static_cast<Index>(t)) = X.row(rows[t]);
    if (weights.size() > 0) {
      FM = weights.asDiagonal() * FM;
      FX = weights.asDiagonal() * FX;
    }
    const VectorXd sv = singular_values(FX);
    cost.multiplies += svd_multiplies(FX.rows(), FX.cols());
    out.cost += cost;
    if (sv.size() < l || !(sv(l - 1) > 1e-12 * sv(0))) return false;
    out.cost.multiplies += gemm_multiplies(l, FX.rows(), M.cols());
    out.Y = pinv(FX) * FM;
    return true;
  };

  if (options.exhaustive_when_full && k >= m) {
    IndexList all(static_cast<std::size_t>(m));
    std::iota(all.begin(), all.end(), Index(0));
    if (!solve(all, VectorXd())) throw NumericalError("refine_lra: X is rank deficient");
    return out;
  }
  for (int attempt = 0; attempt < 2; ++attempt) {
    const LeverageSample s = draw_leverage_sample(X, k, derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    if (s.orthonormalized) out.warnings.emplace_back("X was not orthonormal; scores use its QR factor");
    if (solve(s.rows, options.scaled ? s.scaling : VectorXd())) return out;
    out.warnings.emplace_back("sampled FX rank deficient; redrawing");
  }
  throw NumericalError("refine_lra: sampled FX rank deficient after redraw");
}

}  // namespace lra
