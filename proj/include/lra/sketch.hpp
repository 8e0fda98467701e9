#pragma once

// Sketching algorithms: Range Finder (column sketching), its transposed
// variant (row sketching) and row-and-column sketching, plus evaluators of
// the deterministic and probabilistic error bounds.

#include <optional>
#include <string>
#include <vector>

#include "lra/types.hpp"

namespace lra {

/// Choice of the nonsingular post-multiplier T (or pre-multiplier S).
enum class PostPolicy { identity, qr_r_factor, qrp_r_factor };

struct SketchConfig {
  Index r = 1;
  Index l = 1;
  Index k = 1;
  PostPolicy t_policy = PostPolicy::qr_r_factor;
  PostPolicy s_policy = PostPolicy::identity;
  std::uint64_t seed = 0;
};

enum class Orientation { xy, yx };

struct LraFactors {
  MatrixXd X;
  MatrixXd Y;
  Orientation orientation = Orientation::xy;
  Cost cost;
  bool degenerate = false;  // the cross FMH has lower numerical rank than MH
  std::vector<std::string> warnings;

  MatrixXd product() const { return orientation == Orientation::xy ? MatrixXd(X * Y) : MatrixXd(Y * X); }
};

/// X = MH T^{-1}, Y = X^+ M.
LraFactors range_finder(const MatrixXd& M, const MatrixXd& H, PostPolicy t_policy = PostPolicy::qr_r_factor);

/// X = S^{-1} F M, Y = M X^+; the approximation is Y X.
LraFactors transposed_range_finder(const MatrixXd& M, const MatrixXd& F,
                                   PostPolicy s_policy = PostPolicy::qr_r_factor);

/// X = M H T^{-1}, U = S^{-1} F M, W = S^{-1} F X, Y = W^+ U. Only the
/// sketches MH and FM are read from M. With `transposed` the same steps run
/// on M^T with the roles of F and H exchanged, and the result is returned in
/// yx orientation (X is k x n, Y is m x k).
LraFactors row_column_sketch(const MatrixXd& M, const MatrixXd& F, const MatrixXd& H,
                             PostPolicy s_policy = PostPolicy::identity,
                             PostPolicy t_policy = PostPolicy::qr_r_factor, bool transposed = false);

/// Right-hand sides of the deterministic Range Finder bound with
/// C1 = V1^T H and C2 = V2^T H. Requires the full SVD of M, so this is a
/// diagnostic oracle, not a sublinear routine.
struct PosteriorBound {
  double bound2 = 0;       // sqrt(sigma_{r+1}^2 + ||Sigma2 C2 C1^+||_2^2)
  double boundF = 0;       // sqrt(||Sigma2||_F^2 + ||Sigma2 C2 C1^+||_F^2)
  double c1_pinv_norm = 0; // ||C1^+||_2 after rescaling
  double multiplier = 0;   // (1 + ||C1^+||_2^2)^{1/2}
  double scale = 1;        // H was divided by this to get ||H||_2 <= 1
};
PosteriorBound posterior_error_bound(const MatrixXd& M, const MatrixXd& H, Index r);

enum class AprioriModel {
  random_space_i,
  random_space_ii,
  factor_gaussian_i,
  factor_gaussian_ii,
  gaussian_hmt,
  tyuc
};

struct AprioriQuery {
  Index n = 0;
  Index l = 0;
  Index r = 0;
  Index k = 0;        // tyuc only
  double kappa = 1.0; // condition number of H for the (ii) variants
  AprioriModel model = AprioriModel::random_space_i;
};

/// Error-ratio factor and failure probability (absent for expectation bounds).
struct AprioriBound {
  double factor = 0;
  std::optional<double> failure_prob;
};
AprioriBound apriori_bounds(const AprioriQuery& query);

/// Largest admissible ||E||_F for the perturbed factor-Gaussian bound (i).
double factor_gaussian_perturbation_limit(double sigma_r_of_A, Index n, Index l);

struct PremultBound {
  double spectral = 0;      // 1 + ||X||_2 ||F||_2 ||(FX)^+||_2
  double frobenius = 0;     // sqrt(m) + ||X||_F ||F||_F ||(FX)^+||_F
  double fx_pinv_norm = 0;  // ||(FX)^+||_2
};
PremultBound premult_bound(const MatrixXd& X, const MatrixXd& F);

/// sqrt((m - k) k h^2 + 1), the bound on ||(FX)^+||_2 / ||X^+||_2 for a
/// row set of weakly h-maximal volume.
double maxvol_pinv_bound(Index m, Index k, double h);

}  // namespace lra
