#pragma once

// Synthetic input matrices: SVD-generated Class I matrices, the single-layer
// Laplacian, the Fredholm first-kind kernels of Regularization Tools,
// matrices with a random right singular space and (perturbed) factor-Gaussian
// matrices.

#include <cstdint>
#include <string>
#include <vector>

#include "lra/types.hpp"

namespace lra {

enum class RegKind { baart, shaw, gravity, wing, foxgood };
enum class FactorSide { left, right, two_sided };

RegKind parse_reg_kind(const std::string& name);
std::string to_string(RegKind kind);

/// U diag(1, 1/2, ..., 1/r, 1e-10, ..., 1e-10) V^T with U, V the Q factors of
/// independent n x n Gaussian matrices.
MatrixXd class1_svd_generated(Index n, Index r, std::uint64_t seed);

/// m_ij = c * int over arc j of the unit circle of log|2 w^i - y| |dy|,
/// w = exp(2 pi i / n), with composite Gauss-Legendre quadrature per arc.
/// With normalize set, c is chosen so that ||M||_2 = 1; otherwise c = 1.
MatrixXd laplacian_single_layer(Index n, int nodes_per_arc = 16, bool normalize = true);

/// Regularization Tools discretizations (Galerkin for baart, midpoint
/// quadrature for the others). Raw by default; `normalize` rescales to
/// unit spectral norm.
MatrixXd regtools_kernel(RegKind kind, Index n, bool normalize = false);

/// M = U diag(sigma) [Q Q_perp]^T where Q spans the row space of an r x n
/// Gaussian matrix. sigma_profile may be shorter than n; missing trailing
/// values are zero. identity_u forces U = [I_n; 0].
MatrixXd random_singular_space_matrix(Index m, Index n, Index r, const VectorXd& sigma_profile,
                                      std::uint64_t seed, bool identity_u = false);

struct FactorGaussianDraw {
  MatrixXd M;       // Mtilde + E
  MatrixXd Mtilde;  // exact rank-r factor-Gaussian part
};

/// right: Mtilde = A (1/sqrt n) G with A = Q_A diag(sigma), Q_A an orthonormal
/// m x r factor; left: the mirror image; two_sided: G1 diag(sigma) G2.
/// E is Gaussian rescaled to ||E||_F = perturbation_norm exactly.
FactorGaussianDraw factor_gaussian_draw(Index m, Index n, Index r, FactorSide side, const VectorXd& sigma_profile,
                                        double perturbation_norm, std::uint64_t seed);
MatrixXd factor_gaussian(Index m, Index n, Index r, FactorSide side, const VectorXd& sigma_profile,
                         double perturbation_norm, std::uint64_t seed);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace lra
