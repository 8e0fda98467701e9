#include "lra/synth.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "lra/numkern.hpp"
#include "lra/testmat.hpp"

namespace lra {

RegKind parse_reg_kind(const std::string& name) {
  if (name == "baart") return RegKind::baart;
  if (name == "shaw") return RegKind::shaw;
  if (name == "gravity") return RegKind::gravity;
  if (name == "wing") return RegKind::wing;
  if (name == "foxgood") return RegKind::foxgood;
  throw std::invalid_argument("unknown kernel kind: " + name);
}

std::string to_string(RegKind kind) {
  switch (kind) {
    case RegKind::baart: return "baart";
    case RegKind::shaw: return "shaw";
    case RegKind::gravity: return "gravity";
    case RegKind::wing: return "wing";
    case RegKind::foxgood: return "foxgood";
  }
  return "";
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

MatrixXd class1_svd_generated(Index n, Index r, std::uint64_t seed) {
  if (r < 1 || r >= n) throw std::invalid_argument("class1_svd_generated: need 1 <= r < n");
  const MatrixXd U = factorize_qr(gaussian(n, n, derive_seed(seed, 0)), false).Q;
  const MatrixXd V = factorize_qr(gaussian(n, n, derive_seed(seed, 1)), false).Q;
  VectorXd sigma = VectorXd::Constant(n, 1e-10);
  for (Index j = 0; j < r; ++j) sigma(j) = 1.0 / static_cast<double>(j + 1);
  return U * sigma.asDiagonal() * V.transpose();
}

MatrixXd laplacian_single_layer(Index n, int nodes_per_arc, bool normalize) {
  if (n < 4) throw std::invalid_argument("laplacian_single_layer: n must be at least 4");
  std::vector<double> x, w;
  gauss_legendre(nodes_per_arc, x, w);
  const double arc = 2.0 * std::numbers::pi / static_cast<double>(n);

  // The matrix is circulant; evaluate one generating row and shift it.
  VectorXd row(n);
  const std::complex<double> target(2.0, 0.0);
  for (Index j = 0; j < n; ++j) {
    const double a = arc * static_cast<double>(j);
    double sum = 0.0;
    for (int q = 0; q < nodes_per_arc; ++q) {
      const double theta = a + 0.5 * arc * (x[static_cast<std::size_t>(q)] + 1.0);
      sum += w[static_cast<std::size_t>(q)] * std::log(std::abs(target - std::polar(1.0, theta)));
    }
    row(j) = 0.5 * arc * sum;
  }
  MatrixXd M(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) M(i, j) = row((j - i + n) % n);
  }
  if (normalize) M /= norm(M, NormKind::spectral);
  return M;
}

MatrixXd regtools_kernel(RegKind kind, Index n, bool normalize) {
  if (n < 16) throw std::invalid_argument("regtools_kernel: n must be at least 16");
  const double nd = static_cast<double>(n);
  MatrixXd A(n, n);
  switch (kind) {
    case RegKind::baart: {
      const double hs = std::numbers::pi / (2.0 * nd);
      const double ht = std::numbers::pi / nd;
      const double c = 1.0 / (3.0 * std::sqrt(2.0));
      VectorXd ihs(n + 1);
      for (Index i = 0; i <= n; ++i) ihs(i) = static_cast<double>(i) * hs;
      auto diff = [&](double co) {
        VectorXd f(n);
        for (Index i = 0; i < n; ++i) f(i) = (std::exp(ihs(i + 1) * co) - std::exp(ihs(i) * co)) / co;
        return f;
      };
      VectorXd f3 = diff(1.0);
      for (Index j = 1; j <= n; ++j) {
        const VectorXd f1 = f3;
        const double co2 = std::cos((static_cast<double>(j) - 0.5) * ht);
        const double co3 = std::cos(static_cast<double>(j) * ht);
        const VectorXd f2 = diff(co2);
        if (2 * j == n) {
          f3 = VectorXd::Constant(n, hs);
        } else {
          f3 = diff(co3);
        }
        A.col(j - 1) = c * (f1 + 4.0 * f2 + f3);
      }
      break;
    }
    case RegKind::shaw: {
      const double h = std::numbers::pi / nd;
      VectorXd co(n), psi(n);
      for (Index i = 0; i < n; ++i) {
        const double t = -std::numbers::pi / 2.0 + (static_cast<double>(i) + 0.5) * h;
        co(i) = std::cos(t);
        psi(i) = std::numbers::pi * std::sin(t);
      }
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          const double ss = psi(i) + psi(j);
          const double sinc = std::abs(ss) < 1e-300 ? 1.0 : std::sin(ss) / ss;
          const double v = (co(i) + co(j)) * sinc;
          A(i, j) = h * v * v;
        }
      }
      break;
    }
    case RegKind::gravity: {
      const double dt = 1.0 / nd;
      const double d = 0.25;
      for (Index i = 0; i < n; ++i) {
        const double s = dt * (static_cast<double>(i) + 0.5);
        for (Index j = 0; j < n; ++j) {
          const double t = dt * (static_cast<double>(j) + 0.5);
          A(i, j) = dt * d / std::pow(d * d + (s - t) * (s - t), 1.5);
        }
      }
      break;
    }
    case RegKind::wing: {
      const double h = 1.0 / nd;
      for (Index i = 0; i < n; ++i) {
        const double si = (static_cast<double>(i) + 0.5) * h;
        for (Index j = 0; j < n; ++j) {
          const double sj = (static_cast<double>(j) + 0.5) * h;
          A(i, j) = h * sj * std::exp(-si * sj * sj);
        }
      }
      break;
    }
    case RegKind::foxgood: {
      const double h = 1.0 / nd;
      for (Index i = 0; i < n; ++i) {
        const double ti = h * (static_cast<double>(i) + 0.5);
        for (Index j = 0; j < n; ++j) {
          const double tj = h * (static_cast<double>(j) + 0.5);
          A(i, j) = h * std::sqrt(ti * ti + tj * tj);
        }
      }
      break;
    }
  }
  if (normalize) A /= norm(A, NormKind::spectral);
  return A;
}

namespace {

void check_profile(const VectorXd& sigma) {
  for (Index j = 0; j < sigma.size(); ++j) {
    if (!(sigma(j) >= 0.0)) throw std::invalid_argument("sigma_profile must be non-negative");
    if (j > 0 && sigma(j) > sigma(j - 1)) throw std::invalid_argument("sigma_profile must be non-increasing");
  }
}

}  // namespace

MatrixXd random_singular_space_matrix(Index m, Index n, Index r, const VectorXd& sigma_profile, std::uint64_t seed,
                                      bool identity_u) {
  if (r < 1 || r >= n || n > m) throw std::invalid_argument("random_singular_space_matrix: need 1 <= r < n <= m");
  if (sigma_profile.size() < r || sigma_profile.size() > n) {
    throw std::invalid_argument("random_singular_space_matrix: sigma_profile length must lie in [r, n]");
  }
  check_profile(sigma_profile);
  VectorXd sigma = VectorXd::Zero(n);
  sigma.head(sigma_profile.size()) = sigma_profile;

  // Columns of V: Q (basis of the Gaussian row space) then its complement.
  const MatrixXd G = gaussian(r, n, derive_seed(seed, 0));
  Eigen::HouseholderQR<MatrixXd> qr(G.transpose());
  const MatrixXd V = qr.householderQ();

  MatrixXd right = sigma.asDiagonal() * V.transpose();
  if (identity_u) {
    MatrixXd M = MatrixXd::Zero(m, n);
    M.topRows(n) = right;
    return M;
  }
  const MatrixXd U = factorize_qr(gaussian(m, n, derive_seed(seed, 1)), false).Q;
  return U * right;
}

FactorGaussianDraw factor_gaussian_draw(Index m, Index n, Index r, FactorSide side, const VectorXd& sigma_profile,
                                        double perturbation_norm, std::uint64_t seed) {
  if (r < 1 || r >= std::min(m, n)) throw std::invalid_argument("factor_gaussian: need 1 <= r < min(m, n)");
  if (perturbation_norm < 0.0) throw std::invalid_argument("factor_gaussian: perturbation_norm must be >= 0");
  if (sigma_profile.size() != r) throw std::invalid_argument("factor_gaussian: sigma_profile must have length r");
  check_profile(sigma_profile);

  FactorGaussianDraw out;
  switch (side) {
    case FactorSide::right: {
      const MatrixXd QA = factorize_qr(gaussian(m, r, derive_seed(seed, 0)), false).Q;
      const MatrixXd B = gaussian(r, n, derive_seed(seed, 1)) / std::sqrt(static_cast<double>(n));
      out.Mtilde = QA * sigma_profile.asDiagonal() * B;
      break;
    }
    case FactorSide::left: {
      const MatrixXd QB = factorize_qr(gaussian(n, r, derive_seed(seed, 0)), false).Q;
      const MatrixXd B = gaussian(m, r, derive_seed(seed, 1)) / std::sqrt(static_cast<double>(m));
      out.Mtilde = B * sigma_profile.asDiagonal() * QB.transpose();
      break;
    }
    case FactorSide::two_sided: {
      const MatrixXd G1 = gaussian(m, r, derive_seed(seed, 0));
      const MatrixXd G2 = gaussian(r, n, derive_seed(seed, 1));
      out.Mtilde = G1 * sigma_profile.asDiagonal() * G2;
      break;
    }
  }
  out.M = out.Mtilde;
  if (perturbation_norm > 0.0) {
    MatrixXd E = gaussian(m, n, derive_seed(seed, 2));
    E *= perturbation_norm / E.norm();
    out.M += E;
  }
  return out;
}

MatrixXd factor_gaussian(Index m, Index n, Index r, FactorSide side, const VectorXd& sigma_profile,
                         double perturbation_norm, std::uint64_t seed) {
  return factor_gaussian_draw(m, n, r, side, sigma_profile, perturbation_norm, seed).M;
}

}  // namespace lra
