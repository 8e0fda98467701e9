#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "lra/curvol.hpp"
#include "lra/numkern.hpp"
#include "lra/sketch.hpp"

using namespace lra;
using lra::testing::low_rank;

namespace {

MatrixXd orthonormal_gaussian(Index n, Index l, std::uint64_t seed) { return factorize_qr(gaussian(n, l, seed), false).Q; }

}  // namespace

TEST_SUITE("sketch") {
  TEST_CASE("range finder reproduces exact-rank inputs") {
    for (Index r : {1, 3, 7}) {
      const MatrixXd M = low_rank(40, 30, r, r);
      for (Index l : {r, r + 4}) {
        for (PostPolicy t : {PostPolicy::identity, PostPolicy::qr_r_factor, PostPolicy::qrp_r_factor}) {
          const LraFactors f = range_finder(M, gaussian(30, l, 10 + l), t);
          CHECK((f.product() - M).norm() <= 1e-9 * M.norm());
          CHECK(f.orientation == Orientation::xy);
        }
      }
    }
  }

  TEST_CASE("range finder product is independent of T") {
    const MatrixXd M = gaussian(30, 25, 1);
    const MatrixXd H = gaussian(25, 6, 2);
    const MatrixXd a = range_finder(M, H, PostPolicy::identity).product();
    const MatrixXd b = range_finder(M, H, PostPolicy::qr_r_factor).product();
    const MatrixXd c = range_finder(M, H, PostPolicy::qrp_r_factor).product();
    CHECK((a - b).norm() <= 1e-8 * M.norm());
    CHECK((a - c).norm() <= 1e-8 * M.norm());
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const MatrixXd T = gaussian(6, 6, 100 + seed);
      CHECK((range_finder(M, H * T).product() - b).norm() <= 1e-8 * M.norm());
    }
  }

  TEST_CASE("tiny exact captures") {
    MatrixXd M = MatrixXd::Zero(2, 2);
    M(0, 0) = 1;
    const MatrixXd e1 = MatrixXd::Identity(2, 1);
    CHECK((range_finder(M, e1).product() - M).norm() < 1e-15);
    CHECK((transposed_range_finder(M, e1.transpose()).product() - M).norm() < 1e-15);
  }

  TEST_CASE("transposed range finder") {
    const MatrixXd M = low_rank(35, 28, 4, 9);
    const LraFactors f = transposed_range_finder(M, gaussian(5, 35, 3));
    CHECK(f.orientation == Orientation::yx);
    CHECK((f.product() - M).norm() <= 1e-9 * M.norm());

    const MatrixXd N = gaussian(20, 15, 4);
    const MatrixXd F = gaussian(5, 20, 5);
    const MatrixXd a = transposed_range_finder(N, F).product();
    const MatrixXd b = range_finder(MatrixXd(N.transpose()), MatrixXd(F.transpose())).product().transpose();
    CHECK((a - b).norm() <= 1e-10 * N.norm());
  }

  TEST_CASE("row-and-column sketching reproduces exact-rank inputs") {
    for (Index r : {1, 4}) {
      const MatrixXd M = low_rank(50, 40, r, 20 + r);
      for (auto [k, l] : {std::pair<Index, Index>{r, r}, {r + 5, r + 2}, {r + 3, r + 3}}) {
        const LraFactors f = row_column_sketch(M, gaussian(k, 50, 1), gaussian(40, l, 2));
        CHECK((f.product() - M).norm() <= 1e-8 * M.norm());
        CHECK_FALSE(f.degenerate);
        const LraFactors g = row_column_sketch(M, gaussian(l, 50, 3), gaussian(40, k, 4), PostPolicy::identity,
                                               PostPolicy::qr_r_factor, true);
        CHECK(g.orientation == Orientation::yx);
        CHECK((g.product() - M).norm() <= 1e-8 * M.norm());
      }
    }
    CHECK_THROWS_AS(row_column_sketch(gaussian(10, 10, 0), gaussian(2, 10, 1), gaussian(10, 3, 2)),
                    std::invalid_argument);
  }

  TEST_CASE("row-and-column sketching with k = l is independent of S and T") {
    const MatrixXd M = gaussian(30, 30, 11);
    const MatrixXd F = gaussian(6, 30, 12), H = gaussian(30, 6, 13);
    const MatrixXd base = row_column_sketch(M, F, H).product();
    for (PostPolicy s : {PostPolicy::identity, PostPolicy::qr_r_factor, PostPolicy::qrp_r_factor}) {
      for (PostPolicy t : {PostPolicy::identity, PostPolicy::qr_r_factor, PostPolicy::qrp_r_factor}) {
        CHECK((row_column_sketch(M, F, H, s, t).product() - base).norm() <= 1e-8 * M.norm());
      }
    }
    const MatrixXd S = gaussian(6, 6, 14);
    CHECK((row_column_sketch(M, S * F, H).product() - base).norm() <= 1e-8 * M.norm());
  }

  TEST_CASE("sampling test matrices keep row-and-column sketching sublinear") {
    const Index m = 300, n = 250, k = 12, l = 10;
    const MatrixXd M = low_rank(m, n, 5, 3);
    const MatrixXd F = sampling_matrix(m, k, 1).transpose();
    const MatrixXd H = sampling_matrix(n, l, 2);
    const LraFactors f = row_column_sketch(M, F, H);
    CHECK(f.cost.entries_read == std::uint64_t(m * l + k * n));
    CHECK(f.cost.multiplies <= 10u * std::uint64_t((k + l) * (k + l) * std::max(m, n)));
    CHECK(f.cost.entries_read < std::uint64_t(m * n) / 10);
    CHECK((f.product() - M).norm() <= 1e-8 * M.norm());
  }

  TEST_CASE("degenerate cross is flagged") {
    MatrixXd M = MatrixXd::Zero(8, 8);
    M(7, 7) = 1;
    const MatrixXd F = MatrixXd::Identity(8, 2).transpose();
    const MatrixXd H = MatrixXd::Identity(8, 2);
    const LraFactors f = row_column_sketch(M, F, H);
    CHECK(f.product().norm() == 0);
  }

  TEST_CASE("posterior bound examples") {
    const MatrixXd M = gaussian(20, 15, 7);
    const auto s = svd(M);
    const PosteriorBound b = posterior_error_bound(M, s.V.leftCols(3), 3);
    CHECK(b.multiplier == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(b.bound2 == doctest::Approx(s.sigma(3)).epsilon(1e-9));

    const MatrixXd R = low_rank(20, 15, 3, 8);
    const PosteriorBound z = posterior_error_bound(R, gaussian(15, 5, 9), 3);
    CHECK(z.bound2 <= 1e-10 * R.norm());
    CHECK(z.boundF <= 1e-10 * R.norm());
  }

  TEST_CASE("posterior bound dominates the measured error") {
    for (std::uint64_t t = 0; t < 100; ++t) {
      const MatrixXd M = gaussian(30, 24, derive_seed(1, t));
      const MatrixXd H = orthonormal_gaussian(24, 8, derive_seed(2, t));
      const PosteriorBound b = posterior_error_bound(M, H, 5);
      const MatrixXd E = M - range_finder(M, H).product();
      CHECK(norm(E, NormKind::spectral) <= b.bound2 * (1 + 1e-9));
      CHECK(E.norm() <= b.boundF * (1 + 1e-9));
    }
    const PosteriorBound scaled = posterior_error_bound(gaussian(10, 10, 3), MatrixXd(4 * gaussian(10, 4, 4)), 2);
    CHECK(scaled.scale > 1);
  }

  TEST_CASE("a-priori factors") {
    AprioriQuery q;
    q.n = 512;
    q.l = 160;
    q.r = 8;
    q.model = AprioriModel::random_space_i;
    AprioriBound b = apriori_bounds(q);
    CHECK(b.factor == doctest::Approx(std::sqrt(1 + 16.0 * 512 / 160)));
    CHECK(b.factor == doctest::Approx(7.225).epsilon(1e-3));
    REQUIRE(b.failure_prob.has_value());
    CHECK(*b.failure_prob == doctest::Approx(std::exp(-512.0 / 72) + std::exp(-152.0 / 20)));
    CHECK(*b.failure_prob < 1.35e-3);

    q.model = AprioriModel::factor_gaussian_i;
    b = apriori_bounds(q);
    CHECK(b.factor == doctest::Approx(std::sqrt(321.0)));
    CHECK(*b.failure_prob ==
          doctest::Approx(std::exp(-512.0 / 72) + std::exp(-152.0 / 20) + std::exp(-504.0 / 20)));

    q.model = AprioriModel::random_space_ii;
    q.kappa = 2;
    CHECK(apriori_bounds(q).factor == doctest::Approx(std::sqrt(1 + 64.0 * 512 / 160)));

    AprioriQuery p;
    p.n = 1024;
    p.l = 64;
    p.r = 2;
    p.model = AprioriModel::random_space_i;
    CHECK(apriori_bounds(p).factor == doctest::Approx(std::sqrt(257.0)));

    AprioriQuery bad = q;
    bad.n = 200;
    CHECK_THROWS_WITH_AS(apriori_bounds(bad), doctest::Contains("n > 36r"), std::invalid_argument);
    bad = q;
    bad.l = 100;
    CHECK_THROWS_WITH_AS(apriori_bounds(bad), doctest::Contains("l > 22(r-1)"), std::invalid_argument);

    AprioriQuery hmt;
    hmt.l = 10;
    hmt.r = 4;
    hmt.model = AprioriModel::gaussian_hmt;
    CHECK(apriori_bounds(hmt).factor == doctest::Approx(std::sqrt(1 + 4.0 / 5)));
    CHECK_FALSE(apriori_bounds(hmt).failure_prob.has_value());

    AprioriQuery ty;
    ty.k = 8;
    ty.l = 4;
    ty.r = 2;
    ty.model = AprioriModel::tyuc;
    CHECK(apriori_bounds(ty).factor == doctest::Approx(2.0));

    CHECK(factor_gaussian_perturbation_limit(1.0, 512, 160) == doctest::Approx(1.0 / (48 * std::sqrt(3.2) + 6)));
  }

  TEST_CASE("pre-multiplication bound") {
    MatrixXd X = MatrixXd::Zero(9, 3);
    X.topRows(3) = MatrixXd::Identity(3, 3);
    const MatrixXd F = MatrixXd::Identity(9, 3).transpose();
    const PremultBound b = premult_bound(X, F);
    CHECK(b.spectral == doctest::Approx(2.0));
    CHECK(b.fx_pinv_norm == doctest::Approx(1.0));

    const MatrixXd Xg = factorize_qr(gaussian(40, 4, 1), false).Q;
    const PremultBound g = premult_bound(Xg, gaussian(8, 40, 2));
    CHECK(std::isfinite(g.spectral));
    CHECK(g.spectral >= 1);

    for (std::uint64_t t = 0; t < 30; ++t) {
      const MatrixXd M = gaussian(40, 30, derive_seed(3, t));
      const MatrixXd Q = factorize_qr(MatrixXd(M * gaussian(30, 4, derive_seed(4, t))), false).Q;
      const MatrixXd Fs = gaussian(8, 40, derive_seed(5, t));
      const PremultBound pb = premult_bound(Q, Fs);
      const MatrixXd Y = pinv(MatrixXd(Fs * Q)) * Fs * M;
      const MatrixXd best = M - Q * Q.transpose() * M;
      CHECK(norm(MatrixXd(M - Q * Y), NormKind::spectral) <= pb.spectral * norm(best, NormKind::spectral) * (1 + 1e-9));
      CHECK((M - Q * Y).norm() <= pb.frobenius * best.norm() * (1 + 1e-9));
    }
  }

  TEST_CASE("maxvol pseudoinverse bound") {
    CHECK(maxvol_pinv_bound(200, 10, 1.05) == doctest::Approx(std::sqrt(190 * 10 * 1.05 * 1.05 + 1)));
    CHECK(maxvol_pinv_bound(200, 10, 1.05) == doctest::Approx(45.8).epsilon(1e-3));
    for (std::uint64_t t = 0; t < 20; ++t) {
      const MatrixXd X = factorize_qr(gaussian(200, 10, t), false).Q;
      const auto mv = maxvol_rows(X, 1.05);
      MatrixXd FX(10, 10);
      for (Index i = 0; i < 10; ++i) FX.row(i) = X.row(mv.rows[i]);
      CHECK(norm(pinv(FX), NormKind::spectral) <= maxvol_pinv_bound(200, 10, 1.05));
    }
  }
}
