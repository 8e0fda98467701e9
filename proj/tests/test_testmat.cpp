#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "lra/access.hpp"
#include "lra/numkern.hpp"
#include "lra/testmat.hpp"

using namespace lra;

namespace {

MatrixXd kron(const MatrixXd& A, const MatrixXd& B) {
  MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  }
  return K;
}

MatrixXd hadamard_oracle(Index n, int d) {
  MatrixXd H2(2, 2);
  H2 << 1, 1, 1, -1;
  MatrixXd K = MatrixXd::Ones(1, 1);
  for (int i = 0; i < d; ++i) K = kron(H2, K);
  return kron(K, MatrixXd::Identity(n >> d, n >> d));
}

MatrixXcd dft(Index n, double sign) {
  MatrixXcd W(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) W(a, b) = std::polar(1.0, sign * 2.0 * std::numbers::pi * double(a * b) / double(n));
  }
  return W;
}

template <typename M>
Index nonzeros_in_row(const M& A, Index i) {
  Index c = 0;
  for (Index j = 0; j < A.cols(); ++j) c += std::abs(A(i, j)) > 1e-14;
  return c;
}

template <typename M>
Index nonzeros_in_col(const M& A, Index j) {
  Index c = 0;
  for (Index i = 0; i < A.rows(); ++i) c += std::abs(A(i, j)) > 1e-14;
  return c;
}

}  // namespace

TEST_SUITE("testmat") {
  TEST_CASE("gaussian moments and determinism") {
    const MatrixXd G = gaussian(1000, 1000, 42);
    const double mean = G.mean();
    const double var = (G.array() - mean).square().sum() / double(G.size() - 1);
    CHECK(std::abs(mean) < 0.005);
    CHECK(var >= 0.99);
    CHECK(var <= 1.01);
    CHECK(gaussian(7, 5, 3) == gaussian(7, 5, 3));
    CHECK(gaussian(7, 5, 3) != gaussian(7, 5, 4));
  }

  TEST_CASE("sampling matrices") {
    const MatrixXd P = sampling_matrix(6, 6, 1);
    CHECK((P.transpose() * P - MatrixXd::Identity(6, 6)).norm() == 0);
    CHECK((P * P.transpose() - MatrixXd::Identity(6, 6)).norm() == 0);

    const MatrixXd S = sampling_matrix(4, 2, 2);
    CHECK(S.sum() == 2);
    for (Index j = 0; j < 2; ++j) CHECK(S.col(j).sum() == 1);
    CHECK((S.transpose() * S - MatrixXd::Identity(2, 2)).norm() == 0);
    CHECK_THROWS_AS(sampling_matrix(3, 4, 0), std::invalid_argument);

    const MatrixXd M = gaussian(9, 30, 5);
    const MatrixXd H = sampling_matrix(30, 4, 6);
    Cost cost;
    const MatrixXd MH = sketch_right(M, H, cost);
    CHECK((MH - M * H).norm() < 1e-14);
    CHECK(cost.entries_read == 9u * 4u);
    CHECK(cost.multiplies <= 9u * 4u);
  }

  TEST_CASE("abridged Hadamard examples") {
    MatrixXd H2(2, 2);
    H2 << 1, 1, 1, -1;
    CHECK(abridged_hadamard(2, 1) == H2);
    MatrixXd H41(4, 4);
    H41 << 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, -1, 0, 0, 1, 0, -1;
    CHECK(abridged_hadamard(4, 1) == H41);
    const MatrixXd H8 = abridged_hadamard(8, 3);
    CHECK((H8 * H8.transpose() - 8 * MatrixXd::Identity(8, 8)).norm() == 0);
    CHECK_THROWS_AS(abridged_hadamard(12, 1), std::invalid_argument);
    CHECK_THROWS_AS(abridged_hadamard(8, 4), std::invalid_argument);
  }

  TEST_CASE("abridged Hadamard matches the Kronecker oracle exactly") {
    for (Index n : {2, 4, 8, 16, 32, 64}) {
      for (int d = 0; (Index(1) << d) <= n; ++d) {
        const MatrixXd H = abridged_hadamard(n, d);
        CHECK(H == hadamard_oracle(n, d));
        const Index nnz = Index(1) << d;
        for (Index i = 0; i < n; ++i) {
          CHECK(nonzeros_in_row(H, i) == nnz);
          CHECK(nonzeros_in_col(H, i) == nnz);
        }
        CHECK((H * H.transpose() - double(nnz) * MatrixXd::Identity(n, n)).norm() == 0);
      }
    }
  }

  TEST_CASE("abridged Fourier structure") {
    MatrixXcd F2(2, 2);
    F2 << 1, 1, 1, -1;
    CHECK((abridged_fourier(2, 1) - F2).norm() < 1e-15);
    for (Index n : {4, 8, 16, 32}) {
      for (int d = 0; (Index(1) << d) <= n; ++d) {
        const MatrixXcd F = abridged_fourier(n, d);
        const double scale = double(Index(1) << d);
        CHECK((F * F.adjoint() - scale * MatrixXcd::Identity(n, n)).norm() < 1e-12);
        for (Index i = 0; i < n; ++i) {
          CHECK(nonzeros_in_row(F, i) == (Index(1) << d));
          CHECK(nonzeros_in_col(F, i) == (Index(1) << d));
        }
      }
    }
  }

  TEST_CASE("full-depth abridged Fourier is the DFT up to row order") {
    for (Index n : {4, 8, 16, 64}) {
      const MatrixXcd F = abridged_fourier(n, log2_ceil(n));
      const MatrixXcd W = dft(n, 1.0);
      // Every row of F equals exactly one DFT row, and each DFT row is used once.
      std::set<Index> used;
      for (Index i = 0; i < n; ++i) {
        Index match = -1;
        for (Index a = 0; a < n; ++a) {
          if ((F.row(i) - W.row(a)).norm() < 1e-10) match = a;
        }
        REQUIRE(match >= 0);
        used.insert(match);
      }
      CHECK(used.size() == std::size_t(n));

      // Direct evaluation of the DFT sum for a random vector.
      Eigen::VectorXcd x(n);
      x.real() = gaussian(n, 1, 7);
      x.imag() = gaussian(n, 1, 8);
      const Eigen::VectorXcd Fx = F * x;
      for (Index i = 0; i < n; ++i) {
        std::complex<double> s = 0;
        for (Index j = 0; j < n; ++j) s += std::polar(1.0, 2 * std::numbers::pi * double(i * j) / double(n)) * x(j);
        bool found = false;
        for (Index r = 0; r < n; ++r) found = found || std::abs(Fx(r) - s) < 1e-10;
        CHECK(found);
      }
    }
  }

  TEST_CASE("scaled and permuted variants") {
    const MatrixXd H = abridged_hadamard(8, 3);
    CHECK(scaled_permuted(H, ScaleMode::none, false, 1) == H);

    const MatrixXd S = scaled_permuted(H, ScaleMode::integer_set, true, 2);
    for (Index i = 0; i < 8; ++i) {
      for (Index j = 0; j < 8; ++j) {
        CHECK(std::abs(S(i, j)) <= 4);
        CHECK(S(i, j) == std::round(S(i, j)));
      }
    }

    const MatrixXd G = gaussian(6, 6, 3);
    const MatrixXd P = scaled_permuted(G, ScaleMode::none, true, 4);
    std::vector<std::vector<double>> ca, cb;
    for (Index j = 0; j < 6; ++j) {
      ca.emplace_back(G.col(j).data(), G.col(j).data() + 6);
      cb.emplace_back(P.col(j).data(), P.col(j).data() + 6);
    }
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    CHECK(ca == cb);

    const MatrixXcd F = scaled_permuted(abridged_fourier(8, 3), ScaleMode::unit_complex, true, 5);
    CHECK((F * F.adjoint() - 8.0 * MatrixXcd::Identity(8, 8)).norm() < 1e-12);
  }

  TEST_CASE("experimental families") {
    CHECK(family_matrix(0, 16, 5, 9, false) == gaussian(16, 5, 9));
    CHECK_THROWS_AS(family_matrix(1, 4, 2, 0, false), std::invalid_argument);
    CHECK_THROWS_AS(family_matrix(6, 16, 2, 0, false), std::invalid_argument);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const MatrixXd H = family_matrix(1, 16, 16, seed, false);
      for (Index i = 0; i < 16; ++i) CHECK(nonzeros_in_row(H, i) <= 9);
    }
    for (int f = 0; f <= 5; ++f) {
      for (Index n : {16, 64, 100}) {
        const MatrixXd H = family_matrix(f, n, 12, 77, true);
        CHECK(H.rows() == n);
        CHECK(H.cols() == 12);
        CHECK((H.transpose() * H - MatrixXd::Identity(12, 12)).norm() < 1e-10);
        CHECK(family_matrix(f, n, 12, 77, true) == H);
        const MatrixXd R = family_matrix(f, n, 12, 77, false);
        CHECK(factorize_qr(R, true).rank() == 12);
      }
    }
    for (int f = 4; f <= 5; ++f) {
      const MatrixXd H = family_matrix(f, 32, 32, 3, false);
      for (Index i = 0; i < 32; ++i) CHECK(nonzeros_in_row(H, i) <= 8 + (f == 4 ? 3 : 2));
    }
  }

  TEST_CASE("materialize is deterministic") {
    TestMatrixSpec spec;
    spec.family = Family::asph;
    spec.rows = 16;
    spec.cols = 6;
    spec.depth_d = 2;
    spec.seed = 10;
    CHECK(materialize(spec) == materialize(spec));
    spec.family = Family::family_sum;
    spec.family_index = 3;
    spec.orthonormalize = true;
    const MatrixXd H = materialize(spec);
    CHECK((H.transpose() * H - MatrixXd::Identity(6, 6)).norm() < 1e-10);
    spec.family = Family::sampling;
    CHECK(materialize(spec) == sampling_matrix(16, 6, 10));
  }

  TEST_CASE("permutation matrices are bijections") {
    std::mt19937_64 rng(1);
    const auto P = PermutationMatrix::random(9, rng);
    IndexList sorted = P.mapping;
    std::sort(sorted.begin(), sorted.end());
    for (Index i = 0; i < 9; ++i) CHECK(sorted[i] == i);
    const MatrixXd D = P.dense();
    CHECK((D.transpose() * D - MatrixXd::Identity(9, 9)).norm() == 0);
    for (Index j = 0; j < 9; ++j) CHECK(D(P.mapping[j], j) == 1);
  }
}
