#include "lra/testmat.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

#include "lra/numkern.hpp"

namespace lra {

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_ceil(Index n) {
  int t = 0;
  while ((Index(1) << t) < n) ++t;
  return t;
}

namespace {

void check_abridged(Index n, int d) {
  if (!is_power_of_two(n)) throw std::invalid_argument("abridged transform: n must be a power of two");
  if (d < 0 || d > log2_ceil(n)) throw std::invalid_argument("abridged transform: depth must lie in [0, log2 n]");
}

IndexList random_permutation(Index n, std::mt19937_64& rng) {
  IndexList p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), Index(0));
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

template <typename Mat>
Mat permute_columns(const Mat& A, const IndexList& perm) {
  Mat out(A.rows(), A.cols());
  for (Index j = 0; j < A.cols(); ++j) out.col(j) = A.col(perm[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace

MatrixXd PermutationMatrix::dense() const {
  const Index n = size();
  MatrixXd P = MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) P(mapping[static_cast<std::size_t>(i)], i) = 1.0;
  return P;
}

PermutationMatrix PermutationMatrix::random(Index n, std::mt19937_64& rng) {
  return PermutationMatrix{random_permutation(n, rng)};
}

MatrixXd gaussian(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("gaussian: dimensions must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXd G(m, n);
  for (Index i = 0; i < G.size(); ++i) G.data()[i] = normal(rng);
  return G;
}

MatrixXd sampling_matrix(Index n, Index l, std::uint64_t seed) {
  if (l < 1 || l > n) throw std::invalid_argument("sampling_matrix: need 1 <= l <= n");
  std::mt19937_64 rng(seed);
  const IndexList perm = random_permutation(n, rng);
  MatrixXd H = MatrixXd::Zero(n, l);
  for (Index j = 0; j < l; ++j) H(perm[static_cast<std::size_t>(j)], j) = 1.0;
  return H;
}

MatrixXd abridged_hadamard(Index n, int d) {
  check_abridged(n, d);
  MatrixXd H = MatrixXd::Identity(n >> d, n >> d);
  for (int i = 0; i < d; ++i) {
    const Index b = H.rows();
    MatrixXd next(2 * b, 2 * b);
    next << H, H, H, -H;
    H = std::move(next);
  }
  return H;
}

MatrixXcd abridged_fourier(Index n, int d) {
  check_abridged(n, d);
  using C = std::complex<double>;
  const Index s = n >> d;
  MatrixXcd F = MatrixXcd::Identity(s, s);
  for (int i = 0; i < d; ++i) {
    const Index half_blocks = Index(1) << i;  // 2^i blocks of size s in F
    const Index b = F.rows();
    const double angle = 2.0 * std::numbers::pi / static_cast<double>(half_blocks * 2);

    MatrixXcd FD = F;
    for (Index j = 0; j < half_blocks; ++j) {
      const C w = std::polar(1.0, angle * static_cast<double>(j));
      FD.middleCols(j * s, s) *= w;
    }
    MatrixXcd B(2 * b, 2 * b);
    B << F, F, FD, -FD;

    // Odd/even permutation acting on row blocks of size s.
    MatrixXcd next(2 * b, 2 * b);
    for (Index j = 0; j < half_blocks; ++j) {
      next.middleRows(j * s, s) = B.middleRows(2 * j * s, s);
      next.middleRows((j + half_blocks) * s, s) = B.middleRows((2 * j + 1) * s, s);
    }
    F = std::move(next);
  }
  return F;
}

MatrixXd scaled_permuted(const MatrixXd& base, ScaleMode scale_mode, bool permute, std::uint64_t seed) {
  if (base.rows() != base.cols()) throw std::invalid_argument("scaled_permuted: base must be square");
  if (scale_mode == ScaleMode::unit_complex) {
    throw std::invalid_argument("scaled_permuted: unit_complex scaling needs a complex base");
  }
  std::mt19937_64 rng(seed);
  MatrixXd out = base;
  if (scale_mode == ScaleMode::integer_set) {
    std::uniform_int_distribution<int> pick(-4, 4);
    for (Index i = 0; i < out.rows(); ++i) out.row(i) *= static_cast<double>(pick(rng));
  }
  if (permute) out = permute_columns(out, random_permutation(out.cols(), rng));
  return out;
}

MatrixXcd scaled_permuted(const MatrixXcd& base, ScaleMode scale_mode, bool permute, std::uint64_t seed) {
  if (base.rows() != base.cols()) throw std::invalid_argument("scaled_permuted: base must be square");
  std::mt19937_64 rng(seed);
  MatrixXcd out = base;
  if (scale_mode == ScaleMode::integer_set) {
    std::uniform_int_distribution<int> pick(-4, 4);
    for (Index i = 0; i < out.rows(); ++i) out.row(i) *= static_cast<double>(pick(rng));
  } else if (scale_mode == ScaleMode::unit_complex) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (Index i = 0; i < out.rows(); ++i) out.row(i) *= std::polar(1.0, phase(rng));
  }
  if (permute) out = permute_columns(out, random_permutation(out.cols(), rng));
  return out;
}

namespace {

MatrixXd family_sum_square(int family, Index N, std::uint64_t seed) {
  const bool scaled = family <= 3;
  const int perms = family <= 3 ? family : (family == 4 ? 3 : 2);
  MatrixXd S = scaled_permuted(abridged_hadamard(N, 3), scaled ? ScaleMode::integer_set : ScaleMode::none, true,
                               derive_seed(seed, 0));
  std::mt19937_64 rng(derive_seed(seed, 1));
  for (int p = 0; p < perms; ++p) {
    const IndexList map = random_permutation(N, rng);
    for (Index j = 0; j < N; ++j) S(map[static_cast<std::size_t>(j)], j) += 1.0;
  }
  return S;
}

}  // namespace

FamilyDraw family_matrix_draw(int family, Index n, Index l, std::uint64_t seed, bool orthonormalize) {
  if (family < 0 || family > 5) throw std::invalid_argument("family_matrix: family must lie in 0..5");
  if (n < 8) throw std::invalid_argument("family_matrix: n must be at least 8");
  if (l < 1 || l > n) throw std::invalid_argument("family_matrix: need 1 <= l <= n");

  FamilyDraw draw;
  std::uint64_t s = seed;
  for (;; ++s) {
    MatrixXd H;
    if (family == 0) {
      H = gaussian(n, l, s);
    } else {
      const Index N = is_power_of_two(n) ? n : (Index(1) << log2_ceil(n));
      H = family_sum_square(family, N, s).topLeftCorner(n, l);
    }
    bool full_rank = false;
    try {
      full_rank = factorize_qr(H, true).rank() == l;
    } catch (const NumericalError&) {
      full_rank = false;
    }
    if (full_rank) {
      draw.H = orthonormalize ? factorize_qr(H, false).Q : std::move(H);
      return draw;
    }
    ++draw.redraws;
    if (draw.redraws > 64) throw NumericalError("family_matrix: no full-rank draw after 64 attempts");
  }
}

MatrixXd family_matrix(int family, Index n, Index l, std::uint64_t seed, bool orthonormalize) {
  return family_matrix_draw(family, n, l, seed, orthonormalize).H;
}

MatrixXd materialize(const TestMatrixSpec& spec) {
  MatrixXd H;
  switch (spec.family) {
    case Family::gaussian:
      H = gaussian(spec.rows, spec.cols, spec.seed);
      break;
    case Family::sampling:
      H = sampling_matrix(spec.rows, spec.cols, spec.seed);
      break;
    case Family::abridged_hadamard:
      H = abridged_hadamard(spec.rows, spec.depth_d).leftCols(spec.cols);
      break;
    case Family::asph:
      H = scaled_permuted(abridged_hadamard(spec.rows, spec.depth_d), ScaleMode::integer_set, true, spec.seed)
              .leftCols(spec.cols);
      break;
    case Family::aph:
      H = scaled_permuted(abridged_hadamard(spec.rows, spec.depth_d), ScaleMode::none, true, spec.seed)
              .leftCols(spec.cols);
      break;
    case Family::abridged_fourier:
    case Family::aspf:
      throw std::invalid_argument("materialize: Fourier families are complex; use abridged_fourier");
    case Family::family_sum:
      return family_matrix(spec.family_index, spec.rows, spec.cols, spec.seed, spec.orthonormalize);
  }
  if (spec.orthonormalize) H = factorize_qr(H, false).Q;
  return H;
}

}  // namespace lra
