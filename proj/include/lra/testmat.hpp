#pragma once

// Test-matrix generators: Gaussian, sampling (sub-permutation), d-abridged
// Hadamard and Fourier matrices, their scaled/permuted variants and the six
// experimental families built from them.

#include <cstdint>
#include <random>

#include "lra/types.hpp"

namespace lra {

enum class Family { gaussian, sampling, abridged_hadamard, abridged_fourier, asph, aph, aspf, family_sum };

/// Declarative description of a real test matrix. `family_index` selects
/// the experimental family (0..5) when family == family_sum.
struct TestMatrixSpec {
  Family family = Family::gaussian;
  Index rows = 0;
  Index cols = 0;
  int depth_d = 0;
  std::uint64_t seed = 0;
  bool orthonormalize = false;
  int family_index = 0;
};

struct PermutationMatrix {
  IndexList mapping;  // mapping[i] is the row index of the 1 in column i

  Index size() const { return static_cast<Index>(mapping.size()); }
  MatrixXd dense() const;
  static PermutationMatrix random(Index n, std::mt19937_64& rng);
};

enum class ScaleMode { none, integer_set, unit_complex };

MatrixXd gaussian(Index m, Index n, std::uint64_t seed);

/// n x l leftmost columns of a random n x n permutation matrix.
MatrixXd sampling_matrix(Index n, Index l, std::uint64_t seed);

/// H_{d,d}: d steps of the Hadamard recursion started from I_{n/2^d}.
MatrixXd abridged_hadamard(Index n, int d);

/// F_{d,d}: d steps of the radix-2 decimation recursion with twiddle
/// diagonals and odd/even row permutations, started from I_{n/2^d}.
MatrixXcd abridged_fourier(Index n, int d);

/// D * base * P: optional random diagonal row scaling (integers -4..4 or
/// unit-modulus phases) followed by an optional random column permutation.
MatrixXd scaled_permuted(const MatrixXd& base, ScaleMode scale_mode, bool permute, std::uint64_t seed);
MatrixXcd scaled_permuted(const MatrixXcd& base, ScaleMode scale_mode, bool permute, std::uint64_t seed);

/// Result of a family draw; `redraws` counts seed bumps caused by rank deficiency.
struct FamilyDraw {
  MatrixXd H;
  int redraws = 0;
};

/// Family 0 is Gaussian n x l; families 1-3 add {1,2,3} random permutation
/// matrices to a 3-ASPH, families 4-5 add {3,2} to a 3-APH. The leftmost l
/// columns of the n x n sum are returned. For n not a power of two the sum
/// is built at the next power of two and its leading n x l block is taken.
FamilyDraw family_matrix_draw(int family, Index n, Index l, std::uint64_t seed, bool orthonormalize);
MatrixXd family_matrix(int family, Index n, Index l, std::uint64_t seed, bool orthonormalize);

MatrixXd materialize(const TestMatrixSpec& spec);

bool is_power_of_two(Index n);
int log2_ceil(Index n);

}  // namespace lra
