#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lra {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;
using MatrixXcd = Matrix<std::complex<double>>;

using Index = Eigen::Index;
using IndexList = std::vector<Index>;

/// Raised when a numerical precondition fails (rank deficiency, zero optimum, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Work accounting for a single call. Entry reads count accesses to the
/// input matrix; multiplies are the dominant multiply count of the dense
/// kernels invoked on derived (small) matrices.
struct Cost {
  std::uint64_t entries_read = 0;
  std::uint64_t multiplies = 0;

  Cost& operator+=(const Cost& other) {
    entries_read += other.entries_read;
    multiplies += other.multiplies;
    return *this;
  }
};

// splitmix64 finalizer; derives independent stream seeds from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace lra
