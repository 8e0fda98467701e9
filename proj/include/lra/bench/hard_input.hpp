#pragma once

// The delta-matrix family on which any fixed-access-pattern sublinear
// algorithm fails, and the randomized C-A restart that recovers it.

#include <cstdint>

#include "lra/types.hpp"

namespace lra::bench {

struct HardInputReport {
  Index m = 0;
  Index n = 0;
  Index k = 0;
  Index l = 0;
  std::uint64_t seed = 0;
  double max_error = 0;             // max spectral error of the fixed-pattern run over the family
  std::uint64_t accesses = 0;       // entry reads of one fixed-pattern run
  Index unread_positions = 0;       // (i, j) never read by the fixed pattern
  bool witnesses_identical = false; // every unread delta yields the output of the zero matrix
  double ca_success_fraction = 0;   // deltas recovered to spectral error < 1e-8 by C-A with restarts
  std::uint64_t ca_max_accesses = 0;
  int ca_budget_violations = 0;     // C-A runs exceeding (k + l + 2)(m + n) sweeps reads
};

/// Runs row-and-column sketching with fixed k x m and n x l sampling test
/// matrices (k = l = 4, fixed seed) over every delta matrix and the zero
/// matrix, then C-A with k = l = r = 1 and up to n - 1 random restarts over
/// every delta matrix.
HardInputReport hard_input_demo(Index m, Index n, std::uint64_t seed = 7);

}  // namespace lra::bench
