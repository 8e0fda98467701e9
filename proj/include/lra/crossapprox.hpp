#pragma once

// Cross-Approximation iterations: alternating maxvol selection of rows in
// an m x l column block and of columns in a k x n row block.

#include <vector>

#include "lra/curvol.hpp"

namespace lra {

enum class CaInit { partial_pivot, given, random };
enum class StopReason { fixed_point, sweep_cap, degenerate_restart_exhausted };

std::string to_string(StopReason reason);

struct CaOptions {
  Index k = 1;
  Index l = 1;
  Index r = 1;
  double h = 1.05;
  int max_sweeps = 10;
  CaInit init = CaInit::partial_pivot;
  IndexList J0;             // used with CaInit::given
  std::uint64_t seed = 0;
  int max_restarts = 1;     // fresh random column sets tried after a degenerate cross
  NucleusPolicy nucleus;    // CUR nucleus on the final cross (canonical G^+ by default)
};

struct CaState {
  IndexList I;
  IndexList J;
  int sweeps = 0;           // row-step invocations
  int restarts = 0;
  bool degenerate = false;
  std::vector<double> log_volume_history;  // cross volume after each step since the last restart
  StopReason stop_reason = StopReason::fixed_point;
  Cost cost;
};

struct CaResult {
  CurFactors cur;
  CaState state;
};

struct StepResult {
  IndexList indices;
  bool degenerate = false;
  int swaps = 0;
  Cost cost;
};

/// Reads M[I, :] and selects l columns by maxvol. When l is at least the
/// numerical rank of the block, selection runs on an orthonormal basis of
/// its row space. A block whose numerical rank (relative 1e-10) is below
/// min(r, |I|, l) is reported degenerate; the returned indices are then the
/// l columns of largest norm.
StepResult ca_column_step(const MatrixXd& M, const IndexList& I, Index l, double h, Index r = 1,
                          const IndexList* warm = nullptr, int max_swaps = 1000);

/// Mirror of ca_column_step on M[:, J].
StepResult ca_row_step(const MatrixXd& M, const IndexList& J, Index k, double h, Index r = 1,
                       const IndexList* warm = nullptr, int max_swaps = 1000);

CaResult ca_iterate(const MatrixXd& M, const CaOptions& options);

}  // namespace lra
