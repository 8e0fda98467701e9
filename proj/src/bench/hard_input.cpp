#include "lra/bench/hard_input.hpp"

#include <algorithm>
#include <stdexcept>

#include "lra/access.hpp"
#include "lra/bench/experiment.hpp"
#include "lra/crossapprox.hpp"
#include "lra/numkern.hpp"
#include "lra/sketch.hpp"
#include "lra/testmat.hpp"

namespace lra::bench {

HardInputReport hard_input_demo(Index m, Index n, std::uint64_t seed) {
  if (m < 4 || n < 4) throw std::invalid_argument("hard_input_demo: need m, n >= 4");
  if (m * n > 1000000) throw std::invalid_argument("hard_input_demo: need m n <= 1e6");
  HardInputReport rep;
  rep.m = m;
  rep.n = n;
  rep.k = 4;
  rep.l = 4;
  rep.seed = seed;

  const MatrixXd H = sampling_matrix(n, rep.l, derive_seed(seed, 0));
  const MatrixXd F = sampling_matrix(m, rep.k, derive_seed(seed, 1)).transpose();
  const IndexList rows = nonzero_cols(F);
  const IndexList cols = nonzero_rows(H);
  auto read = [&](Index i, Index j) {
    return std::find(rows.begin(), rows.end(), i) != rows.end() || std::find(cols.begin(), cols.end(), j) != cols.end();
  };

  const MatrixXd zero = MatrixXd::Zero(m, n);
  const LraFactors base = row_column_sketch(zero, F, H);
  const MatrixXd zero_out = base.product();
  rep.accesses = base.cost.entries_read;
  rep.max_error = norm(zero_out, NormKind::spectral);
  rep.witnesses_identical = true;

  int recovered = 0;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      MatrixXd D = zero;
      D(i, j) = 1.0;
      const LraFactors f = row_column_sketch(D, F, H);
      const MatrixXd out = f.product();
      rep.max_error = std::max(rep.max_error, norm(MatrixXd(D - out), NormKind::spectral));
      if (!read(i, j)) {
        ++rep.unread_positions;
        if (out != zero_out) rep.witnesses_identical = false;
      }

      CaOptions opt;
      opt.k = opt.l = opt.r = 1;
      opt.max_sweeps = 2;
      opt.init = CaInit::random;
      opt.max_restarts = static_cast<int>(n - 1);
      opt.seed = derive_seed(seed, 2 + static_cast<std::uint64_t>(i * n + j));
      const CaResult ca = ca_iterate(D, opt);
      if (norm(MatrixXd(D - ca.cur.product()), NormKind::spectral) < 1e-8) ++recovered;
      rep.ca_max_accesses = std::max(rep.ca_max_accesses, ca.state.cost.entries_read);
      if (ca.state.cost.entries_read > access_budget(m, n, 1, 1, ca.state.sweeps)) ++rep.ca_budget_violations;
    }
  }
  rep.ca_success_fraction = static_cast<double>(recovered) / static_cast<double>(m * n);
  return rep;
}

}  // namespace lra::bench
