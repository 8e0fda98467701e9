#include "lra/crossapprox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lra/access.hpp"
#include "lra/numkern.hpp"

namespace lra {

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::fixed_point: return "fixed_point";
    case StopReason::sweep_cap: return "sweep_cap";
    case StopReason::degenerate_restart_exhausted: return "degenerate_restart_exhausted";
  }
  return "";
}

namespace {

IndexList largest_rows(const MatrixXd& A, Index count) {
  IndexList order(static_cast<std::size_t>(A.rows()));
  std::iota(order.begin(), order.end(), Index(0));
  const VectorXd norms = A.rowwise().squaredNorm();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return norms(a) > norms(b); });
  order.resize(static_cast<std::size_t>(count));
  return order;
}

// Selects `count` rows of the block A (candidates are rows).
StepResult select_rows(const MatrixXd& A, Index count, double h, Index r, const IndexList* warm, int max_swaps,
                       Cost cost) {
  StepResult s;
  const auto f = svd(A);
  cost.multiplies += svd_multiplies(A.rows(), A.cols());
  Index rho = 0;
  if (f.rank() > 0) {
    while (rho < f.rank() && f.sigma(rho) > 1e-10 * f.sigma(0)) ++rho;
  }
  const Index need = std::min({r, count, A.cols()});
  if (rho < need) {
    s.degenerate = true;
    s.indices = largest_rows(A, count);
    s.cost = cost;
    return s;
  }
  MaxvolResult mv;
  if (count >= rho) {
    mv = maxvol_rows(f.U.leftCols(rho), h, max_swaps, count, warm);
  } else {
    mv = maxvol_rows(A, h, max_swaps, count, warm);
  }
  cost += mv.cost;
  s.indices = std::move(mv.rows);
  s.swaps = mv.sweeps;
  s.cost = cost;
  return s;
}

bool same_set(IndexList a, IndexList b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

double cross_log_volume(const MatrixXd& M, const IndexList& I, const IndexList& J) {
  MatrixXd G(static_cast<Index>(I.size()), static_cast<Index>(J.size()));
  for (std::size_t i = 0; i < I.size(); ++i) {
    for (std::size_t j = 0; j < J.size(); ++j) G(static_cast<Index>(i), static_cast<Index>(j)) = M(I[i], J[j]);
  }
  return log_volume(G);
}

}  // namespace

StepResult ca_column_step(const MatrixXd& M, const IndexList& I, Index l, double h, Index r, const IndexList* warm,
                          int max_swaps) {
  if (I.empty()) throw std::invalid_argument("ca_column_step: empty row set");
  if (l < 1 || l > M.cols()) throw std::invalid_argument("ca_column_step: need 1 <= l <= n");
  Cost cost;
  const MatrixXd R = read_rows(M, I, cost);
  return select_rows(R.transpose(), l, h, r, warm, max_swaps, cost);
}

StepResult ca_row_step(const MatrixXd& M, const IndexList& J, Index k, double h, Index r, const IndexList* warm,
                       int max_swaps) {
  if (J.empty()) throw std::invalid_argument("ca_row_step: empty column set");
  if (k < 1 || k > M.rows()) throw std::invalid_argument("ca_row_step: need 1 <= k <= m");
  Cost cost;
  const MatrixXd C = read_columns(M, J, cost);
  return select_rows(C, k, h, r, warm, max_swaps, cost);
}

CaResult ca_iterate(const MatrixXd& M, const CaOptions& opt) {
  const Index m = M.rows();
  const Index n = M.cols();
  if (opt.r < 1 || opt.k < opt.r || opt.l < opt.r) throw std::invalid_argument("ca_iterate: need k, l >= r >= 1");
  if (opt.k > m || opt.l > n) throw std::invalid_argument("ca_iterate: need k <= m and l <= n");

  std::mt19937_64 rng(opt.seed);
  std::vector<bool> tried(static_cast<std::size_t>(n), false);
  auto fresh_columns = [&]() -> IndexList {
    IndexList pool;
    for (Index j = 0; j < n; ++j) {
      if (!tried[static_cast<std::size_t>(j)]) pool.push_back(j);
    }
    if (static_cast<Index>(pool.size()) < opt.l) return {};
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(static_cast<std::size_t>(opt.l));
    for (Index j : pool) tried[static_cast<std::size_t>(j)] = true;
    return pool;
  };

  IndexList J;
  if (opt.init == CaInit::given) {
    if (static_cast<Index>(opt.J0.size()) != opt.l) throw std::invalid_argument("ca_iterate: |J0| must equal l");
    for (Index j : opt.J0) {
      if (j < 0 || j >= n) throw std::invalid_argument("ca_iterate: J0 index out of range");
      tried[static_cast<std::size_t>(j)] = true;
    }
    J = opt.J0;
  } else {
    J = fresh_columns();
  }
  // Pivoted initialization: the first row step stops after greedy pivoting.
  const int first_swaps = opt.init == CaInit::partial_pivot ? 0 : 1000;

  CaResult out;
  CaState& st = out.state;
  IndexList I;
  const double log_h = std::log(opt.h);

  bool restart = true;
  while (restart) {
    restart = false;
    bool degenerate = false;
    st.log_volume_history.clear();

    StepResult rs = ca_row_step(M, J, opt.k, opt.h, opt.r, nullptr, first_swaps);
    ++st.sweeps;
    st.cost += rs.cost;
    I = rs.indices;
    if (rs.degenerate) {
      degenerate = true;
    } else {
      st.log_volume_history.push_back(cross_log_volume(M, I, J));
      while (true) {
        StepResult cs = ca_column_step(M, I, opt.l, opt.h, opt.r, &J);
        st.cost += cs.cost;
        if (cs.degenerate) {
          degenerate = true;
          break;
        }
        const bool same = same_set(cs.indices, J);
        J = cs.indices;
        st.log_volume_history.push_back(cross_log_volume(M, I, J));
        const std::size_t hs = st.log_volume_history.size();
        if (same || (hs >= 3 && st.log_volume_history[hs - 1] - st.log_volume_history[hs - 3] < log_h)) {
          st.stop_reason = StopReason::fixed_point;
          break;
        }
        if (st.sweeps >= opt.max_sweeps) {
          st.stop_reason = StopReason::sweep_cap;
          break;
        }
        rs = ca_row_step(M, J, opt.k, opt.h, opt.r, &I);
        ++st.sweeps;
        st.cost += rs.cost;
        if (rs.degenerate) {
          degenerate = true;
          break;
        }
        const bool same_rows = same_set(rs.indices, I);
        I = rs.indices;
        st.log_volume_history.push_back(cross_log_volume(M, I, J));
        if (same_rows) {
          st.stop_reason = StopReason::fixed_point;
          break;
        }
      }
    }

    if (degenerate) {
      ++st.restarts;
      IndexList next;
      if (st.restarts <= opt.max_restarts) next = fresh_columns();
      if (next.empty()) {
        st.degenerate = true;
        st.stop_reason = StopReason::degenerate_restart_exhausted;
      } else {
        J = std::move(next);
        restart = true;
      }
    }
  }

  st.I = I;
  st.J = J;
  out.cur = build_cur(M, I, J, opt.nucleus);
  st.cost += out.cur.cost;
  return out;
}

}  // namespace lra
