#include "lra/bench/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lra/bench/parallel.hpp"
#include "lra/curvol.hpp"
#include "lra/leverage.hpp"
#include "lra/numkern.hpp"
#include "lra/sketch.hpp"
#include "lra/synth.hpp"
#include "lra/testmat.hpp"

namespace lra::bench {

bool MonteCarloReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.pass; });
}

const std::vector<std::string>& montecarlo_suite_names() {
  static const std::vector<std::string> names = {"gauss_norms", "preprocess", "volume", "thm54", "thm56", "leverage"};
  return names;
}

namespace {

constexpr double kE = 2.718281828459045;

struct Runner {
  const MonteCarloOptions& opt;
  std::uint64_t stream = 0;

  int scaled(int trials) const { return std::max(10, static_cast<int>(std::lround(trials * opt.trial_scale))); }

  // `bad(seed)` returns true when the tail event occurs in one trial.
  SuiteCheck run(const std::string& name, int trials, double bound, double slack,
                 const std::function<bool(std::uint64_t)>& bad) {
    const int t = scaled(trials);
    const std::uint64_t base = derive_seed(opt.seed, stream++);
    std::vector<char> hits(static_cast<std::size_t>(t), 0);
    parallel_for(hits.size(), opt.threads, [&](std::size_t i) { hits[i] = bad(derive_seed(base, i)) ? 1 : 0; });
    SuiteCheck c;
    c.name = name;
    c.trials = t;
    c.frequency = static_cast<double>(std::count(hits.begin(), hits.end(), 1)) / t;
    c.bound = bound;
    c.slack = slack;
    c.pass = c.frequency <= bound + slack;
    return c;
  }
};

double spectral(const MatrixXd& A) { return singular_values(A)(0); }

void gauss_norms(Runner& run, MonteCarloReport& rep) {
  {
    const Index m = 100, n = 100;
    const double t = 2;
    const double thr = t + std::sqrt(double(m)) + std::sqrt(double(n));
    rep.checks.push_back(run.run("gauss_norm m=100 n=100 t=2", 2000, std::exp(-t * t / 2), 0.02,
                                 [&](std::uint64_t s) { return spectral(gaussian(m, n, s)) > thr; }));
  }
  {
    const Index m = 100, n = 96;
    const double t = 2;
    const double thr = t * kE * std::sqrt(double(m)) / double(m - n + 1);
    rep.checks.push_back(run.run("gauss_pinv m=100 n=96 t=2", 2000, std::pow(t, double(n) - double(m)), 0.02,
                                 [&](std::uint64_t s) {
                                   const VectorXd sv = singular_values(gaussian(m, n, s));
                                   return 1.0 / sv(sv.size() - 1) >= thr;
                                 }));
  }
}

void preprocess(Runner& run, MonteCarloReport& rep) {
  const Index m = 200, n = 100, r = 5, k = 20;
  for (double t : {1.0, 2.0, 3.0}) {
    char name[64];
    std::snprintf(name, sizeof name, "gaussian_premult k=%d r=%d t=%g", int(k), int(r), t);
    const double mult = t + std::sqrt(double(k)) + std::sqrt(double(r));
    rep.checks.push_back(run.run(name, 500, std::exp(-t * t / 2), 0.02, [&](std::uint64_t s) {
      const MatrixXd M = gaussian(m, r, derive_seed(s, 0)) * gaussian(r, n, derive_seed(s, 1));
      const MatrixXd G = gaussian(k, m, derive_seed(s, 2));
      return spectral(G * M) > spectral(M) * mult;
    }));
  }
}

void volume_suite(Runner& run, MonteCarloReport& rep) {
  {
    const double m = 100, r = 5, theta = 5, phi = 0.5;
    const double log_upper = (r / 2) * std::log((1 + theta) * (m - r / 2));
    const double log_lower = (r / 2) * std::log((1 - phi) * (m - r + 1));
    rep.checks.push_back(run.run("gaussian_volume_upper m=100 r=5 theta=5", 1000,
                                 std::exp(-(theta / 4) * (m * r - r * r / 2 - r / 2 + 1)), 0.01,
                                 [&](std::uint64_t s) { return log_volume(gaussian(100, 5, s)) >= log_upper; }));
    rep.checks.push_back(run.run("gaussian_volume_lower m=100 r=5 phi=0.5", 1000,
                                 std::exp(-(phi * phi / 4) * r * (m - r + 1)), 0.01,
                                 [&](std::uint64_t s) { return log_volume(gaussian(100, 5, s)) <= log_lower; }));
  }
  rep.checks.push_back(run.run("volume_submultiplicative", 500, 0.0, 0.0, [&](std::uint64_t s) {
    std::mt19937_64 rng(s);
    std::uniform_int_distribution<int> dim(2, 12);
    const Index m = dim(rng), q = dim(rng), n = dim(rng);
    const Index r = std::uniform_int_distribution<int>(1, int(std::min({m, q, n})))(rng);
    const MatrixXd G = gaussian(m, q, derive_seed(s, 1));
    const MatrixXd H = gaussian(q, n, derive_seed(s, 2));
    return log_volume(G * H, r) > log_volume(G, r) + log_volume(H, r) + std::log1p(1e-9);
  }));
  {
    const Index m = 128, n = 128, r = 4, p = 16, q = 16;
    const double phi = 0.5;
    const double log_floor = r * std::log(1 - phi) + (r / 2.0) * std::log(double(p - r + 1)) +
                             (r / 2.0) * std::log(double(q - r + 1));
    rep.checks.push_back(run.run("factor_gaussian_cross_volume m=n=128 r=4 p=q=16", 500, 0.05, 0.0,
                                 [&](std::uint64_t s) {
                                   const MatrixXd W = gaussian(m, r, derive_seed(s, 0)) * gaussian(r, n, derive_seed(s, 1));
                                   std::mt19937_64 rng(derive_seed(s, 2));
                                   IndexList I(m), J(n);
                                   for (Index i = 0; i < m; ++i) I[i] = i;
                                   for (Index j = 0; j < n; ++j) J[j] = j;
                                   std::shuffle(I.begin(), I.end(), rng);
                                   std::shuffle(J.begin(), J.end(), rng);
                                   MatrixXd S(p, q);
                                   for (Index a = 0; a < p; ++a) {
                                     for (Index b = 0; b < q; ++b) S(a, b) = W(I[a], J[b]);
                                   }
                                   return log_volume(S, r) < log_floor;
                                 }));
  }
}

void thm54(Runner& run, MonteCarloReport& rep) {
  const Index n = 512, r = 8, l = 160;
  AprioriQuery q;
  q.n = n;
  q.l = l;
  q.r = r;
  q.model = AprioriModel::random_space_i;
  const AprioriBound b = apriori_bounds(q);
  VectorXd profile = VectorXd::Constant(n, 1e-3);
  for (Index j = 0; j < r; ++j) profile(j) = 1.0 / double(j + 1);
  const double tail = 1e-3;
  rep.checks.push_back(run.run("range_finder_random_space n=512 r=8 l=160", 1000, *b.failure_prob,
                               0.02 - *b.failure_prob, [&](std::uint64_t s) {
                                 const MatrixXd M = random_singular_space_matrix(n, n, r, profile, derive_seed(s, 0), true);
                                 const MatrixXd H = sampling_matrix(n, l, derive_seed(s, 1));
                                 const LraFactors f = range_finder(M, H);
                                 return spectral(MatrixXd(M - f.product())) / tail > b.factor;
                               }));
}

void thm56(Runner& run, MonteCarloReport& rep) {
  const Index m = 512, n = 512, r = 8, l = 160;
  AprioriQuery q;
  q.n = n;
  q.l = l;
  q.r = r;
  q.model = AprioriModel::factor_gaussian_i;
  const AprioriBound b = apriori_bounds(q);
  VectorXd profile(r);
  for (Index j = 0; j < r; ++j) profile(j) = 1.0 / double(j + 1);
  const double e_norm = factor_gaussian_perturbation_limit(profile(r - 1), n, l);
  rep.checks.push_back(run.run("range_finder_factor_gaussian n=512 r=8 l=160", 1000, *b.failure_prob,
                               0.02 - *b.failure_prob, [&](std::uint64_t s) {
                                 const MatrixXd M = factor_gaussian(m, n, r, FactorSide::right, profile, e_norm,
                                                                    derive_seed(s, 0));
                                 const MatrixXd H = sampling_matrix(n, l, derive_seed(s, 1));
                                 const LraFactors f = range_finder(M, H);
                                 const double opt = singular_values(M)(r);
                                 return spectral(MatrixXd(M - f.product())) / opt > b.factor;
                               }));
}

void leverage(Runner& run, MonteCarloReport& rep) {
  const Index m = 400, n = 200, l = 12, k = 200;
  VectorXd profile(n);
  for (Index j = 0; j < n; ++j) profile(j) = 1.0 / double(j + 1);
  rep.checks.push_back(run.run("leverage_refine m=400 l=12 k=200", 500, 0.10, 0.0, [&](std::uint64_t s) {
    const MatrixXd M = random_singular_space_matrix(m, n, l, profile, derive_seed(s, 0));
    const MatrixXd X = orthonormal_basis(MatrixXd(M * gaussian(n, l, derive_seed(s, 1))));
    const LraFactors f = refine_lra(M, X, k, derive_seed(s, 2));
    const double got = (M - f.product()).norm();
    const double best = (M - X * (X.transpose() * M)).norm();
    return got > 1.5 * best;
  }));
}

}  // namespace

MonteCarloReport montecarlo_suite(const std::string& name, const MonteCarloOptions& options) {
  MonteCarloReport rep;
  rep.suite = name;
  const auto& names = montecarlo_suite_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::invalid_argument("unknown Monte Carlo suite: " + name);
  Runner run{options, static_cast<std::uint64_t>(it - names.begin()) << 8};
  if (name == "gauss_norms") gauss_norms(run, rep);
  if (name == "preprocess") preprocess(run, rep);
  if (name == "volume") volume_suite(run, rep);
  if (name == "thm54") thm54(run, rep);
  if (name == "thm56") thm56(run, rep);
  if (name == "leverage") leverage(run, rep);
  return rep;
}

std::string format_report(const MonteCarloReport& rep) {
  std::ostringstream out;
  char buf[256];
  for (const auto& c : rep.checks) {
    std::snprintf(buf, sizeof buf, "%-4s %-12s %-52s freq=%.4f bound=%.4g slack=%.4g trials=%d\n",
                  c.pass ? "PASS" : "FAIL", rep.suite.c_str(), c.name.c_str(), c.frequency, c.bound, c.slack,
                  c.trials);
    out << buf;
  }
  return out.str();
}

}  // namespace lra::bench
