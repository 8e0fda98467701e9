#include "lra/bench/experiment.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "lra/bench/io.hpp"
#include "lra/bench/parallel.hpp"
#include "lra/crossapprox.hpp"
#include "lra/leverage.hpp"
#include "lra/numkern.hpp"
#include "lra/sketch.hpp"
#include "lra/testmat.hpp"

namespace lra::bench {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::alg31: return "alg31";
    case Algorithm::alg32: return "alg32";
    case Algorithm::alg33: return "alg33";
    case Algorithm::alg34: return "alg34";
    case Algorithm::ca: return "ca";
    case Algorithm::ca_plus_refine: return "ca_plus_refine";
  }
  return "";
}

std::string to_string(InputClass c) {
  switch (c) {
    case InputClass::class1: return "class1";
    case InputClass::laplacian: return "laplacian";
    case InputClass::regtools: return "regtools";
    case InputClass::random_singular_space: return "random_singular_space";
    case InputClass::factor_gaussian: return "factor_gaussian";
    case InputClass::file: return "file";
  }
  return "";
}

Algorithm parse_algorithm(const std::string& s) {
  for (Algorithm a : {Algorithm::alg31, Algorithm::alg32, Algorithm::alg33, Algorithm::alg34, Algorithm::ca,
                      Algorithm::ca_plus_refine}) {
    if (to_string(a) == s) return a;
  }
  throw std::invalid_argument("unknown algorithm: " + s);
}

InputClass parse_input_class(const std::string& s) {
  for (InputClass c : {InputClass::class1, InputClass::laplacian, InputClass::regtools,
                       InputClass::random_singular_space, InputClass::factor_gaussian, InputClass::file}) {
    if (to_string(c) == s) return c;
  }
  throw std::invalid_argument("unknown input class: " + s);
}

std::string InputSpec::label() const {
  if (cls == InputClass::regtools) return to_string(reg);
  return to_string(cls);
}

namespace {

VectorXd harmonic_profile(Index r) {
  VectorXd s(r);
  for (Index j = 0; j < r; ++j) s(j) = 1.0 / static_cast<double>(j + 1);
  return s;
}

}  // namespace

MatrixXd make_input(const InputSpec& spec, std::uint64_t seed) {
  switch (spec.cls) {
    case InputClass::class1: return class1_svd_generated(spec.n, spec.gen_rank, seed);
    case InputClass::laplacian: return laplacian_single_layer(spec.n);
    case InputClass::regtools: return regtools_kernel(spec.reg, spec.n, spec.normalize);
    case InputClass::random_singular_space:
      return random_singular_space_matrix(spec.m, spec.n, spec.gen_rank, harmonic_profile(spec.gen_rank), seed);
    case InputClass::factor_gaussian:
      return factor_gaussian(spec.m, spec.n, spec.gen_rank, FactorSide::right, harmonic_profile(spec.gen_rank),
                             spec.perturbation, seed);
    case InputClass::file: return read_matrix(spec.path);
  }
  throw std::invalid_argument("make_input: unknown class");
}

MatrixXd make_test_matrix(int family, Index rows, Index cols, std::uint64_t seed, bool orthonormalize) {
  if (family == kSamplingFamily) return sampling_matrix(rows, cols, seed);
  if (family < 0 || family > 5) throw std::invalid_argument("make_test_matrix: family must be 0..6");
  return family_matrix(family, rows, cols, seed, orthonormalize);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (r < 0 || l_fixed < 0 || k_fixed < 0) throw std::invalid_argument("config: negative dimension");
  if (p_min < 0 || p_max < p_min) throw std::invalid_argument("config: need 0 <= p_min <= p_max");
  if (c < 1) throw std::invalid_argument("config: c must be >= 1");
  if (eps <= 0) throw std::invalid_argument("config: eps must be positive");
  if (!(h > 1)) throw std::invalid_argument("config: h must exceed 1");
  for (int f : {family_h, family_f}) {
    if (f < 0 || f > kSamplingFamily) throw std::invalid_argument("config: family must be 0..6");
  }
  if (input.cls == InputClass::file && input.path.empty()) throw std::invalid_argument("config: file input needs a path");
}

std::string ExperimentConfig::l_rule() const {
  if (algorithm == Algorithm::alg34) {
    if (k_fixed == 0) return c == 1 ? "k" : std::to_string(c) + "k";
    return std::to_string(k_fixed);
  }
  return l_fixed ? std::to_string(l_fixed) : "r+p";
}

std::string ExperimentConfig::k_rule() const {
  if (algorithm == Algorithm::alg34) return l_fixed ? std::to_string(l_fixed) : "r+p";
  if (k_fixed) return std::to_string(k_fixed);
  return c == 1 ? "l" : std::to_string(c) + "l";
}

std::uint64_t access_budget(Index m, Index n, Index k, Index l, int sweeps) {
  return static_cast<std::uint64_t>(k + l + 2) * static_cast<std::uint64_t>(m + n) *
         static_cast<std::uint64_t>(std::max(sweeps, 1));
}

void ErrorReport::recompute() {
  double sum = 0;
  int count = 0;
  for (double e : errors) {
    if (std::isfinite(e)) {
      sum += e;
      ++count;
    }
  }
  mean = count ? sum / count : std::numeric_limits<double>::quiet_NaN();
  double sq = 0;
  for (double e : errors) {
    if (std::isfinite(e)) sq += (e - mean) * (e - mean);
  }
  std = count > 1 ? std::sqrt(sq / (count - 1)) : 0.0;
  double acc = 0;
  for (std::uint64_t a : accesses) acc += static_cast<double>(a);
  mean_entry_accesses = accesses.empty() ? 0.0 : acc / static_cast<double>(accesses.size());
}

namespace {

struct TrialOutcome {
  double error = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t accesses = 0;
  std::uint64_t multiplies = 0;
  bool degenerate = false;
  bool budget_checked = false;
  bool budget_ok = true;
  bool relative_to_norm = false;
};

struct Reference {
  Index r = 0;
  double optimal = 0;
  double top = 0;
};

Reference reference_for(const MatrixXd& M, const ExperimentConfig& cfg) {
  const VectorXd sv = singular_values(M);
  Reference ref;
  ref.top = sv.size() ? sv(0) : 0.0;
  ref.r = cfg.r ? cfg.r : numerical_rank(M, cfg.eps);
  if (ref.r < 1) throw std::invalid_argument("run_experiment: input has numerical rank zero");
  ref.optimal = ref.r < sv.size() ? sv(ref.r) : 0.0;
  return ref;
}

TrialOutcome run_trial(const MatrixXd& M, const Reference& ref, const ExperimentConfig& cfg, std::uint64_t seed) {
  TrialOutcome out;
  const Index m = M.rows();
  const Index n = M.cols();
  std::mt19937_64 rng(derive_seed(seed, 1));
  const Index p = std::uniform_int_distribution<int>(cfg.p_min, cfg.p_max)(rng);
  const Index base = cfg.l_fixed ? cfg.l_fixed : ref.r + p;
  Index l = base;
  Index k = cfg.k_fixed ? cfg.k_fixed : cfg.c * base;
  if (cfg.algorithm == Algorithm::alg34) {
    k = base;
    l = cfg.k_fixed ? cfg.k_fixed : cfg.c * base;
  }
  if (l > n || k > m) throw std::invalid_argument("run_experiment: sketch size exceeds the input dimensions");

  MatrixXd approx;
  const bool sampling_pair = cfg.family_h == kSamplingFamily && cfg.family_f == kSamplingFamily;
  switch (cfg.algorithm) {
    case Algorithm::alg31: {
      const MatrixXd H = make_test_matrix(cfg.family_h, n, l, derive_seed(seed, 2), cfg.orthonormalize);
      const LraFactors f = range_finder(M, H);
      approx = f.product();
      out.accesses = f.cost.entries_read;
      out.multiplies = f.cost.multiplies;
      out.degenerate = f.degenerate;
      break;
    }
    case Algorithm::alg32: {
      const MatrixXd F = make_test_matrix(cfg.family_f, m, l, derive_seed(seed, 3), cfg.orthonormalize).transpose();
      const LraFactors f = transposed_range_finder(M, F);
      approx = f.product();
      out.accesses = f.cost.entries_read;
      out.multiplies = f.cost.multiplies;
      out.degenerate = f.degenerate;
      break;
    }
    case Algorithm::alg33:
    case Algorithm::alg34: {
      const MatrixXd H = make_test_matrix(cfg.family_h, n, l, derive_seed(seed, 2), cfg.orthonormalize);
      const MatrixXd F = make_test_matrix(cfg.family_f, m, k, derive_seed(seed, 3), cfg.orthonormalize).transpose();
      const LraFactors f = row_column_sketch(M, F, H, PostPolicy::identity, PostPolicy::qr_r_factor,
                                             cfg.algorithm == Algorithm::alg34);
      approx = f.product();
      out.accesses = f.cost.entries_read;
      out.multiplies = f.cost.multiplies;
      out.degenerate = f.degenerate;
      if (sampling_pair) {
        out.budget_checked = true;
        out.budget_ok = out.accesses <= access_budget(m, n, k, l, 1);
      }
      break;
    }
    case Algorithm::ca:
    case Algorithm::ca_plus_refine: {
      CaOptions opt;
      opt.k = k;
      opt.l = l;
      opt.r = ref.r;
      opt.h = cfg.h;
      opt.max_sweeps = cfg.ca_sweeps;
      opt.max_restarts = cfg.ca_restarts;
      opt.seed = derive_seed(seed, 4);
      const CaResult ca = ca_iterate(M, opt);
      out.accesses = ca.state.cost.entries_read;
      out.multiplies = ca.state.cost.multiplies;
      out.degenerate = ca.state.degenerate;
      if (cfg.algorithm == Algorithm::ca) {
        approx = ca.cur.product();
        out.budget_checked = true;
        out.budget_ok = out.accesses <= access_budget(m, n, k, l, ca.state.sweeps);
      } else {
        const Index kr = cfg.refine_k ? cfg.refine_k : 4 * l;
        const LraFactors f = refine_lra(M, ca.cur.C, kr, derive_seed(seed, 5));
        approx = f.product();
        out.accesses += f.cost.entries_read;
        out.multiplies += f.cost.multiplies;
      }
      break;
    }
  }
  const double err = norm(MatrixXd(M - approx), NormKind::spectral);
  if (ref.optimal > 1e-14 * ref.top) {
    out.error = err / ref.optimal;
  } else {
    out.relative_to_norm = true;
    out.error = ref.top > 0 ? err / ref.top : err;
  }
  return out;
}

}  // namespace

ErrorReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ErrorReport rep;
  rep.input_class = cfg.input.label();
  rep.family = cfg.family_h;
  rep.algorithm = to_string(cfg.algorithm);
  rep.l_rule = cfg.l_rule();
  rep.k_rule = cfg.k_rule();
  rep.trials = cfg.trials;

  MatrixXd fixed;
  Reference fixed_ref;
  if (!cfg.input.random()) {
    fixed = make_input(cfg.input, cfg.seed);
    fixed_ref = reference_for(fixed, cfg);
  }

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
  std::vector<Index> ranks(static_cast<std::size_t>(cfg.trials), fixed_ref.r);
  parallel_for(outcomes.size(), cfg.threads, [&](std::size_t t) {
    const std::uint64_t seed = cfg.seed + t;
    TrialOutcome& o = outcomes[t];
    try {
      if (cfg.input.random()) {
        const MatrixXd M = make_input(cfg.input, derive_seed(seed, 0));
        const Reference ref = reference_for(M, cfg);
        ranks[t] = ref.r;
        o = run_trial(M, ref, cfg, seed);
      } else {
        o = run_trial(fixed, fixed_ref, cfg, seed);
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      o = TrialOutcome{};
      o.degenerate = true;
    }
  });

  rep.r = ranks.empty() ? 0 : ranks.front();
  for (const TrialOutcome& o : outcomes) {
    rep.errors.push_back(o.error);
    rep.accesses.push_back(o.accesses);
    rep.multiplies.push_back(o.multiplies);
    if (o.degenerate || !std::isfinite(o.error)) ++rep.degenerate_count;
    if (o.budget_checked) {
      ++rep.budget_checked;
      if (!o.budget_ok) ++rep.budget_violations;
    }
    rep.relative_to_norm = rep.relative_to_norm || o.relative_to_norm;
  }
  rep.recompute();
  return rep;
}

}  // namespace lra::bench
