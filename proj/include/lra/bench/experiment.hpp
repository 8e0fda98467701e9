#pragma once

// Seeded experiment campaigns: input generation, per-trial test matrices,
// algorithm dispatch and error statistics.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lra/synth.hpp"
#include "lra/types.hpp"

namespace lra::bench {

enum class Algorithm { alg31, alg32, alg33, alg34, ca, ca_plus_refine };
enum class InputClass { class1, laplacian, regtools, random_singular_space, factor_gaussian, file };

/// Family index of a pure sampling (sub-permutation) test matrix, next to
/// the experimental families 0..5.
inline constexpr int kSamplingFamily = 6;

std::string to_string(Algorithm a);
std::string to_string(InputClass c);
Algorithm parse_algorithm(const std::string& s);
InputClass parse_input_class(const std::string& s);

struct InputSpec {
  InputClass cls = InputClass::class1;
  Index m = 256;           // rows (random classes only; others are n x n)
  Index n = 256;
  Index gen_rank = 32;     // class1 / random_singular_space / factor_gaussian rank
  RegKind reg = RegKind::wing;
  bool normalize = false;  // regtools spectral normalization
  double perturbation = 0; // factor_gaussian ||E||_F
  std::string path;        // file input (LRAM or CSV)

  bool random() const {
    return cls == InputClass::class1 || cls == InputClass::random_singular_space ||
           cls == InputClass::factor_gaussian;
  }
  std::string label() const;
};

/// Builds the input matrix. Random classes use `seed`; the others ignore it.
MatrixXd make_input(const InputSpec& spec, std::uint64_t seed);

/// Test matrix with `cols` columns and `rows` rows drawn from a family
/// (0..5) or the sampling family.
MatrixXd make_test_matrix(int family, Index rows, Index cols, std::uint64_t seed, bool orthonormalize);

struct ExperimentConfig {
  InputSpec input;
  Algorithm algorithm = Algorithm::alg31;
  int family_h = 0;
  int family_f = 0;
  Index r = 0;          // 0: numerical rank of the input at `eps`
  Index l_fixed = 0;    // 0: l = r + p with p uniform in [p_min, p_max]
  int p_min = 1;
  int p_max = 21;
  int c = 1;            // k = c l (alg34: l = c k)
  Index k_fixed = 0;    // overrides the c rule when nonzero
  int trials = 100;
  std::uint64_t seed = 0;
  double eps = 1e-6;
  bool orthonormalize = false;
  double h = 1.05;
  int ca_sweeps = 2;
  int ca_restarts = 1;
  Index refine_k = 0;   // ca_plus_refine sample size; 0 uses 4 l
  unsigned threads = 1;

  void validate() const;
  std::string l_rule() const;
  std::string k_rule() const;
};

struct ErrorReport {
  std::string input_class;
  int family = 0;
  std::string algorithm;
  Index r = 0;
  std::string l_rule;
  std::string k_rule;
  int trials = 0;
  std::vector<double> errors;           // per-trial relative errors; NaN marks a failed trial
  std::vector<std::uint64_t> accesses;  // per-trial entry reads
  std::vector<std::uint64_t> multiplies;
  double mean = 0;                      // over successful trials
  double std = 0;                       // sample standard deviation
  int degenerate_count = 0;
  double mean_entry_accesses = 0;
  int budget_checked = 0;               // trials subject to the sublinear access budget
  int budget_violations = 0;
  bool relative_to_norm = false;        // optimal error was zero; errors are relative to ||M||_2

  void recompute();
};

/// Access budget (k + l + 2)(m + n) max(sweeps, 1).
std::uint64_t access_budget(Index m, Index n, Index k, Index l, int sweeps);

ErrorReport run_experiment(const ExperimentConfig& config);

}  // namespace lra::bench
