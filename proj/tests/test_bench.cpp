#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lra/bench/config.hpp"
#include "lra/bench/experiment.hpp"
#include "lra/bench/hard_input.hpp"
#include "lra/bench/io.hpp"
#include "lra/bench/montecarlo.hpp"
#include "lra/bench/parallel.hpp"
#include "lra/testmat.hpp"

using namespace lra;
using namespace lra::bench;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("lra_bench_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config(Algorithm a) {
  ExperimentConfig c;
  c.input.cls = InputClass::class1;
  c.input.m = c.input.n = 64;
  c.input.gen_rank = 8;
  c.algorithm = a;
  c.r = 8;
  c.trials = 6;
  c.seed = 11;
  return c;
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("parallel_for visits every index once and rethrows") {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [](std::size_t i) {
                                   if (i == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
  }

  TEST_CASE("LRAM byte layout and round trip") {
    MatrixXd M(2, 3);
    M << 1, 2, 3, 4, 5, -0.5;
    const std::string p = temp_path("m.lram");
    write_lram(p, M);
    const std::string bytes = slurp(p);
    REQUIRE(bytes.size() == 4 + 1 + 16 + 6 * 8);
    CHECK(bytes.substr(0, 4) == "LRAM");
    CHECK(bytes[4] == 1);
    CHECK(static_cast<unsigned char>(bytes[5]) == 2);
    for (int i = 6; i < 13; ++i) CHECK(bytes[i] == 0);
    CHECK(static_cast<unsigned char>(bytes[13]) == 3);
    double second = 0;
    std::memcpy(&second, bytes.data() + 21 + 8, 8);
    CHECK(second == 2.0);  // row-major: (0,1) follows (0,0)
    CHECK(read_lram(p) == M);
    CHECK(read_matrix(p) == M);

    const std::string q = temp_path("m.csv");
    const MatrixXd G = gaussian(5, 4, 3);
    write_matrix(q, G);
    CHECK(read_matrix(q) == G);
    std::filesystem::remove(p);
    std::filesystem::remove(q);
    CHECK_THROWS_AS(read_lram(temp_path("missing.lram")), IoError);
    CHECK_THROWS_AS(write_lram("/nonexistent_dir/x.lram", M), IoError);
  }

  TEST_CASE("CSV reports round trip") {
    std::ostringstream empty;
    write_csv(empty, {});
    CHECK(empty.str() == std::string(kCsvHeader) + "\n");

    std::vector<ErrorReport> reports = {run_experiment(small_config(Algorithm::alg31)),
                                        run_experiment(small_config(Algorithm::alg33))};
    std::ostringstream out;
    write_csv(out, reports);
    std::istringstream in(out.str());
    const std::vector<SummaryRow> rows = parse_csv(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == summarize(reports[0]));
    CHECK(rows[1] == summarize(reports[1]));
    std::istringstream bad("nope\n");
    CHECK_THROWS(parse_csv(bad));
  }

  TEST_CASE("identical config and seed give identical CSV bytes") {
    for (Algorithm a : {Algorithm::alg32, Algorithm::alg34, Algorithm::ca, Algorithm::ca_plus_refine}) {
      ExperimentConfig c = small_config(a);
      c.family_h = c.family_f = 3;
      std::ostringstream x, y;
      write_csv(x, {run_experiment(c)});
      c.threads = 3;
      write_csv(y, {run_experiment(c)});
      CHECK(x.str() == y.str());
    }
  }

  TEST_CASE("report statistics are recomputable") {
    ErrorReport r = run_experiment(small_config(Algorithm::alg31));
    REQUIRE(r.errors.size() == 6);
    double sum = 0;
    for (double e : r.errors) sum += e;
    CHECK(r.mean == doctest::Approx(sum / 6));
    double ss = 0;
    for (double e : r.errors) ss += (e - r.mean) * (e - r.mean);
    CHECK(r.std == doctest::Approx(std::sqrt(ss / 5)));
    r.errors = {1.0, NAN, 3.0};
    r.accesses = {1, 2, 3};
    r.recompute();
    CHECK(r.mean == 2.0);
    CHECK(r.std == doctest::Approx(std::sqrt(2.0)));
    CHECK(r.mean_entry_accesses == 2.0);
  }

  TEST_CASE("text table has one row per family") {
    std::vector<std::vector<ErrorReport>> cols(2);
    for (int f = 0; f <= 5; ++f) {
      ErrorReport e;
      e.family = f;
      e.errors = {0.1 * (f + 1)};
      e.recompute();
      cols[0].push_back(e);
    }
    const std::string t = text_table("Table", {"A", "B"}, cols);
    std::istringstream in(t);
    std::string line;
    int family_rows = 0, dashes = 0;
    while (std::getline(in, line)) {
      for (int f = 0; f <= 5; ++f) {
        if (line.rfind(std::to_string(f) + " ", 0) == 0 || line.rfind(" " + std::to_string(f) + " ", 0) == 0) {
          ++family_rows;
        }
      }
      if (line.find("---") != std::string::npos && line.find("Mean") == std::string::npos) ++dashes;
    }
    CHECK(family_rows == 6);
    CHECK(t.find("Mean") != std::string::npos);
    CHECK(t.find("Std") != std::string::npos);
    CHECK(dashes >= 6);
  }

  TEST_CASE("JSON configs") {
    const auto doc = nlohmann::json::parse(R"({"experiments": [
      {"input": {"class": "regtools", "kind": "gravity", "n": 100}, "algorithm": "alg33", "c": 2, "trials": 3},
      {"input": {"class": "laplacian", "n": 64}, "r": 5, "seed": 9}
    ]})");
    const auto cs = configs_from_document(doc);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].input.cls == InputClass::regtools);
    CHECK(cs[0].input.reg == RegKind::gravity);
    CHECK(cs[0].algorithm == Algorithm::alg33);
    CHECK(cs[0].c == 2);
    CHECK(cs[0].trials == 3);
    CHECK(cs[1].r == 5);
    CHECK(cs[1].seed == 9);
    CHECK(config_from_json(config_to_json(cs[0])).input.reg == RegKind::gravity);
    CHECK_THROWS(config_from_json(nlohmann::json::parse(R"({"trails": 3})")));
    CHECK_THROWS(config_from_json(nlohmann::json::parse(R"({"input": {"klass": "x"}})")));
    CHECK_THROWS(config_from_json(nlohmann::json::parse(R"({"trials": 0})")));
  }

  TEST_CASE("table campaigns") {
    const TableCampaign t1 = table_campaign(1, Scale::desk, 5, 1);
    CHECK(t1.column_labels.size() == t1.columns.size());
    for (const auto& col : t1.columns) CHECK((col.empty() || col.size() == 6));
    const TableCampaign t5 = table_campaign(5, Scale::desk, 5, 1);
    for (const auto& col : t5.columns) {
      for (const auto& c : col) CHECK(c.algorithm == Algorithm::alg33);
    }
    CHECK_THROWS(table_campaign(7, Scale::desk, 5, 1));
  }

  TEST_CASE("sampling and C-A runs stay within the access budget") {
    CHECK(access_budget(10, 20, 3, 4, 0) == 9u * 30u);
    CHECK(access_budget(10, 20, 3, 4, 2) == 2u * 9u * 30u);
    for (Algorithm a : {Algorithm::alg33, Algorithm::alg34, Algorithm::ca}) {
      ExperimentConfig c = small_config(a);
      c.input.cls = InputClass::regtools;
      c.input.n = 200;
      c.input.reg = RegKind::shaw;
      c.r = 0;
      c.family_h = c.family_f = kSamplingFamily;
      const ErrorReport r = run_experiment(c);
      CHECK(r.budget_checked == c.trials);
      CHECK(r.budget_violations == 0);
      for (std::uint64_t acc : r.accesses) CHECK(acc < 200u * 200u);
    }
  }

  TEST_CASE("hard input demo") {
    const HardInputReport h = hard_input_demo(16, 16);
    CHECK(h.max_error >= 0.5);
    CHECK(h.accesses < 256u);
    CHECK(h.unread_positions > 0);
    CHECK(h.witnesses_identical);
    CHECK(h.ca_success_fraction >= 0.9);
    CHECK(h.ca_budget_violations == 0);
    CHECK_THROWS_AS(hard_input_demo(2, 16), std::invalid_argument);
  }

  TEST_CASE("Monte Carlo suites at reduced scale") {
    MonteCarloOptions o;
    o.trial_scale = 0.05;
    for (const std::string name : {"gauss_norms", "volume", "preprocess"}) {
      const MonteCarloReport r = montecarlo_suite(name, o);
      CHECK(r.suite == name);
      CHECK_FALSE(r.checks.empty());
      for (const auto& c : r.checks) {
        CHECK(c.trials >= 10);
        CHECK(c.pass == (c.frequency <= c.bound + c.slack));
      }
      CHECK(format_report(r).find(name) != std::string::npos);
    }
    CHECK(montecarlo_suite_names().size() == 6);
    CHECK_THROWS(montecarlo_suite("nope", o));
  }
}
