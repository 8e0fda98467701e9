#include "lra/bench/config.hpp"

#include <fstream>
#include <stdexcept>

namespace lra::bench {

using nlohmann::json;

Scale parse_scale(const std::string& s) {
  if (s == "desk") return Scale::desk;
  if (s == "paper") return Scale::paper;
  throw std::invalid_argument("unknown scale: " + s);
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw std::invalid_argument(std::string(where) + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw std::invalid_argument(std::string(where) + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  check_keys(j,
             {"input", "algorithm", "family_h", "family_f", "r", "l", "p_min", "p_max", "c", "k", "trials", "seed",
              "eps", "orthonormalize", "h", "ca_sweeps", "ca_restarts", "refine_k", "threads"},
             "experiment");
  ExperimentConfig c;
  if (j.contains("input")) {
    const json& in = j.at("input");
    check_keys(in, {"class", "kind", "m", "n", "gen_rank", "normalize", "perturbation", "path"}, "input");
    if (in.contains("class")) c.input.cls = parse_input_class(in.at("class").get<std::string>());
    if (in.contains("kind")) c.input.reg = parse_reg_kind(in.at("kind").get<std::string>());
    read(in, "n", c.input.n);
    c.input.m = c.input.n;
    read(in, "m", c.input.m);
    read(in, "gen_rank", c.input.gen_rank);
    read(in, "normalize", c.input.normalize);
    read(in, "perturbation", c.input.perturbation);
    read(in, "path", c.input.path);
  }
  if (j.contains("algorithm")) c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  read(j, "family_h", c.family_h);
  read(j, "family_f", c.family_f);
  read(j, "r", c.r);
  read(j, "l", c.l_fixed);
  read(j, "p_min", c.p_min);
  read(j, "p_max", c.p_max);
  read(j, "c", c.c);
  read(j, "k", c.k_fixed);
  read(j, "trials", c.trials);
  read(j, "seed", c.seed);
  read(j, "eps", c.eps);
  read(j, "orthonormalize", c.orthonormalize);
  read(j, "h", c.h);
  read(j, "ca_sweeps", c.ca_sweeps);
  read(j, "ca_restarts", c.ca_restarts);
  read(j, "refine_k", c.refine_k);
  read(j, "threads", c.threads);
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json in = {{"class", to_string(c.input.cls)},
             {"m", c.input.m},
             {"n", c.input.n},
             {"gen_rank", c.input.gen_rank},
             {"normalize", c.input.normalize},
             {"perturbation", c.input.perturbation}};
  if (c.input.cls == InputClass::regtools) in["kind"] = to_string(c.input.reg);
  if (!c.input.path.empty()) in["path"] = c.input.path;
  return {{"input", in},
          {"algorithm", to_string(c.algorithm)},
          {"family_h", c.family_h},
          {"family_f", c.family_f},
          {"r", c.r},
          {"l", c.l_fixed},
          {"p_min", c.p_min},
          {"p_max", c.p_max},
          {"c", c.c},
          {"k", c.k_fixed},
          {"trials", c.trials},
          {"seed", c.seed},
          {"eps", c.eps},
          {"orthonormalize", c.orthonormalize},
          {"h", c.h},
          {"ca_sweeps", c.ca_sweeps},
          {"ca_restarts", c.ca_restarts},
          {"refine_k", c.refine_k},
          {"threads", c.threads}};
}

std::vector<ExperimentConfig> configs_from_document(const json& doc) {
  std::vector<ExperimentConfig> out;
  if (doc.is_object() && doc.contains("experiments")) {
    if (doc.size() != 1) throw std::invalid_argument("document: only 'experiments' allowed at top level");
    for (const auto& e : doc.at("experiments")) out.push_back(config_from_json(e));
  } else {
    out.push_back(config_from_json(doc));
  }
  return out;
}

std::vector<ExperimentConfig> load_configs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return configs_from_document(json::parse(in));
}

namespace {

struct Column {
  std::string label;
  InputSpec input;
  Index r = 0;
  bool available = true;
};

std::vector<Column> table_inputs(int group, Scale scale) {
  auto reg = [](RegKind kind, Index r) {
    Column c;
    c.label = to_string(kind) + " (r=" + std::to_string(r) + ")";
    c.input.cls = InputClass::regtools;
    c.input.reg = kind;
    c.input.n = c.input.m = 1000;
    c.r = r;
    return c;
  };
  switch (group) {
    case 1: {
      Column svd;
      svd.label = "SVD-generated";
      svd.input.cls = InputClass::class1;
      svd.input.n = svd.input.m = scale == Scale::paper ? 1024 : 256;
      svd.input.gen_rank = 32;
      svd.r = 32;
      Column lap;
      lap.label = "Laplacian";
      lap.input.cls = InputClass::laplacian;
      lap.input.n = lap.input.m = 400;
      lap.r = 36;
      Column fd;
      fd.label = "Finite Difference";
      fd.available = false;
      return {svd, lap, fd};
    }
    case 2: return {reg(RegKind::wing, 4), reg(RegKind::baart, 6)};
    default: return {reg(RegKind::foxgood, 10), reg(RegKind::shaw, 12), reg(RegKind::gravity, 25)};
  }
}

}  // namespace

TableCampaign table_campaign(int table, Scale scale, int trials, std::uint64_t seed) {
  if (table < 1 || table > 6) throw std::invalid_argument("table must be 1..6");
  TableCampaign camp;
  camp.table = table;
  const bool sketch_both = table >= 4;
  const int group = sketch_both ? table - 3 : table;
  camp.title = "Table " + std::to_string(table) + ": " +
               (sketch_both ? "row-and-column sketching, k = c l" : "Range Finder") + ", mean/std relative error";
  for (const Column& col : table_inputs(group, scale)) {
    for (int c = 1; c <= (sketch_both ? 3 : 1); ++c) {
      camp.column_labels.push_back(sketch_both ? col.label + (c == 1 ? " k=l" : " k=" + std::to_string(c) + "l")
                                               : col.label);
      std::vector<ExperimentConfig> families;
      if (col.available) {
        for (int f = 0; f <= 5; ++f) {
          ExperimentConfig e;
          e.input = col.input;
          e.algorithm = sketch_both ? Algorithm::alg33 : Algorithm::alg31;
          e.family_h = e.family_f = f;
          e.r = col.r;
          e.c = c;
          e.trials = trials;
          e.seed = seed;
          families.push_back(e);
        }
      }
      camp.columns.push_back(std::move(families));
    }
  }
  return camp;
}

}  // namespace lra::bench
