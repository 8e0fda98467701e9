#pragma once

// JSON experiment configuration and the table campaigns.

#include <string>
#include <vector>

#include "json.hpp"
#include "lra/bench/experiment.hpp"

namespace lra::bench {

enum class Scale { desk, paper };
Scale parse_scale(const std::string& s);

/// Reads one experiment. Missing keys keep their defaults; unknown keys are
/// rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

/// A document is either one experiment object or {"experiments": [...]}.
std::vector<ExperimentConfig> configs_from_document(const nlohmann::json& doc);
std::vector<ExperimentConfig> load_configs(const std::string& path);

struct TableCampaign {
  int table = 0;
  std::string title;
  std::vector<std::string> column_labels;
  std::vector<std::vector<ExperimentConfig>> columns;  // columns[c][family]; empty columns print "---"
};

/// Tables 1-3 run the Range Finder and Tables 4-6 row-and-column sketching
/// with k = l, 2l, 3l, each over families 0..5. Desk scale uses 256 x 256
/// SVD-generated inputs, paper scale 1024 x 1024.
TableCampaign table_campaign(int table, Scale scale, int trials, std::uint64_t seed);

}  // namespace lra::bench
