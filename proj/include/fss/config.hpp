#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fss/corpus.hpp"
#include "fss/credit.hpp"
#include "fss/indicators.hpp"

namespace fss {

struct RunConfig {
  ObservationWindow window;  // 2006-2010
  std::string citation_cutoff = "2011-12-31";
  ExclusionThresholds exclusions;  // 3 years, 10 staff per UDA, 30 staff overall
  PositionWeights byline_weights;
  std::map<std::string, PositionWeights> byline_weights_per_sds;
  std::string baselines = "computed";  // or a path to baselines.csv
  Scope scope = Scope::university;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  std::map<std::string, std::string> regions;

  void validate() const;
};

struct LoadedConfig {
  RunConfig config;
  std::vector<std::string> defaults_used;  // top-level keys filled from defaults
};

// Parses a JSON configuration; absent keys keep their defaults. Unknown keys
// are rejected.
LoadedConfig parse_config(const nlohmann::json& doc);
LoadedConfig load_config(const std::filesystem::path& path);

// Canonical JSON form (every key present, sorted).
nlohmann::json to_json(const RunConfig& config);

nlohmann::json to_json(const PositionWeights& weights);

}  // namespace fss
