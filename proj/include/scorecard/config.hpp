#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scorecard/io.hpp"
#include "scorecard/model.hpp"
#include "scorecard/problems.hpp"

namespace scorecard {

inline constexpr int kConfigSchemaVersion = 1;

struct SparseEntry {
  int index = 0;  // 1-based
  double value = 0.0;
};

/// Everything a run needs besides the data. See README for the file format.
struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  ScorecardLayout layout;
  EngineeringSpec spec;

  std::optional<ProblemKind> problem;
  double delta = 1.0;
  std::optional<double> lambda;
  std::vector<double> lambda_grid;
  std::optional<double> div_floor;
  // Floor as a fraction of the in-weighted solution's divergence.
  std::optional<double> div_floor_ratio;
  std::pair<double, double> phi_bracket{0.01, 4.0};
  std::vector<SparseEntry> range_emphasis;
  std::vector<SparseEntry> range_targets;

  SplitRule split;
  SyntheticOptions synthetic;
  std::optional<std::string> data_path;
  std::optional<std::string> out_path;

  RangeTargets range() const;
};

/// Parses JSON text; throws InputError naming the offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace scorecard
