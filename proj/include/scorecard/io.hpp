#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scorecard/model.hpp"
#include "scorecard/moments.hpp"
#include "scorecard/problems.hpp"

namespace scorecard {

/// Indicator data: one row per observation, one-hot within every
/// characteristic block. outcome is 1 for Good, 0 for Bad.
struct Dataset {
  Matrix rows;
  std::vector<int> outcome;
  std::vector<std::int64_t> split_key;
  std::optional<Vector> weights;

  Eigen::Index size() const { return rows.rows(); }
  bool operator==(const Dataset& other) const;
};

/// Rows whose split key is listed go to validation, the rest to development.
struct SplitRule {
  std::set<std::int64_t> validation_keys;
};

struct ClassSample {
  Matrix rows;
  std::optional<Vector> weights;
};

struct SampleSplit {
  ClassSample dev_goods;
  ClassSample dev_bads;
  ClassSample val_goods;
  ClassSample val_bads;

  bool has_validation() const;
  /// All development rows (goods then bads) and matching 0/1 outcomes.
  std::pair<Matrix, Vector> development_rows() const;
};

/// Column names v<c>_<a>: attributes 1..A-1 then the no-inform slot 0.
std::vector<std::string> indicator_columns(const ScorecardLayout& layout);

/// Header: split_key,outcome[,weight],<indicator columns>.
void write_dataset(const std::filesystem::path& path, const Dataset& data,
                   const ScorecardLayout& layout);

/// Parses and validates a dataset file; errors carry the line number.
Dataset read_dataset(const std::filesystem::path& path, const ScorecardLayout& layout);

SampleSplit split_dataset(const Dataset& data, const SplitRule& rule);

/// read_dataset + split_dataset; the development sample must contain both classes.
SampleSplit load_dataset(const std::filesystem::path& path, const ScorecardLayout& layout,
                         const SplitRule& rule);

MomentSet moments_of(const ClassSample& goods, const ClassSample& bads);

struct SyntheticOptions {
  std::uint64_t seed = 1;
  int n_good = 1000;
  int n_bad = 1000;
  double separation = 1.0;
  int num_split_keys = 10;  // keys drawn uniformly from 0..num_split_keys-1
};

/// Deterministic for a given seed. Attribute probabilities for the two
/// classes are tilted apart in proportion to separation.
Dataset generate_synthetic(const ScorecardLayout& layout, const SyntheticOptions& options);

struct ReportColumn {
  std::string name;
  const ScorecardSolution* solution;
};

/// Text for the Constraint column of each attribute, derived from the spec.
std::vector<std::string> constraint_annotations(const ScorecardLayout& layout,
                                                const EngineeringSpec& spec);

/// CSV scorecard table: one row per attribute, weights to 3 decimals, then
/// the divergence footer rows. No columns gives a header-only file.
void write_report(const std::filesystem::path& path, const ScorecardLayout& layout,
                  const EngineeringSpec& spec, const std::vector<ReportColumn>& columns);

struct ParsedReport {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<double>> weights;  // per solution column, per attribute
};

ParsedReport read_report(const std::filesystem::path& path);

/// Full-precision metadata block plus one "index weight" line per attribute.
void write_solution(const std::filesystem::path& path, const ScorecardSolution& sol);
ScorecardSolution read_solution(const std::filesystem::path& path);

}  // namespace scorecard
