#pragma once

#include <optional>
#include <string>
#include <vector>

namespace scorecard {

// All weight indices exposed by this header are 1-based, matching the
// attribute numbering used in scorecard reports.

struct Characteristic {
  std::string name;
  // The last label is the NO INFORMATION attribute.
  std::vector<std::string> attribute_labels;
};

class ScorecardLayout {
 public:
  ScorecardLayout() = default;

  /// Throws InputError if any characteristic has no attributes.
  explicit ScorecardLayout(std::vector<Characteristic> characteristics);

  /// Builds a layout with labels v<c>_1 .. v<c>_{n-1}, v<c>_0 per block.
  static ScorecardLayout from_counts(const std::vector<int>& counts,
                                     const std::vector<std::string>& names = {});

  const std::vector<Characteristic>& characteristics() const { return chars_; }
  int num_characteristics() const { return static_cast<int>(chars_.size()); }
  int num_attributes() const { return p_; }

  bool operator==(const ScorecardLayout&) const = default;

 private:
  std::vector<Characteristic> chars_;
  int p_ = 0;
};

struct IndexMap {
  std::vector<int> low;   // first weight index of each characteristic
  std::vector<int> high;  // last weight index (the no-inform slot)

  int num_characteristics() const { return static_cast<int>(high.size()); }
  int num_attributes() const { return high.empty() ? 0 : high.back(); }
  /// Characteristic (0-based) owning weight index t; -1 when out of range.
  int owner(int t) const;
};

IndexMap build_index_map(const ScorecardLayout& layout);

enum class PatternSense {
  kLessEqual,     // S_j <= S_k
  kGreaterEqual,  // S_j >= S_k
};

struct PatternConstraint {
  int j = 0;
  int k = 0;
  PatternSense sense = PatternSense::kLessEqual;

  bool operator==(const PatternConstraint&) const = default;
};

struct InWeight {
  int index = 0;
  double value = 0.0;

  bool operator==(const InWeight&) const = default;
};

struct WeightBound {
  int index = 0;
  std::optional<double> lower;
  std::optional<double> upper;

  bool operator==(const WeightBound&) const = default;
};

struct EngineeringSpec {
  bool centering = false;
  bool noinform = false;
  std::vector<int> fixes;
  std::vector<std::pair<int, int>> equalities;
  std::vector<PatternConstraint> patterns;
  std::vector<InWeight> inweights;
  std::vector<WeightBound> bounds;

  bool operator==(const EngineeringSpec&) const = default;
};

struct SpecViolation {
  std::string what;
  int index = 0;  // offending 1-based index, 0 when not index-specific
};

/// Every violated invariant; empty means the spec is usable with the layout.
std::vector<SpecViolation> validate_spec(const EngineeringSpec& spec,
                                         const ScorecardLayout& layout);

/// Throws InputError summarising the violations, if any.
void require_valid(const EngineeringSpec& spec, const ScorecardLayout& layout);

}  // namespace scorecard
