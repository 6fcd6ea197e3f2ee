#pragma once

#include <string>
#include <utility>
#include <vector>

#include "scorecard/model.hpp"
#include "scorecard/moments.hpp"

namespace scorecard {

/// Constraint rows over the weight vector S. Matrix columns are 0-based
/// (column t-1 holds weight index t).
///
///   Ac * S = 0      centering, no-inform and restriction rows, in that order
///   Ap * S <= 0     pattern rows
///   Ai * S = IW     in-weights
///   lb <= S <= ub
struct ConstraintSet {
  Matrix equality;      // Ac
  Matrix pattern;       // Ap
  Matrix inweight;      // Ai
  Vector inweight_values;  // IW
  Vector lower;
  Vector upper;
  std::vector<std::string> warnings;

  int dim() const { return static_cast<int>(lower.size()); }
  bool has_inweights() const { return inweight.rows() > 0; }
  bool has_bounds() const;
};

/// Row block plus any warnings raised while building it.
struct RowBlock {
  Matrix rows;
  std::vector<std::string> warnings;
};

RowBlock centering_rows(const Vector& centering_weights, const IndexMap& map);
Matrix noinform_rows(const IndexMap& map);
Matrix restriction_rows(int p, const std::vector<int>& fixes,
                        const std::vector<std::pair<int, int>>& equalities);
RowBlock pattern_rows(int p, const std::vector<PatternConstraint>& patterns);

struct InWeightRows {
  Matrix rows;
  Vector values;
};

/// Throws InputError on a duplicate index.
InWeightRows inweight_rows(int p, const std::vector<InWeight>& inweights);

/// Validates the spec against the map's dimension, then stacks every block.
ConstraintSet assemble(const EngineeringSpec& spec, const MomentSet& moments,
                       const IndexMap& map);

/// Same as above with explicit centering weights e.
ConstraintSet assemble(const EngineeringSpec& spec, const Vector& centering_weights,
                       const IndexMap& map);

/// Copy of cs with the in-weight block removed.
ConstraintSet without_inweights(const ConstraintSet& cs);

}  // namespace scorecard
