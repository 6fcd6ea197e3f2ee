#include "scorecard/constraints.hpp"

#include <limits>
#include <set>
#include <tuple>

#include "scorecard/errors.hpp"

namespace scorecard {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix vstack(const std::vector<const Matrix*>& blocks, int p) {
  Eigen::Index rows = 0;
  for (const auto* b : blocks) rows += b->rows();
  Matrix out(rows, p);
  Eigen::Index at = 0;
  for (const auto* b : blocks) {
    if (b->rows() == 0) continue;
    out.middleRows(at, b->rows()) = *b;
    at += b->rows();
  }
  return out;
}

}  // namespace

bool ConstraintSet::has_bounds() const {
  return lower.array().isFinite().any() || upper.array().isFinite().any();
}

RowBlock centering_rows(const Vector& centering_weights, const IndexMap& map) {
  const int p = map.num_attributes();
  if (centering_weights.size() != p) {
    throw InputError("centering weights have length " +
                     std::to_string(centering_weights.size()) + ", expected " +
                     std::to_string(p));
  }
  RowBlock out;
  out.rows = Matrix::Zero(map.num_characteristics(), p);
  for (int c = 0; c < map.num_characteristics(); ++c) {
    const int first = map.low[c] - 1;
    const int count = map.high[c] - map.low[c] + 1;
    out.rows.row(c).segment(first, count) = centering_weights.segment(first, count).transpose();
    if (centering_weights.segment(first, count).isZero(0.0)) {
      out.warnings.push_back("centering row for characteristic " + std::to_string(c + 1) +
                             " is vacuous (all-zero attribute weights)");
    }
  }
  return out;
}

Matrix noinform_rows(const IndexMap& map) {
  Matrix rows = Matrix::Zero(map.num_characteristics(), map.num_attributes());
  for (int c = 0; c < map.num_characteristics(); ++c) rows(c, map.high[c] - 1) = 1.0;
  return rows;
}

Matrix restriction_rows(int p, const std::vector<int>& fixes,
                        const std::vector<std::pair<int, int>>& equalities) {
  Matrix rows = Matrix::Zero(static_cast<Eigen::Index>(fixes.size() + equalities.size()), p);
  Eigen::Index r = 0;
  for (int t : fixes) rows(r++, t - 1) = 1.0;
  for (const auto& [i, j] : equalities) {
    rows(r, i - 1) = 1.0;
    rows(r, j - 1) = -1.0;
    ++r;
  }
  return rows;
}

RowBlock pattern_rows(int p, const std::vector<PatternConstraint>& patterns) {
  RowBlock out;
  out.rows = Matrix::Zero(static_cast<Eigen::Index>(patterns.size()), p);
  std::set<std::tuple<int, int, PatternSense>> seen;
  for (std::size_t r = 0; r < patterns.size(); ++r) {
    const auto& pat = patterns[r];
    if (pat.j == pat.k) throw InputError("pattern constraint requires j != k");
    // S_j <= S_k  ->  +S_j - S_k <= 0 ;  S_j >= S_k  ->  -S_j + S_k <= 0
    const double a = pat.sense == PatternSense::kLessEqual ? 1.0 : -1.0;
    out.rows(static_cast<Eigen::Index>(r), pat.j - 1) = a;
    out.rows(static_cast<Eigen::Index>(r), pat.k - 1) = -a;
    if (!seen.emplace(pat.j, pat.k, pat.sense).second) {
      out.warnings.push_back("duplicate pattern constraint (" + std::to_string(pat.j) + ", " +
                             std::to_string(pat.k) + ") kept as a redundant row");
    }
  }
  return out;
}

InWeightRows inweight_rows(int p, const std::vector<InWeight>& inweights) {
  InWeightRows out;
  out.rows = Matrix::Zero(static_cast<Eigen::Index>(inweights.size()), p);
  out.values.resize(static_cast<Eigen::Index>(inweights.size()));
  std::set<int> seen;
  for (std::size_t r = 0; r < inweights.size(); ++r) {
    const auto& iw = inweights[r];
    if (!seen.insert(iw.index).second) {
      throw InputError("duplicate in-weight index " + std::to_string(iw.index));
    }
    out.rows(static_cast<Eigen::Index>(r), iw.index - 1) = 1.0;
    out.values(static_cast<Eigen::Index>(r)) = iw.value;
  }
  return out;
}

ConstraintSet assemble(const EngineeringSpec& spec, const MomentSet& moments,
                       const IndexMap& map) {
  return assemble(spec, moments.centering, map);
}

ConstraintSet assemble(const EngineeringSpec& spec, const Vector& centering_weights,
                       const IndexMap& map) {
  const int p = map.num_attributes();
  std::vector<Characteristic> chars;
  for (int c = 0; c < map.num_characteristics(); ++c) {
    chars.push_back({"", std::vector<std::string>(map.high[c] - map.low[c] + 1)});
  }
  require_valid(spec, ScorecardLayout(std::move(chars)));

  ConstraintSet cs;
  const Matrix empty(0, p);
  RowBlock centering{empty, {}};
  if (spec.centering) centering = centering_rows(centering_weights, map);
  const Matrix noinform = spec.noinform ? noinform_rows(map) : empty;
  const Matrix restrictions = restriction_rows(p, spec.fixes, spec.equalities);
  cs.equality = vstack({&centering.rows, &noinform, &restrictions}, p);

  auto patterns = pattern_rows(p, spec.patterns);
  cs.pattern = std::move(patterns.rows);

  auto iw = inweight_rows(p, spec.inweights);
  cs.inweight = std::move(iw.rows);
  cs.inweight_values = std::move(iw.values);

  cs.lower = Vector::Constant(p, -kInf);
  cs.upper = Vector::Constant(p, kInf);
  for (const auto& b : spec.bounds) {
    if (b.lower) cs.lower(b.index - 1) = *b.lower;
    if (b.upper) cs.upper(b.index - 1) = *b.upper;
  }

  cs.warnings = std::move(centering.warnings);
  cs.warnings.insert(cs.warnings.end(), patterns.warnings.begin(), patterns.warnings.end());
  return cs;
}

ConstraintSet without_inweights(const ConstraintSet& cs) {
  ConstraintSet out = cs;
  out.inweight.resize(0, cs.dim());
  out.inweight_values.resize(0);
  return out;
}

}  // namespace scorecard
