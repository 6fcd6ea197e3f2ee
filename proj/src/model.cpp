#include "scorecard/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "scorecard/errors.hpp"

namespace scorecard {

ScorecardLayout::ScorecardLayout(std::vector<Characteristic> characteristics)
    : chars_(std::move(characteristics)) {
  for (const auto& c : chars_) {
    if (c.attribute_labels.empty()) {
      throw InputError("characteristic '" + c.name + "' has no attributes");
    }
    p_ += static_cast<int>(c.attribute_labels.size());
  }
}

ScorecardLayout ScorecardLayout::from_counts(const std::vector<int>& counts,
                                             const std::vector<std::string>& names) {
  if (!names.empty() && names.size() != counts.size()) {
    throw InputError("characteristic names and attribute counts differ in length");
  }
  std::vector<Characteristic> chars;
  chars.reserve(counts.size());
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] < 1) {
      throw InputError("characteristic " + std::to_string(c + 1) +
                       " must have at least one attribute");
    }
    Characteristic ch;
    ch.name = names.empty() ? "char" + std::to_string(c + 1) : names[c];
    const std::string stem = "v" + std::to_string(c + 1) + "_";
    for (int a = 1; a < counts[c]; ++a) ch.attribute_labels.push_back(stem + std::to_string(a));
    ch.attribute_labels.push_back(stem + "0");
    chars.push_back(std::move(ch));
  }
  return ScorecardLayout(std::move(chars));
}

int IndexMap::owner(int t) const {
  auto it = std::lower_bound(high.begin(), high.end(), t);
  if (t < 1 || it == high.end()) return -1;
  return static_cast<int>(it - high.begin());
}

IndexMap build_index_map(const ScorecardLayout& layout) {
  IndexMap map;
  int next = 1;
  for (const auto& c : layout.characteristics()) {
    map.low.push_back(next);
    next += static_cast<int>(c.attribute_labels.size());
    map.high.push_back(next - 1);
  }
  return map;
}

std::vector<SpecViolation> validate_spec(const EngineeringSpec& spec,
                                         const ScorecardLayout& layout) {
  const int p = layout.num_attributes();
  std::vector<SpecViolation> out;
  auto check_index = [&](int t, const std::string& where) {
    if (t < 1 || t > p) {
      out.push_back({where + ": index out of range [1, " + std::to_string(p) + "]", t});
      return false;
    }
    return true;
  };

  for (int t : spec.fixes) check_index(t, "fix");
  for (const auto& [i, j] : spec.equalities) {
    check_index(i, "equality");
    check_index(j, "equality");
    if (i == j) out.push_back({"equality: i != j required", i});
  }
  for (const auto& pat : spec.patterns) {
    check_index(pat.j, "pattern");
    check_index(pat.k, "pattern");
    if (pat.j == pat.k) out.push_back({"pattern: j != k required", pat.j});
  }

  std::set<int> fixed(spec.fixes.begin(), spec.fixes.end());
  std::set<int> seen;
  for (const auto& iw : spec.inweights) {
    check_index(iw.index, "inweight");
    if (!seen.insert(iw.index).second) {
      out.push_back({"inweight: duplicate index", iw.index});
    }
    if (fixed.count(iw.index) != 0) {
      out.push_back({"inweight: index also listed as a fix", iw.index});
    }
  }
  for (const auto& b : spec.bounds) {
    check_index(b.index, "bound");
    if (b.lower && b.upper && *b.lower > *b.upper) {
      out.push_back({"bound: lower exceeds upper", b.index});
    }
  }
  return out;
}

void require_valid(const EngineeringSpec& spec, const ScorecardLayout& layout) {
  const auto violations = validate_spec(spec, layout);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid engineering spec:";
  for (const auto& v : violations) {
    msg << "\n  " << v.what;
    if (v.index != 0) msg << " (index " << v.index << ")";
  }
  throw InputError(msg.str());
}

}  // namespace scorecard
