#include "scorecard/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scorecard/errors.hpp"

namespace scorecard {
namespace {

using nlohmann::json;

template <typename T>
T get(const json& node, const char* key, const std::string& where) {
  try {
    return node.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError("config: " + where + "." + key + ": " + e.what());
  }
}

template <typename T>
std::optional<T> get_opt(const json& node, const char* key, const std::string& where) {
  if (!node.contains(key) || node.at(key).is_null()) return std::nullopt;
  return get<T>(node, key, where);
}

ScorecardLayout parse_layout(const json& node) {
  if (!node.contains("characteristics") || !node.at("characteristics").is_array()) {
    throw InputError("config: layout.characteristics must be an array");
  }
  std::vector<Characteristic> chars;
  int c = 1;
  for (const auto& item : node.at("characteristics")) {
    const std::string where = "layout.characteristics[" + std::to_string(c - 1) + "]";
    Characteristic ch;
    ch.name = get_opt<std::string>(item, "name", where).value_or("char" + std::to_string(c));
    if (item.contains("attributes")) {
      ch.attribute_labels = get<std::vector<std::string>>(item, "attributes", where);
    } else {
      const int count = get<int>(item, "attribute_count", where);
      if (count < 1) throw InputError("config: " + where + ".attribute_count must be >= 1");
      const std::string stem = "v" + std::to_string(c) + "_";
      for (int a = 1; a < count; ++a) ch.attribute_labels.push_back(stem + std::to_string(a));
      ch.attribute_labels.push_back(stem + "0");
    }
    chars.push_back(std::move(ch));
    ++c;
  }
  return ScorecardLayout(std::move(chars));
}

PatternSense parse_sense(const std::string& s, const std::string& where) {
  if (s == "le" || s == "<=") return PatternSense::kLessEqual;
  if (s == "ge" || s == ">=") return PatternSense::kGreaterEqual;
  throw InputError("config: " + where + ".sense must be \"le\" or \"ge\" (got \"" + s + "\")");
}

EngineeringSpec parse_spec(const json& node) {
  const std::string where = "engineering";
  EngineeringSpec spec;
  spec.centering = get_opt<bool>(node, "centering", where).value_or(false);
  spec.noinform = get_opt<bool>(node, "noinform", where).value_or(false);
  spec.fixes = get_opt<std::vector<int>>(node, "fixes", where).value_or(std::vector<int>{});
  if (node.contains("equalities")) {
    for (const auto& pair : node.at("equalities")) {
      if (!pair.is_array() || pair.size() != 2) {
        throw InputError("config: engineering.equalities entries must be [i, j] pairs");
      }
      spec.equalities.emplace_back(pair[0].get<int>(), pair[1].get<int>());
    }
  }
  if (node.contains("patterns")) {
    int r = 0;
    for (const auto& item : node.at("patterns")) {
      const std::string w = "engineering.patterns[" + std::to_string(r++) + "]";
      spec.patterns.push_back({get<int>(item, "j", w), get<int>(item, "k", w),
                               parse_sense(get<std::string>(item, "sense", w), w)});
    }
  }
  if (node.contains("inweights")) {
    int r = 0;
    for (const auto& item : node.at("inweights")) {
      const std::string w = "engineering.inweights[" + std::to_string(r++) + "]";
      spec.inweights.push_back({get<int>(item, "index", w), get<double>(item, "value", w)});
    }
  }
  if (node.contains("bounds")) {
    int r = 0;
    for (const auto& item : node.at("bounds")) {
      const std::string w = "engineering.bounds[" + std::to_string(r++) + "]";
      spec.bounds.push_back({get<int>(item, "index", w), get_opt<double>(item, "lower", w),
                             get_opt<double>(item, "upper", w)});
    }
  }
  return spec;
}

std::vector<SparseEntry> parse_sparse(const json& node, const char* key,
                                      const std::string& where) {
  std::vector<SparseEntry> out;
  if (!node.contains(key)) return out;
  int r = 0;
  for (const auto& item : node.at(key)) {
    const std::string w = where + "." + key + "[" + std::to_string(r++) + "]";
    out.push_back({get<int>(item, "index", w), get<double>(item, "value", w)});
  }
  return out;
}

}  // namespace

RangeTargets RunConfig::range() const {
  const int p = layout.num_attributes();
  RangeTargets t{Vector::Zero(p), Vector::Zero(p)};
  for (const auto& e : range_emphasis) {
    if (e.index < 1 || e.index > p) {
      throw InputError("config: range emphasis index " + std::to_string(e.index) +
                       " out of range");
    }
    t.emphasis(e.index - 1) = e.value;
  }
  for (const auto& e : range_targets) {
    if (e.index < 1 || e.index > p) {
      throw InputError("config: range target index " + std::to_string(e.index) + " out of range");
    }
    t.targets(e.index - 1) = e.value;
  }
  return t;
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  cfg.schema_version = get<int>(root, "schema_version", "");
  if (cfg.schema_version != kConfigSchemaVersion) {
    throw InputError("config: unsupported schema_version " + std::to_string(cfg.schema_version));
  }
  if (!root.contains("layout")) throw InputError("config: missing layout");
  cfg.layout = parse_layout(root.at("layout"));
  if (root.contains("engineering")) cfg.spec = parse_spec(root.at("engineering"));

  if (root.contains("problem")) {
    const auto& pr = root.at("problem");
    const std::string w = "problem";
    if (auto type = get_opt<std::string>(pr, "type", w)) cfg.problem = parse_problem_kind(*type);
    cfg.delta = get_opt<double>(pr, "delta", w).value_or(1.0);
    cfg.lambda = get_opt<double>(pr, "lambda", w);
    cfg.lambda_grid = get_opt<std::vector<double>>(pr, "lambda_grid", w).value_or(std::vector<double>{});
    cfg.div_floor = get_opt<double>(pr, "div_floor", w);
    cfg.div_floor_ratio = get_opt<double>(pr, "div_floor_ratio", w);
    if (auto br = get_opt<std::vector<double>>(pr, "phi_bracket", w)) {
      if (br->size() != 2) throw InputError("config: problem.phi_bracket must have 2 entries");
      cfg.phi_bracket = {(*br)[0], (*br)[1]};
    }
    if (pr.contains("range")) {
      cfg.range_emphasis = parse_sparse(pr.at("range"), "emphasis", "problem.range");
      cfg.range_targets = parse_sparse(pr.at("range"), "targets", "problem.range");
    }
  }
  if (root.contains("split")) {
    for (auto k : get<std::vector<std::int64_t>>(root.at("split"), "validation_keys", "split")) {
      cfg.split.validation_keys.insert(k);
    }
  }
  if (root.contains("synthetic")) {
    const auto& s = root.at("synthetic");
    const std::string w = "synthetic";
    cfg.synthetic.seed = get_opt<std::uint64_t>(s, "seed", w).value_or(cfg.synthetic.seed);
    cfg.synthetic.n_good = get_opt<int>(s, "n_good", w).value_or(cfg.synthetic.n_good);
    cfg.synthetic.n_bad = get_opt<int>(s, "n_bad", w).value_or(cfg.synthetic.n_bad);
    cfg.synthetic.separation =
        get_opt<double>(s, "separation", w).value_or(cfg.synthetic.separation);
    cfg.synthetic.num_split_keys =
        get_opt<int>(s, "num_split_keys", w).value_or(cfg.synthetic.num_split_keys);
  }
  if (root.contains("paths")) {
    cfg.data_path = get_opt<std::string>(root.at("paths"), "data", "paths");
    cfg.out_path = get_opt<std::string>(root.at("paths"), "out", "paths");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace scorecard
