#include "scorecard/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "scorecard/errors.hpp"

namespace scorecard {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  if (first == last) return false;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string three_decimals(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return in;
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int draw(const std::vector<double>& cdf, std::mt19937_64& rng) {
  const double u = uniform01(rng) * cdf.back();
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    if (u < cdf[i]) return static_cast<int>(i);
  }
  return static_cast<int>(cdf.size()) - 1;
}

ClassSample take_rows(const Dataset& data, const std::vector<Eigen::Index>& idx) {
  ClassSample s;
  s.rows.resize(static_cast<Eigen::Index>(idx.size()), data.rows.cols());
  if (data.weights) s.weights = Vector(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    s.rows.row(static_cast<Eigen::Index>(r)) = data.rows.row(idx[r]);
    if (data.weights) (*s.weights)(static_cast<Eigen::Index>(r)) = (*data.weights)(idx[r]);
  }
  return s;
}

}  // namespace

bool Dataset::operator==(const Dataset& other) const {
  if (rows.rows() != other.rows.rows() || rows.cols() != other.rows.cols()) return false;
  if (rows != other.rows || outcome != other.outcome || split_key != other.split_key) {
    return false;
  }
  if (weights.has_value() != other.weights.has_value()) return false;
  return !weights || *weights == *other.weights;
}

bool SampleSplit::has_validation() const {
  return val_goods.rows.rows() > 0 || val_bads.rows.rows() > 0;
}

std::pair<Matrix, Vector> SampleSplit::development_rows() const {
  const Eigen::Index ng = dev_goods.rows.rows();
  const Eigen::Index nb = dev_bads.rows.rows();
  Matrix rows(ng + nb, dev_goods.rows.cols());
  if (ng) rows.topRows(ng) = dev_goods.rows;
  if (nb) rows.bottomRows(nb) = dev_bads.rows;
  Vector y(ng + nb);
  y.head(ng).setOnes();
  y.tail(nb).setZero();
  return {rows, y};
}

std::vector<std::string> indicator_columns(const ScorecardLayout& layout) {
  std::vector<std::string> cols;
  int c = 1;
  for (const auto& ch : layout.characteristics()) {
    const int count = static_cast<int>(ch.attribute_labels.size());
    const std::string stem = "v" + std::to_string(c) + "_";
    for (int a = 1; a < count; ++a) cols.push_back(stem + std::to_string(a));
    cols.push_back(stem + "0");
    ++c;
  }
  return cols;
}

void write_dataset(const std::filesystem::path& path, const Dataset& data,
                   const ScorecardLayout& layout) {
  if (data.rows.cols() != layout.num_attributes()) {
    throw InputError("dataset width does not match the layout");
  }
  auto out = open_out(path);
  out << "split_key,outcome";
  if (data.weights) out << ",weight";
  for (const auto& col : indicator_columns(layout)) out << ',' << col;
  out << '\n';
  for (Eigen::Index r = 0; r < data.size(); ++r) {
    out << data.split_key[static_cast<std::size_t>(r)] << ','
        << data.outcome[static_cast<std::size_t>(r)];
    if (data.weights) out << ',' << full_precision((*data.weights)(r));
    for (Eigen::Index c = 0; c < data.rows.cols(); ++c) {
      out << ',' << full_precision(data.rows(r, c));
    }
    out << '\n';
  }
}

Dataset read_dataset(const std::filesystem::path& path, const ScorecardLayout& layout) {
  auto in = open_in(path);
  const auto expected = indicator_columns(layout);
  const IndexMap map = build_index_map(layout);
  const int p = layout.num_attributes();

  std::string line;
  if (!std::getline(in, line)) throw InputError(path.string() + ": empty file");
  const auto header = split_csv(line);
  bool weighted = header.size() > 2 && header[2] == "weight";
  const std::size_t first = weighted ? 3 : 2;
  if (header.size() < 2 || header[0] != "split_key" || header[1] != "outcome") {
    throw InputError(path.string() + ":1: header must start with split_key,outcome");
  }
  if (header.size() != first + expected.size() ||
      !std::equal(expected.begin(), expected.end(), header.begin() + static_cast<long>(first))) {
    throw InputError(path.string() + ":1: indicator columns do not match the layout (expected " +
                     std::to_string(expected.size()) + " columns v1_1 .. " + expected.back() +
                     ")");
  }

  std::vector<std::vector<double>> rows;
  Dataset data;
  std::vector<double> weights;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
    if (fields.size() != header.size()) {
      throw InputError(where + "expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    std::int64_t key = 0;
    int outcome = 0;
    if (!parse_number(fields[0], key)) throw InputError(where + "split_key is not an integer");
    if (!parse_number(fields[1], outcome) || (outcome != 0 && outcome != 1)) {
      throw InputError(where + "outcome must be 0 or 1");
    }
    if (weighted) {
      double w = 0.0;
      if (!parse_number(fields[2], w) || !(w >= 0.0)) {
        throw InputError(where + "weight must be a nonnegative number");
      }
      weights.push_back(w);
    }
    std::vector<double> row(static_cast<std::size_t>(p));
    for (int t = 0; t < p; ++t) {
      if (!parse_number(fields[first + static_cast<std::size_t>(t)], row[static_cast<std::size_t>(t)])) {
        throw InputError(where + "column " + expected[static_cast<std::size_t>(t)] +
                         " is not a number");
      }
    }
    for (int c = 0; c < map.num_characteristics(); ++c) {
      int ones = 0;
      bool binary = true;
      for (int t = map.low[c]; t <= map.high[c]; ++t) {
        const double v = row[static_cast<std::size_t>(t - 1)];
        if (v == 1.0) ++ones;
        else if (v != 0.0) binary = false;
      }
      if (!binary || ones != 1) {
        throw InputError(where + "characteristic " + std::to_string(c + 1) + " (" +
                         layout.characteristics()[static_cast<std::size_t>(c)].name +
                         ") is not one-hot");
      }
    }
    data.split_key.push_back(key);
    data.outcome.push_back(outcome);
    rows.push_back(std::move(row));
  }

  data.rows.resize(static_cast<Eigen::Index>(rows.size()), p);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    data.rows.row(static_cast<Eigen::Index>(r)) =
        Eigen::Map<const Eigen::RowVectorXd>(rows[r].data(), p);
  }
  if (weighted) data.weights = Eigen::Map<const Vector>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  return data;
}

SampleSplit split_dataset(const Dataset& data, const SplitRule& rule) {
  std::vector<Eigen::Index> dg, db, vg, vb;
  for (Eigen::Index r = 0; r < data.size(); ++r) {
    const bool val = rule.validation_keys.count(data.split_key[static_cast<std::size_t>(r)]) != 0;
    const bool good = data.outcome[static_cast<std::size_t>(r)] == 1;
    (val ? (good ? vg : vb) : (good ? dg : db)).push_back(r);
  }
  return {take_rows(data, dg), take_rows(data, db), take_rows(data, vg), take_rows(data, vb)};
}

SampleSplit load_dataset(const std::filesystem::path& path, const ScorecardLayout& layout,
                         const SplitRule& rule) {
  SampleSplit split = split_dataset(read_dataset(path, layout), rule);
  if (split.dev_goods.rows.rows() == 0 || split.dev_bads.rows.rows() == 0) {
    throw InputError(path.string() + ": development sample lacks " +
                     (split.dev_goods.rows.rows() == 0 ? "goods" : "bads"));
  }
  return split;
}

MomentSet moments_of(const ClassSample& goods, const ClassSample& bads) {
  return compute_moments(goods.rows, bads.rows, goods.weights, bads.weights);
}

Dataset generate_synthetic(const ScorecardLayout& layout, const SyntheticOptions& options) {
  if (options.n_good < 2 || options.n_bad < 2) {
    throw InputError("synthetic data needs at least 2 goods and 2 bads");
  }
  if (options.num_split_keys < 1) throw InputError("num_split_keys must be positive");
  std::mt19937_64 rng(options.seed);
  const IndexMap map = build_index_map(layout);
  const int p = layout.num_attributes();

  // Per characteristic cumulative selection weights for each class.
  std::vector<std::vector<double>> cdf_good, cdf_bad;
  for (int c = 0; c < map.num_characteristics(); ++c) {
    const int count = map.high[c] - map.low[c] + 1;
    std::vector<double> g(static_cast<std::size_t>(count)), b(static_cast<std::size_t>(count));
    double acc_g = 0.0, acc_b = 0.0;
    for (int a = 0; a < count; ++a) {
      const bool noinform = a == count - 1 && count > 1;
      const double base = noinform ? 0.05 : 0.5 + uniform01(rng);
      const double effect = noinform ? 0.0 : standard_normal(rng);
      acc_g += base * std::exp(0.5 * options.separation * effect);
      acc_b += base * std::exp(-0.5 * options.separation * effect);
      g[static_cast<std::size_t>(a)] = acc_g;
      b[static_cast<std::size_t>(a)] = acc_b;
    }
    cdf_good.push_back(std::move(g));
    cdf_bad.push_back(std::move(b));
  }

  Dataset data;
  const int n = options.n_good + options.n_bad;
  data.rows = Matrix::Zero(n, p);
  for (int r = 0; r < n; ++r) {
    const bool good = r < options.n_good;
    const auto& cdf = good ? cdf_good : cdf_bad;
    for (int c = 0; c < map.num_characteristics(); ++c) {
      const int a = draw(cdf[static_cast<std::size_t>(c)], rng);
      data.rows(r, map.low[c] - 1 + a) = 1.0;
    }
    data.outcome.push_back(good ? 1 : 0);
    data.split_key.push_back(static_cast<std::int64_t>(
        std::min(options.num_split_keys - 1,
                 static_cast<int>(uniform01(rng) * options.num_split_keys))));
  }
  return data;
}

std::vector<std::string> constraint_annotations(const ScorecardLayout& layout,
                                                const EngineeringSpec& spec) {
  const IndexMap map = build_index_map(layout);
  const int p = layout.num_attributes();
  std::vector<std::vector<std::string>> parts(static_cast<std::size_t>(p + 1));
  auto add = [&](int t, const std::string& s) {
    if (t >= 1 && t <= p) parts[static_cast<std::size_t>(t)].push_back(s);
  };
  if (spec.noinform) {
    for (int h : map.high) add(h, "= 0");
  }
  for (int t : spec.fixes) add(t, "= 0");
  for (const auto& [i, j] : spec.equalities) add(i, "= " + std::to_string(j));
  for (const auto& pat : spec.patterns) {
    add(pat.j, (pat.sense == PatternSense::kGreaterEqual ? "> " : "< ") + std::to_string(pat.k));
  }
  for (const auto& iw : spec.inweights) add(iw.index, "= " + three_decimals(iw.value));

  std::vector<std::string> out(static_cast<std::size_t>(p));
  for (int t = 1; t <= p; ++t) {
    auto& v = parts[static_cast<std::size_t>(t)];
    // "= 0" from both a fix and the no-inform rule reads once.
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::string joined;
    for (const auto& s : v) joined += (joined.empty() ? "" : " & ") + s;
    out[static_cast<std::size_t>(t - 1)] = joined;
  }
  return out;
}

void write_report(const std::filesystem::path& path, const ScorecardLayout& layout,
                  const EngineeringSpec& spec, const std::vector<ReportColumn>& columns) {
  for (const auto& col : columns) {
    if (!col.solution || col.solution->weights.size() != layout.num_attributes()) {
      throw InputError("report column '" + col.name + "' does not match the layout");
    }
  }
  auto out = open_out(path);
  out << "Char,Attribute,Att. #,Constraint";
  for (const auto& col : columns) out << ',' << csv_field(col.name);
  out << '\n';
  if (columns.empty()) return;

  const auto notes = constraint_annotations(layout, spec);
  int t = 0;
  for (const auto& ch : layout.characteristics()) {
    for (const auto& label : ch.attribute_labels) {
      out << csv_field(ch.name) << ',' << csv_field(label) << ',' << (t + 1) << ','
          << csv_field(notes[static_cast<std::size_t>(t)]);
      for (const auto& col : columns) out << ',' << three_decimals(col.solution->weights(t));
      out << '\n';
      ++t;
    }
  }
  const bool any_intercept =
      std::any_of(columns.begin(), columns.end(),
                  [](const ReportColumn& c) { return c.solution->intercept.has_value(); });
  if (any_intercept) {
    out << "Intercept,,,";
    for (const auto& col : columns) {
      out << ',' << (col.solution->intercept ? three_decimals(*col.solution->intercept) : "");
    }
    out << '\n';
  }
  out << "Development Divergence,,,";
  for (const auto& col : columns) out << ',' << three_decimals(col.solution->div_dev);
  out << '\n';
  out << "Validation Divergence,,,";
  for (const auto& col : columns) {
    out << ',' << (col.solution->div_val ? three_decimals(*col.solution->div_val) : "");
  }
  out << '\n';
}

ParsedReport read_report(const std::filesystem::path& path) {
  auto in = open_in(path);
  ParsedReport rep;
  std::string line;
  if (!std::getline(in, line)) throw InputError(path.string() + ": empty report");
  rep.header = split_csv(line);
  if (rep.header.size() < 4) throw InputError(path.string() + ": malformed report header");
  const std::size_t ncol = rep.header.size() - 4;
  rep.weights.resize(ncol);
  while (std::getline(in, line)) {
    auto fields = split_csv(line);
    if (fields.size() != rep.header.size()) {
      throw InputError(path.string() + ": row with " + std::to_string(fields.size()) +
                       " fields, expected " + std::to_string(rep.header.size()));
    }
    if (!fields[2].empty()) {
      for (std::size_t c = 0; c < ncol; ++c) {
        double v = 0.0;
        if (!parse_number(fields[4 + c], v)) throw InputError(path.string() + ": bad weight");
        rep.weights[c].push_back(v);
      }
    }
    rep.rows.push_back(std::move(fields));
  }
  return rep;
}

void write_solution(const std::filesystem::path& path, const ScorecardSolution& sol) {
  auto out = open_out(path);
  auto opt = [](const std::optional<double>& v) { return v ? full_precision(*v) : "none"; };
  out << "# scorecard solution\n";
  out << "schema_version 1\n";
  out << "problem " << to_string(sol.kind) << '\n';
  out << "beta " << full_precision(sol.beta) << '\n';
  out << "phi_star " << opt(sol.phi_star) << '\n';
  out << "lambda " << full_precision(sol.lambda) << '\n';
  out << "delta " << opt(sol.delta) << '\n';
  out << "div_floor " << opt(sol.div_floor) << '\n';
  out << "intercept " << opt(sol.intercept) << '\n';
  out << "woe_factor " << opt(sol.woe_factor) << '\n';
  out << "div_dev " << full_precision(sol.div_dev) << '\n';
  out << "div_val " << opt(sol.div_val) << '\n';
  out << "weights " << sol.weights.size() << '\n';
  for (Eigen::Index i = 0; i < sol.weights.size(); ++i) {
    out << (i + 1) << ' ' << full_precision(sol.weights(i)) << '\n';
  }
}

ScorecardSolution read_solution(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::map<std::string, std::string> meta;
  std::string line;
  ScorecardSolution sol;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key, value;
    ls >> key >> value;
    if (key == "weights") {
      int count = 0;
      if (!parse_number(value, count) || count < 0) fail("bad weight count");
      sol.weights.resize(count);
      for (int i = 0; i < count; ++i) {
        if (!std::getline(in, line)) fail("truncated weight list");
        ++lineno;
        std::istringstream ws(line);
        std::string idx, w;
        ws >> idx >> w;
        int index = 0;
        double v = 0.0;
        if (!parse_number(idx, index) || index != i + 1 || !parse_number(w, v)) {
          fail("expected '" + std::to_string(i + 1) + " <weight>'");
        }
        sol.weights(i) = v;
      }
      continue;
    }
    meta[key] = value;
  }
  auto number = [&](const std::string& key) -> std::optional<double> {
    auto it = meta.find(key);
    if (it == meta.end() || it->second == "none") return std::nullopt;
    double v = 0.0;
    if (it->second == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (!parse_number(it->second, v)) {
      throw InputError(path.string() + ": bad value for " + key);
    }
    return v;
  };
  if (meta.count("schema_version") == 0 || meta["schema_version"] != "1") {
    throw InputError(path.string() + ": unsupported or missing schema_version");
  }
  if (meta.count("problem") == 0) throw InputError(path.string() + ": missing problem");
  sol.kind = parse_problem_kind(meta["problem"]);
  sol.beta = number("beta").value_or(1.0);
  sol.phi_star = number("phi_star");
  sol.lambda = number("lambda").value_or(0.0);
  sol.delta = number("delta");
  sol.div_floor = number("div_floor");
  sol.intercept = number("intercept");
  sol.woe_factor = number("woe_factor");
  sol.div_dev = number("div_dev").value_or(std::numeric_limits<double>::quiet_NaN());
  sol.div_val = number("div_val");
  return sol;
}

}  // namespace scorecard
