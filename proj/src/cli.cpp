#include "scorecard/cli.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "scorecard/config.hpp"
#include "scorecard/constraints.hpp"
#include "scorecard/errors.hpp"
#include "scorecard/io.hpp"
#include "scorecard/problems.hpp"

namespace scorecard {
namespace {

namespace fs = std::filesystem;

// Tolerances used by `kkt` re-verification.
constexpr double kEqualityTol = 1e-7;
constexpr double kPatternTol = 1e-7;
constexpr double kInWeightTol = 1e-9;
constexpr double kWoeTol = 1e-6;
constexpr double kFloorTol = 1e-6;

struct Flags {
  std::string config;
  std::string data;
  std::string out;
  std::string problem;
  std::string solution;
  std::optional<std::string> split_keys;
  std::optional<double> delta;
  std::optional<double> lambda;
  std::optional<double> div_floor;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_good;
  std::optional<int> n_bad;
  std::optional<double> separation;
};

SplitRule parse_split_keys(const std::string& text) {
  SplitRule rule;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" ") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (item.find_first_not_of(" ", used) != std::string::npos) throw std::invalid_argument("");
      rule.validation_keys.insert(v);
    } catch (const std::exception&) {
      throw InputError("--split-keys: '" + item + "' is not an integer");
    }
  }
  return rule;
}

struct Session {
  RunConfig cfg;
  fs::path config_dir;
};

Session open_config(const Flags& f) {
  Session s{load_config(f.config), fs::path(f.config).parent_path()};
  if (f.split_keys) s.cfg.split = parse_split_keys(*f.split_keys);
  return s;
}

std::optional<fs::path> data_path(const Flags& f, const Session& s) {
  if (!f.data.empty()) return fs::path(f.data);
  if (s.cfg.data_path) {
    fs::path p(*s.cfg.data_path);
    return p.is_relative() ? s.config_dir / p : p;
  }
  return std::nullopt;
}

fs::path require_data(const Flags& f, const Session& s) {
  auto p = data_path(f, s);
  if (!p) throw InputError("missing --data (or paths.data in the config)");
  return *p;
}

struct Workspace {
  SampleSplit split;
  MomentSet dev;
  std::optional<MomentSet> val;
  IndexMap map;
  ConstraintSet cs;
};

Workspace prepare(const Session& s, const fs::path& data) {
  Workspace w;
  w.split = load_dataset(data, s.cfg.layout, s.cfg.split);
  w.dev = moments_of(w.split.dev_goods, w.split.dev_bads);
  if (w.split.has_validation()) {
    try {
      w.val = moments_of(w.split.val_goods, w.split.val_bads);
    } catch (const NumericalError&) {
      // Too few validation rows in a class; validation divergence is omitted.
    }
  }
  w.map = build_index_map(s.cfg.layout);
  w.cs = assemble(s.cfg.spec, w.dev, w.map);
  return w;
}

std::string fmt(double v, int precision = 6) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

int cmd_synth(const Flags& f, std::ostream& out) {
  const Session s = open_config(f);
  SyntheticOptions opt = s.cfg.synthetic;
  if (f.seed) opt.seed = *f.seed;
  if (f.n_good) opt.n_good = *f.n_good;
  if (f.n_bad) opt.n_bad = *f.n_bad;
  if (f.separation) opt.separation = *f.separation;
  const Dataset data = generate_synthetic(s.cfg.layout, opt);
  write_dataset(f.out, data, s.cfg.layout);
  out << "wrote " << data.size() << " rows x " << s.cfg.layout.num_attributes()
      << " indicators to " << f.out << " (seed " << opt.seed << ")\n";
  return 0;
}

int cmd_check(const Flags& f, std::ostream& out) {
  const Session s = open_config(f);
  const auto& layout = s.cfg.layout;
  out << "layout: " << layout.num_characteristics() << " characteristics, "
      << layout.num_attributes() << " attributes\n";
  const auto violations = validate_spec(s.cfg.spec, layout);
  for (const auto& v : violations) {
    out << "violation: " << v.what;
    if (v.index) out << " (index " << v.index << ")";
    out << '\n';
  }
  if (!violations.empty()) return 1;

  const IndexMap map = build_index_map(layout);
  ConstraintSet cs;
  if (auto data = data_path(f, s)) {
    const Workspace w = prepare(s, *data);
    out << "data: development " << w.split.dev_goods.rows.rows() << " goods / "
        << w.split.dev_bads.rows.rows() << " bads; validation "
        << w.split.val_goods.rows.rows() << " goods / " << w.split.val_bads.rows.rows()
        << " bads\n";
    cs = w.cs;
  } else {
    out << "data: none (centering rows use placeholder weights)\n";
    cs = assemble(s.cfg.spec, Vector::Ones(layout.num_attributes()), map);
  }
  out << "Ac " << shape(cs.equality) << '\n';
  out << "Ap " << shape(cs.pattern) << '\n';
  out << "Ai " << shape(cs.inweight) << '\n';
  if (cs.has_inweights()) {
    out << "IW";
    for (Eigen::Index i = 0; i < cs.inweight_values.size(); ++i) {
      out << ' ' << fmt(cs.inweight_values(i));
    }
    out << '\n';
  }
  for (const auto& w : cs.warnings) out << "warning: " << w << '\n';
  return 0;
}

double resolve_lambda(const Flags& f, const RunConfig& cfg, const Workspace& w,
                      std::ostream& out, bool required) {
  if (f.lambda) return *f.lambda;
  if (cfg.lambda) return *cfg.lambda;
  if (!cfg.lambda_grid.empty() && w.val) {
    const auto tuning =
        tune_lambda(w.dev, *w.val, without_inweights(w.cs), cfg.delta, cfg.lambda_grid);
    for (const auto& pt : tuning.points) {
      out << "  lambda " << fmt(pt.lambda) << ": "
          << (pt.ok ? "val divergence " + fmt(pt.div_val) : "failed (" + pt.message + ")")
          << '\n';
    }
    out << "  selected lambda " << fmt(tuning.best) << '\n';
    return tuning.best;
  }
  if (required) {
    throw InputError("penalized problem needs --lambda, problem.lambda or problem.lambda_grid "
                     "with a validation sample");
  }
  return 0.0;
}

int cmd_solve(const Flags& f, std::ostream& out) {
  const Session s = open_config(f);
  const RunConfig& cfg = s.cfg;
  const Workspace w = prepare(s, require_data(f, s));

  std::string out_dir = f.out;
  if (out_dir.empty() && cfg.out_path) out_dir = (s.config_dir / *cfg.out_path).string();
  if (out_dir.empty()) throw InputError("missing --out (or paths.out in the config)");
  fs::create_directories(out_dir);

  std::vector<ProblemKind> kinds;
  std::string which = f.problem;
  if (which.empty()) which = cfg.problem ? to_string(*cfg.problem) : "";
  if (which.empty()) throw InputError("missing --problem (or problem.type in the config)");
  if (which == "all") {
    kinds = {ProblemKind::kClassic, ProblemKind::kPenalized, ProblemKind::kInWeight,
             ProblemKind::kRange, ProblemKind::kRegression};
  } else {
    kinds = {parse_problem_kind(which)};
  }
  const double delta = f.delta.value_or(cfg.delta);

  ProblemOptions base;
  base.phi_bracket = cfg.phi_bracket;
  base.validation = w.val ? &*w.val : nullptr;

  std::map<ProblemKind, ScorecardSolution> solved;
  std::optional<Vector> warm;
  auto run = [&](ProblemKind kind) -> const ScorecardSolution& {
    if (auto it = solved.find(kind); it != solved.end()) return it->second;
    ProblemOptions opt = base;
    opt.warm_start = warm;
    const auto started = std::chrono::steady_clock::now();
    out << to_string(kind) << ":\n";
    ScorecardSolution sol;
    switch (kind) {
      case ProblemKind::kClassic:
        if (w.cs.has_inweights()) out << "  in-weights ignored (classic problem)\n";
        sol = solve_classic(w.dev, without_inweights(w.cs), delta, opt);
        break;
      case ProblemKind::kPenalized: {
        const double lambda = resolve_lambda(f, cfg, w, out, true);
        sol = solve_penalized(w.dev, without_inweights(w.cs), delta, lambda, opt);
        break;
      }
      case ProblemKind::kInWeight:
        sol = solve_inweight(w.dev, w.cs, resolve_lambda(f, cfg, w, out, false), opt);
        break;
      case ProblemKind::kRange: {
        const double lambda = resolve_lambda(f, cfg, w, out, false);
        double floor = 0.0;
        if (f.div_floor) {
          floor = *f.div_floor;
        } else if (cfg.div_floor && !cfg.div_floor_ratio) {
          floor = *cfg.div_floor;
        } else if (cfg.div_floor_ratio) {
          ProblemOptions stage1 = base;
          const double stage1_div = solve_inweight(w.dev, w.cs, lambda, stage1).div_dev;
          floor = *cfg.div_floor_ratio * stage1_div;
          out << "  divergence floor " << fmt(*cfg.div_floor_ratio) << " x " << fmt(stage1_div)
              << " = " << fmt(floor) << '\n';
        } else {
          throw InputError("range problem needs --div-floor, problem.div_floor or "
                           "problem.div_floor_ratio");
        }
        sol = solve_range(w.dev, w.cs, lambda, cfg.range(), floor, opt);
        break;
      }
      case ProblemKind::kRegression: {
        const auto [rows, y] = w.split.development_rows();
        const double lambda = resolve_lambda(f, cfg, w, out, false);
        opt.warm_start.reset();
        sol = solve_regression(rows, y, w.cs, lambda, &w.dev, opt);
        break;
      }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    out << "  dev divergence " << fmt(sol.div_dev);
    if (sol.div_val) out << ", val divergence " << fmt(*sol.div_val);
    out << ", beta " << fmt(sol.beta);
    if (sol.phi_star) out << ", phi* " << fmt(*sol.phi_star);
    if (sol.intercept) out << ", intercept " << fmt(*sol.intercept);
    if (sol.woe_factor) out << ", woe factor " << fmt(*sol.woe_factor);
    out << ", " << sol.qp_iterations << " QP iterations, " << fmt(secs, 3) << " s\n";
    for (const auto& step : sol.trace) {
      out << "    phi " << fmt(step.phi) << "  gap " << fmt(step.gap) << '\n';
    }
    if (kind != ProblemKind::kRegression) warm = sol.weights;
    const fs::path file = fs::path(out_dir) / (std::string(to_string(kind)) + ".solution.txt");
    write_solution(file, sol);
    out << "  wrote " << file.string() << '\n';
    return solved.emplace(kind, std::move(sol)).first->second;
  };

  std::vector<ReportColumn> columns;
  for (ProblemKind k : kinds) run(k);
  for (ProblemKind k : kinds) columns.push_back({to_string(k), &solved.at(k)});
  const fs::path report = fs::path(out_dir) / "report.csv";
  write_report(report, cfg.layout, cfg.spec, columns);
  out << "wrote " << report.string() << '\n';
  return 0;
}

int cmd_kkt(const Flags& f, std::ostream& out) {
  const Session s = open_config(f);
  const Workspace w = prepare(s, require_data(f, s));
  const ScorecardSolution sol = read_solution(f.solution);
  const int p = s.cfg.layout.num_attributes();
  if (sol.weights.size() != p) {
    throw InputError("solution has " + std::to_string(sol.weights.size()) +
                     " weights, layout has " + std::to_string(p));
  }
  const Vector& S = sol.weights;
  bool all_ok = true;
  auto report = [&](const std::string& name, double value, double limit, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << name << ' ' << fmt(value, 3) << " (limit " << fmt(limit, 3)
        << ")\n";
    all_ok = all_ok && ok;
  };

  const double eq = w.cs.equality.rows() ? (w.cs.equality * S).cwiseAbs().maxCoeff() : 0.0;
  report("equality |Ac S|", eq, kEqualityTol, eq <= kEqualityTol);
  const double pat = w.cs.pattern.rows() ? (w.cs.pattern * S).maxCoeff() : 0.0;
  report("pattern max(Ap S)", pat, kPatternTol, pat <= kPatternTol);
  double bound = 0.0;
  for (int i = 0; i < p; ++i) {
    bound = std::max({bound, w.cs.lower(i) - S(i), S(i) - w.cs.upper(i)});
  }
  report("bounds violation", bound, kPatternTol, bound <= kPatternTol);

  const bool inweighted = sol.kind == ProblemKind::kInWeight || sol.kind == ProblemKind::kRange ||
                          sol.kind == ProblemKind::kRegression;
  if (inweighted && w.cs.has_inweights()) {
    const double iw = (w.cs.inweight * S - w.cs.inweight_values).cwiseAbs().maxCoeff();
    report("in-weight |Ai S - IW|", iw, kInWeightTol, iw <= kInWeightTol);
  }
  if (sol.kind != ProblemKind::kRegression) {
    const double gap = std::abs(woe_gap(S, w.dev));
    const double limit = kWoeTol * std::max(1.0, std::abs(w.dev.diff.dot(S)));
    report("WoE |S'CS - d'S|", gap, limit, gap <= limit);
  }
  const double div = divergence(S, w.dev);
  if (sol.kind == ProblemKind::kRange && sol.div_floor) {
    report("divergence above floor", div - *sol.div_floor, -kFloorTol,
           div >= *sol.div_floor - kFloorTol);
  }
  if (!std::isnan(sol.div_dev)) {
    const double diff = std::abs(div - sol.div_dev);
    report("stored dev divergence", diff, 1e-9 * std::max(1.0, div),
           diff <= 1e-9 * std::max(1.0, div));
  }
  out << (all_ok ? "solution verified" : "solution FAILED verification") << '\n';
  return all_ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scorecard development by constrained divergence maximization", "scorecard"};
  app.require_subcommand(1);
  Flags f;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic indicator dataset");
  synth->add_option("--config", f.config, "Run configuration (JSON)")->required();
  synth->add_option("--out", f.out, "Output CSV path")->required();
  synth->add_option("--seed", f.seed, "Random seed");
  synth->add_option("--n-good", f.n_good, "Number of goods");
  synth->add_option("--n-bad", f.n_bad, "Number of bads");
  synth->add_option("--separation", f.separation, "Class separation strength");

  auto* check = app.add_subcommand("check", "Validate config and data, print constraint shapes");
  check->add_option("--config", f.config, "Run configuration (JSON)")->required();
  check->add_option("--data", f.data, "Dataset CSV");
  check->add_option("--split-keys", f.split_keys, "Comma-separated validation split keys");

  auto* solve = app.add_subcommand("solve", "Solve a scorecard problem");
  solve->add_option("--config", f.config, "Run configuration (JSON)")->required();
  solve->add_option("--data", f.data, "Dataset CSV");
  solve->add_option("--out", f.out, "Output directory");
  solve->add_option("--problem", f.problem,
                    "classic | penalized | inweight | range | regression | all");
  solve->add_option("--delta", f.delta, "Scale target for the classic QP");
  solve->add_option("--lambda", f.lambda, "Ridge penalty");
  solve->add_option("--div-floor", f.div_floor, "Divergence floor for range engineering");
  solve->add_option("--split-keys", f.split_keys, "Comma-separated validation split keys");

  auto* kkt = app.add_subcommand("kkt", "Re-verify a stored solution");
  kkt->add_option("--config", f.config, "Run configuration (JSON)")->required();
  kkt->add_option("--data", f.data, "Dataset CSV");
  kkt->add_option("--solution", f.solution, "Solution file written by solve")->required();
  kkt->add_option("--split-keys", f.split_keys, "Comma-separated validation split keys");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*synth) return cmd_synth(f, out);
    if (*check) return cmd_check(f, out);
    if (*solve) return cmd_solve(f, out);
    if (*kkt) return cmd_kkt(f, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace scorecard
