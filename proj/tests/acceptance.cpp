// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "scorecard/cli.hpp"
#include "scorecard/problems.hpp"

using namespace scorecard;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " --"
            << o.detail.str() << std::endl;
}

double woe_rel(const Vector& s, const MomentSet& m) {
  return std::abs(woe_gap(s, m)) / std::max(1.0, std::abs(m.diff.dot(s)));
}

double linf(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

const ConstraintSet& fraud_cs_no_iw() {
  static const ConstraintSet cs = without_inweights(fixtures::fraud_data().cs);
  return cs;
}

const ScorecardSolution& fraud_classic() {
  static const ScorecardSolution s =
      solve_classic(fixtures::fraud_data().dev, fraud_cs_no_iw(), 1.753);
  return s;
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  if (out) *out = o.str() + e.str();
  return code;
}

// 1 ---------------------------------------------------------------------------

void qp_kernel(Outcome& o) {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> dim(2, 20);
  const auto t0 = Clock::now();
  double worst_kkt = 0.0, worst_eq = 0.0;
  int solved = 0, eq_only = 0, with_active = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = dim(rng);
    const int kind = trial % 4;  // equality-only, inequality, bounds, everything
    const int meq = kind == 1 ? 0 : std::uniform_int_distribution<int>(1, std::max(1, n / 2))(rng);
    const int mineq = kind == 0 ? 0 : std::uniform_int_distribution<int>(1, 2 * n)(rng);
    const bool bounds = kind >= 2;
    const QpProblem qp = fixtures::random_qp(n, meq, mineq, bounds, rng);
    const QpSolution sol = solve_qp(qp);
    if (!sol.optimal()) {
      o.require(false, "trial " + std::to_string(trial) + " status " + to_string(sol.status));
      continue;
    }
    ++solved;
    const bool bound_active = ((sol.mult_lower.array() > 0) || (sol.mult_upper.array() > 0)).any();
    if (!sol.active_ineq.empty() || bound_active) ++with_active;
    worst_kkt = std::max(worst_kkt, sol.kkt.max());
    if (kind == 0) {
      ++eq_only;
      const Vector ref = fixtures::kkt_direct(qp);
      worst_eq = std::max(worst_eq, (sol.x - ref).norm() / std::max(1.0, ref.norm()));
    }
  }
  const double secs = seconds_since(t0);
  o.detail << " " << solved << "/100 optimal (" << with_active
           << " with active inequalities or bounds), max KKT residual " << worst_kkt << ", "
           << eq_only
           << " equality-only with max rel. error " << worst_eq << ", " << secs << " s";
  o.require(solved == 100, "all optimal");
  o.require(worst_kkt <= 1e-6, "KKT <= 1e-6");
  o.require(worst_eq <= 1e-8, "direct KKT match <= 1e-8");
  o.require(secs < 5.0, "runtime < 5 s");
}

// 2 ---------------------------------------------------------------------------

void brute_force(Outcome& o) {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  constexpr int kSteps = 100;  // 100^3 = 1e6 grid points
  double worst = -INFINITY;
  for (int trial = 0; trial < 20; ++trial) {
    auto qp = make_qp(fixtures::random_spd(3, rng, 0.05), 2.0 * fixtures::random_vector(3, rng));
    qp.lb = Vector::Constant(3, -1.0);
    qp.ub = Vector::Constant(3, 1.0);
    const int m = 1 + trial % 3;
    qp.A = Matrix::Zero(m, 3);
    qp.b = Vector::Zero(m);
    const int pairs[3][2] = {{0, 1}, {1, 2}, {0, 2}};
    for (int r = 0; r < m; ++r) {
      const double sign = ud(rng) < 0.5 ? 1.0 : -1.0;
      qp.A(r, pairs[r][0]) = sign;
      qp.A(r, pairs[r][1]) = -sign;
    }
    const QpSolution sol = solve_qp(qp);
    o.require(sol.optimal(), "trial " + std::to_string(trial) + " optimal");
    if (!sol.optimal()) continue;
    const double fx = qp_objective(qp, sol.x);
    double best = INFINITY;
    Vector x(3);
    for (int i = 0; i < kSteps; ++i) {
      x(0) = -1.0 + 2.0 * i / (kSteps - 1);
      for (int j = 0; j < kSteps; ++j) {
        x(1) = -1.0 + 2.0 * j / (kSteps - 1);
        for (int k = 0; k < kSteps; ++k) {
          x(2) = -1.0 + 2.0 * k / (kSteps - 1);
          if ((qp.A * x - qp.b).maxCoeff() > 0.0) continue;
          best = std::min(best, qp_objective(qp, x));
        }
      }
    }
    worst = std::max(worst, fx - best);
    o.require(fx <= best + 1e-6, "trial " + std::to_string(trial) + " beats grid");
  }
  o.detail << " 20 instances, max (solver - grid best) = " << worst;
}

// 3 ---------------------------------------------------------------------------

void theorem_invariance(Outcome& o) {
  const auto& d = fixtures::fraud_data();
  o.detail << " p=" << d.dev.dim() << ", Ac " << d.cs.equality.rows() << " rows, Ap "
           << d.cs.pattern.rows() << " rows;";
  o.require(d.cs.equality.rows() == 59 && d.cs.pattern.rows() == 106, "fixture shape");
  const ScorecardSolution a = solve_classic(d.dev, fraud_cs_no_iw(), 0.5);
  const ScorecardSolution b = fraud_classic();
  const ScorecardSolution c = solve_classic(d.dev, fraud_cs_no_iw(), 3.0);
  const double diff = std::max({linf(a.weights, b.weights), linf(c.weights, b.weights),
                                linf(a.weights, c.weights)});
  o.detail << " max |S(delta) - S(delta')| = " << diff << ", betas " << a.beta << " / " << b.beta
           << " / " << c.beta;
  o.require(diff <= 1e-6, "agreement <= 1e-6");
}

// 4 ---------------------------------------------------------------------------

void woe_identity(Outcome& o) {
  const auto& d = fixtures::fraud_data();
  const ScorecardSolution pen = solve_penalized(d.dev, fraud_cs_no_iw(), 1.753, 0.095);
  const ScorecardSolution iw = solve_inweight(d.dev, d.cs, 0.095);
  const ScorecardSolution rng = solve_range(d.dev, d.cs, 0.095, d.cfg.range(), 0.95 * iw.div_dev);
  const std::pair<const char*, const ScorecardSolution*> all[] = {
      {"classic", &fraud_classic()}, {"penalized", &pen}, {"inweight", &iw}, {"range", &rng}};
  for (const auto& [name, sol] : all) {
    const double r = woe_rel(sol->weights, d.dev);
    o.detail << " " << name << " " << r << ";";
    o.require(r <= 1e-6, std::string(name) + " WoE <= 1e-6");
  }
}

// 5 ---------------------------------------------------------------------------

void penalized(Outcome& o) {
  const auto& d = fixtures::fraud_data();
  const ScorecardSolution& classic = fraud_classic();
  const ScorecardSolution tiny = solve_penalized(d.dev, fraud_cs_no_iw(), 1.753, 1e-8);
  const ScorecardSolution ridge = solve_penalized(d.dev, fraud_cs_no_iw(), 1.753, 0.095);
  const double diff = linf(tiny.weights, classic.weights);
  o.detail << " |S(1e-8) - S_classic| = " << diff << "; dev divergence classic "
           << classic.div_dev << ", lambda=.095 " << ridge.div_dev;
  o.require(diff <= 1e-4, "continuity <= 1e-4");
  o.require(ridge.div_dev <= classic.div_dev, "ordering");
}

// 6 ---------------------------------------------------------------------------

void inweighting(Outcome& o) {
  const auto& d = fixtures::fraud_data();
  const ScorecardSolution sol = solve_inweight(d.dev, d.cs, 0.095);
  const double iw_err = (d.cs.inweight * sol.weights - d.cs.inweight_values).cwiseAbs().maxCoeff();
  const double g = woe_rel(sol.weights, d.dev);
  o.detail << " phi* " << *sol.phi_star << ", |Ai S - IW| " << iw_err << ", |g|/scale " << g
           << ", dev divergence " << sol.div_dev << " vs classic " << fraud_classic().div_dev
           << ";";
  o.require(iw_err <= 1e-9, "in-weights to 1e-9");
  o.require(g <= 1e-3, "root tolerance");
  o.require(sol.div_dev <= fraud_classic().div_dev, "divergence ordering");

  const ScorecardSolution empty = solve_inweight(d.dev, fraud_cs_no_iw(), 0.0);
  const double diff = linf(empty.weights, fraud_classic().weights);
  o.detail << " empty IW, lambda 0: |S - S_classic| = " << diff;
  o.require(diff <= 1e-5, "matches classic to 1e-5");
}

// 7 ---------------------------------------------------------------------------

void range_engineering(Outcome& o) {
  const auto& d = fixtures::fraud_data();
  const ScorecardSolution stage1 = solve_inweight(d.dev, d.cs, 0.095);
  const double floor = 0.95 * stage1.div_dev;
  const ScorecardSolution sol = solve_range(d.dev, d.cs, 0.095, d.cfg.range(), floor);
  o.detail << " floor " << floor << ", achieved " << sol.div_dev << " (phi* " << *sol.phi_star
           << ");";
  o.require(sol.div_dev >= floor - 1e-6, "divergence floor");

  const ScorecardSolution& classic = fraud_classic();
  const RangeTargets at_classic{Vector::Ones(d.dev.dim()), classic.weights};
  const ScorecardSolution back =
      solve_range(d.dev, fraud_cs_no_iw(), 0.0, at_classic, 0.5 * classic.div_dev);
  const double diff = linf(back.weights, classic.weights);
  o.detail << " T = classic, R = 1, slack floor: |S - S_classic| = " << diff;
  o.require(diff <= 1e-4, "returns to classic within 1e-4");
}

// 8 ---------------------------------------------------------------------------

void regression(Outcome& o) {
  const auto& d = fixtures::fraud_data();
  const auto [rows, y] = d.split.development_rows();
  const int p = static_cast<int>(rows.cols());
  const int n = static_cast<int>(rows.rows());
  const double lambda = 0.095;

  // Equalities only, so no inequality can be active.
  ConstraintSet eq_only = d.cs;
  eq_only.pattern = Matrix(0, p);
  const ScorecardSolution sol = solve_regression(rows, y, eq_only, lambda, &d.dev);

  Matrix xr(n, p + 1);
  xr << Vector::Ones(n), rows;
  auto qp = make_qp(Matrix(2.0 * xr.transpose() * xr), Vector(-2.0 * xr.transpose() * y));
  for (int i = 1; i <= p; ++i) qp.H(i, i) += 2.0 * lambda / p;
  const int me = static_cast<int>(eq_only.inweight.rows() + eq_only.equality.rows());
  qp.Aeq = Matrix::Zero(me, p + 1);
  qp.Aeq.rightCols(p) << eq_only.inweight, eq_only.equality;
  qp.beq = Vector::Zero(me);
  qp.beq.head(eq_only.inweight.rows()) = eq_only.inweight_values;
  // Centering and no-inform rows are dependent on one-hot data; a least-squares
  // KKT solve handles the rank deficiency.
  const int m = me;
  Matrix K = Matrix::Zero(p + 1 + m, p + 1 + m);
  K.topLeftCorner(p + 1, p + 1) = qp.H;
  K.topRightCorner(p + 1, m) = qp.Aeq.transpose();
  K.bottomLeftCorner(m, p + 1) = qp.Aeq;
  Vector rhs(p + 1 + m);
  rhs << -qp.f, qp.beq;
  const Vector ref = K.completeOrthogonalDecomposition().solve(rhs).head(p + 1);
  Vector got(p + 1);
  got << *sol.intercept, sol.weights;
  const double rel = (got - ref).norm() / std::max(1.0, ref.norm());
  o.detail << " closed-form rel. error " << rel << ";";
  o.require(rel <= 1e-8, "closed form to 1e-8");

  const ScorecardSolution shifted =
      solve_regression(rows, Vector(y.array() + 10.0), eq_only, lambda, &d.dev);
  const double ds0 = *shifted.intercept - *sol.intercept;
  const double dS = linf(shifted.weights, sol.weights);
  o.detail << " y+10: intercept moved " << ds0 << ", weights moved " << dS << ";";
  o.require(std::abs(ds0 - 10.0) <= 1e-8 && dS <= 1e-8, "y-shift moves only the intercept");

  const ScorecardSolution flat =
      solve_regression(rows, Vector::Constant(n, 0.7), without_inweights(d.cs), lambda);
  const double s_max = flat.weights.cwiseAbs().maxCoeff();
  o.detail << " constant y: intercept " << *flat.intercept << ", max |S| " << s_max;
  o.require(std::abs(*flat.intercept - 0.7) <= 1e-8 && s_max <= 1e-8, "constant y");
}

// 9 ---------------------------------------------------------------------------

void performance(Outcome& o) {
  const auto t0 = Clock::now();
  const RunConfig cfg = fixtures::fraud_config();
  const Dataset raw = generate_synthetic(cfg.layout, cfg.synthetic);
  const SampleSplit split = split_dataset(raw, cfg.split);
  const MomentSet dev = moments_of(split.dev_goods, split.dev_bads);
  const ConstraintSet cs = assemble(cfg.spec, dev, build_index_map(cfg.layout));
  const double prep = seconds_since(t0);

  const auto t1 = Clock::now();
  const ScorecardSolution classic = solve_classic(dev, without_inweights(cs), 1.753);
  const double classic_s = seconds_since(t1);

  // The same QP with the 2 in-weight rows added: 61 equality rows, 106 inequalities.
  const auto t2 = Clock::now();
  const PhiPoint with_iw = solve_inweight_at_phi(dev, cs, 0.0, 1.0);
  const double iw_qp_s = seconds_since(t2);

  const auto t3 = Clock::now();
  const ScorecardSolution iw = solve_inweight(dev, cs, 0.095);
  const double iw_s = seconds_since(t3);

  const double total = seconds_since(t0);
  o.detail << " data+moments " << prep << " s, classic " << classic_s << " s ("
           << classic.qp_iterations << " QP iterations), 61-equality QP " << iw_qp_s << " s ("
           << with_iw.qp.iterations << " iterations), full in-weighting " << iw_s
           << " s, total " << total << " s";
  o.require(with_iw.qp.optimal(), "61-equality QP optimal");
  o.require(total < 10.0, "under 10 s");
}

// 10 --------------------------------------------------------------------------

void fixture_shapes(Outcome& o) {
  const RunConfig cfg = fixtures::fraud_config();
  const ConstraintSet cs =
      assemble(cfg.spec, Vector::Ones(cfg.layout.num_attributes()), build_index_map(cfg.layout));
  o.detail << " Ac " << cs.equality.rows() << "x" << cs.equality.cols() << ", Ap "
           << cs.pattern.rows() << "x" << cs.pattern.cols() << ", Ai " << cs.inweight.rows() << "x"
           << cs.inweight.cols() << ", IW (" << cs.inweight_values.transpose() << ");";
  o.require(cs.equality.rows() == 59 && cs.equality.cols() == 171, "Ac 59x171");
  o.require(cs.pattern.rows() == 106 && cs.pattern.cols() == 171, "Ap 106x171");
  o.require(cs.inweight.rows() == 2 && cs.inweight.cols() == 171, "Ai 2x171");
  o.require(cs.inweight_values.size() == 2 && cs.inweight_values(0) == 0.5 &&
                cs.inweight_values(1) == 0.3,
            "IW = (.5, .3)");
  o.require(cfg.spec == fixtures::fraud_spec(), "config matches the j/k/a vectors");

  std::string out;
  const int code = cli({"check", "--config", fixtures::fraud_config_path().string()}, &out);
  const bool printed = out.find("Ac 59x171") != std::string::npos &&
                       out.find("Ap 106x171") != std::string::npos &&
                       out.find("Ai 2x171") != std::string::npos &&
                       out.find("IW 0.5 0.3") != std::string::npos;
  o.detail << " `check` exit " << code << (printed ? ", shapes printed" : ", shapes missing");
  o.require(code == 0 && printed, "check reports shapes");
}

// 11 --------------------------------------------------------------------------

void pipeline(Outcome& o) {
  const fs::path dir = fixtures::temp_dir("acceptance_pipeline");
  const std::string cfg = fixtures::fraud_config_path().string();
  const std::string data = (dir / "data.csv").string();
  const std::string out = (dir / "out").string();
  std::string log;
  int code = cli({"synth", "--config", cfg, "--out", data}, &log);
  o.detail << " synth " << code << ";";
  o.require(code == 0, "synth");
  for (const char* p : {"classic", "penalized", "inweight", "range", "regression"}) {
    code = cli({"solve", "--config", cfg, "--data", data, "--out", out, "--problem", p}, &log);
    const std::string sol = (fs::path(out) / (std::string(p) + ".solution.txt")).string();
    const int k = code == 0 ? cli({"kkt", "--config", cfg, "--data", data, "--solution", sol}, &log)
                            : -1;
    o.detail << " " << p << " solve " << code << " kkt " << k << ";";
    o.require(code == 0 && k == 0, std::string(p) + ": " + log);
  }
}

}  // namespace

int main() {
  std::cout.precision(3);
  criterion(1, "QP kernel correctness", qp_kernel);
  criterion(2, "brute-force optimality", brute_force);
  criterion(3, "scale invariance of the classic solution", theorem_invariance);
  criterion(4, "weight-of-evidence identity", woe_identity);
  criterion(5, "penalized continuity and ordering", penalized);
  criterion(6, "in-weighting", inweighting);
  criterion(7, "range engineering", range_engineering);
  criterion(8, "score-engineered regression", regression);
  criterion(9, "performance", performance);
  criterion(10, "fixture shapes", fixture_shapes);
  criterion(11, "end-to-end pipeline", pipeline);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
