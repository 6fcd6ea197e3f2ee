#include "scorecard/problems.hpp"

#include <cmath>
#include <sstream>

#include "scorecard/errors.hpp"

namespace scorecard {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), std::max(top.cols(), bottom.cols()));
  if (top.rows() > 0) out.topRows(top.rows()) = top;
  if (bottom.rows() > 0) out.bottomRows(bottom.rows()) = bottom;
  return out;
}

Vector vstack(const Vector& top, const Vector& bottom) {
  Vector out(top.size() + bottom.size());
  out << top, bottom;
  return out;
}

void check_dims(const MomentSet& m, const ConstraintSet& cs) {
  if (m.dim() != cs.dim()) {
    throw InputError("moments have dimension " + std::to_string(m.dim()) +
                     " but constraints have " + std::to_string(cs.dim()));
  }
}

void require_optimal(const QpSolution& qp, const std::string& what) {
  if (qp.optimal()) return;
  std::string msg = what + ": QP " + to_string(qp.status);
  if (!qp.message.empty()) msg += " (" + qp.message + ")";
  throw SolveError(msg);
}

// Fills residuals and divergences shared by every formulation.
void finish(ScorecardSolution& sol, const ConstraintSet& cs, const MomentSet* dev,
            const MomentSet* val) {
  const Vector& s = sol.weights;
  sol.equality_residual = cs.equality.rows() ? Vector(cs.equality * s) : Vector(0);
  sol.pattern_slack = cs.pattern.rows() ? Vector(cs.pattern * s) : Vector(0);
  sol.inweight_residual =
      cs.inweight.rows() ? Vector(cs.inweight * s - cs.inweight_values) : Vector(0);
  if (dev) sol.div_dev = divergence(s, *dev);
  if (val) sol.div_val = divergence(s, *val);
}

// Equality block [Ai; Ac] with rhs [IW; 0].
std::pair<Matrix, Vector> inweight_equalities(const ConstraintSet& cs) {
  return {vstack(cs.inweight, cs.equality),
          vstack(cs.inweight_values, Vector::Zero(cs.equality.rows()))};
}

ScorecardSolution solve_scaled(const MomentSet& m, const ConstraintSet& cs, double delta,
                               double lambda, ProblemKind kind, const ProblemOptions& options) {
  check_dims(m, cs);
  if (cs.has_inweights()) {
    throw InputError(std::string(to_string(kind)) +
                     " problem takes no in-weight rows; use the in-weighting problem");
  }
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  if (!(lambda >= 0.0)) throw InputError("lambda must be nonnegative");
  for (Eigen::Index i = 0; i < cs.dim(); ++i) {
    for (double b : {cs.lower(i), cs.upper(i)}) {
      if (std::isfinite(b) && b != 0.0) {
        throw InputError("bounds other than 0 or infinite are not preserved by the "
                         "weight-of-evidence rescaling (index " + std::to_string(i + 1) + ")");
      }
    }
  }
  const int p = m.dim();
  QpProblem qp = make_qp(2.0 * (m.pooled + (lambda / p) * Matrix::Identity(p, p)),
                         Vector::Zero(p));
  qp.Aeq = vstack(Matrix(m.diff.transpose()), cs.equality);
  qp.beq = vstack(Vector(Vector::Constant(1, delta)), Vector(Vector::Zero(cs.equality.rows())));
  qp.A = cs.pattern;
  qp.b = Vector::Zero(cs.pattern.rows());
  qp.lb = cs.lower;
  qp.ub = cs.upper;

  std::optional<Vector> x0;
  if (options.warm_start) {
    // Warm starts are scale-free here: move them onto d'S = delta.
    const double gap = m.diff.dot(*options.warm_start);
    if (gap > 0.0) x0 = (*options.warm_start) * (delta / gap);
  }
  const QpSolution res = solve_qp(qp, x0, options.qp);
  require_optimal(res, to_string(kind));

  const WoeScaling woe = woe_scale(res.x, m);
  ScorecardSolution sol;
  sol.kind = kind;
  sol.weights = woe.weights;
  sol.beta = woe.beta;
  sol.lambda = lambda;
  sol.delta = delta;
  sol.qp_iterations = res.iterations;
  finish(sol, cs, &m, options.validation);
  return sol;
}

// Drives the phi line search shared by the in-weighting and range problems.
ScorecardSolution solve_over_phi(
    const MomentSet& m, ProblemKind kind, const ConstraintSet& cs, double lambda,
    const ProblemOptions& options,
    const std::function<PhiPoint(double, const std::optional<Vector>&)>& at_phi) {
  std::optional<Vector> last = options.warm_start;
  double last_phi = std::numeric_limits<double>::quiet_NaN();
  std::optional<PhiPoint> last_point;
  int iterations = 0;
  std::vector<PhiStep> sol_trace;

  auto normalized_gap = [&](const PhiPoint& pt) {
    return pt.gap / std::max(1.0, std::abs(m.diff.dot(pt.weights)));
  };
  auto evaluate = [&](double phi) {
    PhiPoint pt = at_phi(phi, last);
    iterations += pt.qp.iterations;
    last = pt.weights;
    last_phi = phi;
    sol_trace.push_back({phi, pt.gap});
    const double v = normalized_gap(pt);
    last_point = std::move(pt);
    return v;
  };

  ScorecardSolution sol;
  sol.kind = kind;
  sol.lambda = lambda;

  // At phi = 0 the weight-of-evidence constraint carries no multiplier. If
  // the unconstrained-by-WoE optimum already lies on the WoE surface it
  // solves the full problem, since dropping that constraint only relaxes it.
  std::optional<PhiPoint> at_zero;
  try {
    at_zero = at_phi(0.0, last);
    iterations += at_zero->qp.iterations;
  } catch (const SolveError&) {
  }
  if (at_zero) {
    sol.trace.push_back({0.0, at_zero->gap});
    if (std::abs(normalized_gap(*at_zero)) <= options.root_tol) {
      sol.weights = at_zero->weights;
      sol.phi_star = 0.0;
      sol.qp_iterations = iterations;
      finish(sol, cs, &m, options.validation);
      return sol;
    }
  }

  RootResult root;
  try {
    root = line_search_root(evaluate, options.phi_bracket, options.root_tol);
  } catch (const NumericalError& e) {
    std::string hint =
        "; the in-weight values or divergence floor may be unreachable on the "
        "weight-of-evidence scale";
    if (kind == ProblemKind::kRange && at_zero && at_zero->gap < 0.0) {
      // g < 0 already at phi = 0: the floor is slack there, and restoring the
      // WoE scale would need a negative multiplier.
      std::ostringstream os;
      os << "; g(0) < 0 because the phi = 0 solution has divergence "
         << divergence(at_zero->weights, m) << " above its d'S = "
         << m.diff.dot(at_zero->weights) << "; raise the divergence floor";
      hint = os.str();
    }
    throw SolveError(std::string(to_string(kind)) + ": " + e.what() + hint);
  }
  if (!(root.root == last_phi) || !last_point) evaluate(root.root);
  sol.trace.insert(sol.trace.end(), sol_trace.begin(), sol_trace.end());
  sol.weights = last_point->weights;
  sol.phi_star = root.root;
  sol.qp_iterations = iterations;
  finish(sol, cs, &m, options.validation);
  return sol;
}

}  // namespace

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kClassic:
      return "classic";
    case ProblemKind::kPenalized:
      return "penalized";
    case ProblemKind::kInWeight:
      return "inweight";
    case ProblemKind::kRange:
      return "range";
    case ProblemKind::kRegression:
      return "regression";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(const std::string& name) {
  for (auto kind : {ProblemKind::kClassic, ProblemKind::kPenalized, ProblemKind::kInWeight,
                    ProblemKind::kRange, ProblemKind::kRegression}) {
    if (name == to_string(kind)) return kind;
  }
  throw InputError("unknown problem '" + name +
                   "' (expected classic, penalized, inweight, range or regression)");
}

ScorecardSolution solve_classic(const MomentSet& m, const ConstraintSet& cs, double delta,
                                const ProblemOptions& options) {
  return solve_scaled(m, cs, delta, 0.0, ProblemKind::kClassic, options);
}

ScorecardSolution solve_penalized(const MomentSet& m, const ConstraintSet& cs, double delta,
                                  double lambda, const ProblemOptions& options) {
  return solve_scaled(m, cs, delta, lambda, ProblemKind::kPenalized, options);
}

LambdaTuning tune_lambda(const MomentSet& dev, const MomentSet& val, const ConstraintSet& cs,
                         double delta, const std::vector<double>& grid,
                         const ProblemOptions& options) {
  if (grid.empty()) throw InputError("lambda grid is empty");
  LambdaTuning out;
  int best = -1;
  std::optional<Vector> warm = options.warm_start;
  for (double lambda : grid) {
    LambdaPoint pt;
    pt.lambda = lambda;
    try {
      ProblemOptions opt = options;
      opt.validation = &val;
      opt.warm_start = warm;
      const auto sol = solve_penalized(dev, cs, delta, lambda, opt);
      pt.ok = true;
      pt.div_dev = sol.div_dev;
      pt.div_val = *sol.div_val;
      warm = sol.weights;
    } catch (const Error& e) {
      pt.message = e.what();
    }
    out.points.push_back(pt);
    if (!pt.ok) continue;
    const int idx = static_cast<int>(out.points.size()) - 1;
    if (best < 0) {
      best = idx;
      continue;
    }
    const auto& cur = out.points[static_cast<std::size_t>(best)];
    if (pt.div_val > cur.div_val || (pt.div_val == cur.div_val && pt.lambda < cur.lambda)) {
      best = idx;
    }
  }
  if (best < 0) throw SolveError("every lambda grid point failed to solve");
  out.best = out.points[static_cast<std::size_t>(best)].lambda;
  return out;
}

PhiPoint solve_inweight_at_phi(const MomentSet& m, const ConstraintSet& cs, double lambda,
                               double phi, const std::optional<Vector>& warm_start,
                               const QpOptions& qp_options) {
  check_dims(m, cs);
  if (!(lambda >= 0.0)) throw InputError("lambda must be nonnegative");
  if (!(phi >= 0.0)) throw InputError("phi must be nonnegative");
  const int p = m.dim();
  QpProblem qp = make_qp(2.0 * (phi * m.pooled + (lambda / p) * Matrix::Identity(p, p)),
                         -(1.0 + phi) * m.diff);
  std::tie(qp.Aeq, qp.beq) = inweight_equalities(cs);
  qp.A = cs.pattern;
  qp.b = Vector::Zero(cs.pattern.rows());
  qp.lb = cs.lower;
  qp.ub = cs.upper;

  PhiPoint out;
  out.qp = solve_qp(qp, warm_start, qp_options);
  require_optimal(out.qp, "in-weighting at phi = " + std::to_string(phi));
  out.weights = out.qp.x;
  out.gap = woe_gap(out.weights, m);
  return out;
}

ScorecardSolution solve_inweight(const MomentSet& m, const ConstraintSet& cs, double lambda,
                                 const ProblemOptions& options) {
  return solve_over_phi(m, ProblemKind::kInWeight, cs, lambda, options,
                        [&](double phi, const std::optional<Vector>& warm) {
                          return solve_inweight_at_phi(m, cs, lambda, phi, warm, options.qp);
                        });
}

PhiPoint solve_range_at_phi(const MomentSet& m, const ConstraintSet& cs, double lambda,
                            const RangeTargets& targets, double div_floor, double phi,
                            const std::optional<Vector>& warm_start,
                            const QpOptions& qp_options) {
  check_dims(m, cs);
  const int p = m.dim();
  if (targets.emphasis.size() != p || targets.targets.size() != p) {
    throw InputError("range emphasis and targets must have length " + std::to_string(p));
  }
  if ((targets.emphasis.array() < 0.0).any()) {
    throw InputError("range emphasis must be nonnegative");
  }
  if (!(div_floor > 0.0)) throw InputError("divergence floor must be positive");
  if (!(phi >= 0.0)) throw InputError("phi must be nonnegative");

  Matrix H = phi * m.pooled + (lambda / p) * Matrix::Identity(p, p);
  H.diagonal() += targets.emphasis;
  QpProblem qp =
      make_qp(2.0 * H, -(phi * m.diff + 2.0 * targets.emphasis.cwiseProduct(targets.targets)));
  std::tie(qp.Aeq, qp.beq) = inweight_equalities(cs);
  qp.A = vstack(Matrix(-m.diff.transpose()), cs.pattern);
  qp.b = vstack(Vector(Vector::Constant(1, -div_floor)), Vector(Vector::Zero(cs.pattern.rows())));
  qp.lb = cs.lower;
  qp.ub = cs.upper;

  PhiPoint out;
  out.qp = solve_qp(qp, warm_start, qp_options);
  require_optimal(out.qp, "range engineering at phi = " + std::to_string(phi));
  out.weights = out.qp.x;
  out.gap = woe_gap(out.weights, m);
  return out;
}

ScorecardSolution solve_range(const MomentSet& m, const ConstraintSet& cs, double lambda,
                              const RangeTargets& targets, double div_floor,
                              const ProblemOptions& options) {
  auto sol = solve_over_phi(m, ProblemKind::kRange, cs, lambda, options,
                            [&](double phi, const std::optional<Vector>& warm) {
                              return solve_range_at_phi(m, cs, lambda, targets, div_floor, phi,
                                                        warm, options.qp);
                            });
  sol.div_floor = div_floor;
  return sol;
}

ScorecardSolution solve_regression(const Matrix& rows, const Vector& y, const ConstraintSet& cs,
                                   double lambda, const MomentSet* dev_moments,
                                   const ProblemOptions& options) {
  const int p = cs.dim();
  if (rows.cols() != p) {
    throw InputError("regression rows have " + std::to_string(rows.cols()) +
                     " columns, constraints expect " + std::to_string(p));
  }
  if (rows.rows() != y.size()) throw InputError("regression rows and y differ in length");
  if (!(lambda >= 0.0)) throw InputError("lambda must be nonnegative");

  Matrix xr(rows.rows(), p + 1);
  xr.col(0).setOnes();
  xr.rightCols(p) = rows;

  const bool constrained = cs.equality.rows() > 0 || cs.pattern.rows() > 0 ||
                           cs.inweight.rows() > 0 || cs.has_bounds();
  if (lambda == 0.0 && !constrained) {
    Eigen::ColPivHouseholderQR<Matrix> qr(xr);
    if (qr.rank() < p + 1) {
      throw NumericalError("normal equations are singular (rank " + std::to_string(qr.rank()) +
                           " < " + std::to_string(p + 1) +
                           "); use lambda > 0 or add constraints");
    }
  }

  Matrix penalty = Matrix::Identity(p + 1, p + 1);
  penalty(0, 0) = 0.0;
  QpProblem qp = make_qp(2.0 * (xr.transpose() * xr + (lambda / p) * penalty),
                         -2.0 * (xr.transpose() * y));
  auto pad = [&](const Matrix& a) {
    Matrix out = Matrix::Zero(a.rows(), p + 1);
    if (a.rows() > 0) out.rightCols(p) = a;
    return out;
  };
  std::tie(qp.Aeq, qp.beq) = inweight_equalities(cs);
  qp.Aeq = pad(qp.Aeq);
  qp.A = pad(cs.pattern);
  qp.b = Vector::Zero(cs.pattern.rows());
  qp.lb = vstack(Vector::Constant(1, -kInf), cs.lower);
  qp.ub = vstack(Vector::Constant(1, kInf), cs.upper);

  std::optional<Vector> x0;
  if (options.warm_start && options.warm_start->size() == p) {
    x0 = vstack(Vector::Constant(1, y.size() ? y.mean() : 0.0), *options.warm_start);
  }
  const QpSolution res = solve_qp(qp, x0, options.qp);
  require_optimal(res, "regression");

  ScorecardSolution sol;
  sol.kind = ProblemKind::kRegression;
  sol.intercept = res.x(0);
  sol.weights = res.x.tail(p);
  sol.lambda = lambda;
  sol.qp_iterations = res.iterations;
  if (dev_moments) {
    const double var = sol.weights.dot(dev_moments->pooled * sol.weights);
    if (var > 0.0) sol.woe_factor = dev_moments->diff.dot(sol.weights) / var;
  }
  finish(sol, cs, dev_moments, options.validation);
  return sol;
}

}  // namespace scorecard
