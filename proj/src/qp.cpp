#include "scorecard/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scorecard/errors.hpp"

namespace scorecard {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative threshold for rank decisions on the normalized equality rows.
constexpr double kRankTol = 1e-10;
// Ridge used by the phase-1 program; keeps it strictly convex.
constexpr double kPhase1Ridge = 1e-8;

enum class RowKind { kGeneral, kLower, kUpper, kFixed };

struct RowOrigin {
  RowKind kind;
  int index;
  double scale;
};

// The problem after row normalization, dependent-row removal and folding
// bounds into the inequality block:  E x = be,  G x <= bg.
struct Canonical {
  int n = 0;
  Matrix H;
  Vector f;
  Matrix E;
  Vector be;
  std::vector<RowOrigin> eq_origin;
  Matrix G;
  Vector bg;
  std::vector<RowOrigin> ineq_origin;
  int dropped = 0;
  std::string infeasible;  // non-empty when infeasibility was detected early
};

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

void validate(const QpProblem& p) {
  const Eigen::Index n = p.f.size();
  auto fail = [](const std::string& what) { throw InputError("malformed QP: " + what); };
  if (p.H.rows() != n || p.H.cols() != n) fail("H must be n x n");
  if (p.Aeq.cols() != n && p.Aeq.rows() != 0) fail("Aeq column count");
  if (p.Aeq.rows() != p.beq.size()) fail("Aeq/beq row count");
  if (p.A.cols() != n && p.A.rows() != 0) fail("A column count");
  if (p.A.rows() != p.b.size()) fail("A/b row count");
  if (p.lb.size() != 0 && p.lb.size() != n) fail("lb length");
  if (p.ub.size() != 0 && p.ub.size() != n) fail("ub length");
  if (!p.H.allFinite() || !p.f.allFinite() || !p.Aeq.allFinite() || !p.beq.allFinite() ||
      !p.A.allFinite() || !p.b.allFinite()) {
    fail("non-finite entries");
  }
  const double hscale = std::max(1.0, p.H.cwiseAbs().maxCoeff());
  if (n > 0 && (p.H - p.H.transpose()).cwiseAbs().maxCoeff() > 1e-10 * hscale) {
    fail("H is not symmetric");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lo = p.lb.size() ? p.lb(i) : -kInf;
    const double hi = p.ub.size() ? p.ub(i) : kInf;
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) fail("lb > ub at " + std::to_string(i));
  }
}

Canonical canonicalize(const QpProblem& p, double feas_tol) {
  Canonical c;
  const int n = p.dim();
  c.n = n;
  c.H = 0.5 * (p.H + p.H.transpose());
  c.f = p.f;

  std::vector<Vector> eq_rows;
  std::vector<double> eq_rhs;
  for (Eigen::Index i = 0; i < p.Aeq.rows(); ++i) {
    const double s = p.Aeq.row(i).cwiseAbs().maxCoeff();
    if (s == 0.0) {
      if (std::abs(p.beq(i)) > feas_tol) c.infeasible = "zero equality row with nonzero rhs";
      ++c.dropped;
      continue;
    }
    eq_rows.push_back(p.Aeq.row(i).transpose() / s);
    eq_rhs.push_back(p.beq(i) / s);
    c.eq_origin.push_back({RowKind::kGeneral, static_cast<int>(i), s});
  }
  std::vector<Vector> in_rows;
  std::vector<double> in_rhs;
  for (Eigen::Index i = 0; i < p.A.rows(); ++i) {
    const double s = p.A.row(i).cwiseAbs().maxCoeff();
    if (s == 0.0) {
      if (p.b(i) < -feas_tol) c.infeasible = "zero inequality row with negative rhs";
      continue;
    }
    in_rows.push_back(p.A.row(i).transpose() / s);
    in_rhs.push_back(p.b(i) / s);
    c.ineq_origin.push_back({RowKind::kGeneral, static_cast<int>(i), s});
  }
  for (int i = 0; i < n; ++i) {
    const double lo = p.lb.size() ? p.lb(i) : -kInf;
    const double hi = p.ub.size() ? p.ub(i) : kInf;
    if (std::isfinite(lo) && lo == hi) {
      eq_rows.push_back(Vector::Unit(n, i));
      eq_rhs.push_back(lo);
      c.eq_origin.push_back({RowKind::kFixed, i, 1.0});
      continue;
    }
    if (std::isfinite(lo)) {
      in_rows.push_back(-Vector::Unit(n, i));
      in_rhs.push_back(-lo);
      c.ineq_origin.push_back({RowKind::kLower, i, 1.0});
    }
    if (std::isfinite(hi)) {
      in_rows.push_back(Vector::Unit(n, i));
      in_rhs.push_back(hi);
      c.ineq_origin.push_back({RowKind::kUpper, i, 1.0});
    }
  }

  Matrix E(static_cast<Eigen::Index>(eq_rows.size()), n);
  Vector be(static_cast<Eigen::Index>(eq_rows.size()));
  for (std::size_t r = 0; r < eq_rows.size(); ++r) {
    E.row(static_cast<Eigen::Index>(r)) = eq_rows[r].transpose();
    be(static_cast<Eigen::Index>(r)) = eq_rhs[r];
  }
  c.G.resize(static_cast<Eigen::Index>(in_rows.size()), n);
  c.bg.resize(static_cast<Eigen::Index>(in_rows.size()));
  for (std::size_t r = 0; r < in_rows.size(); ++r) {
    c.G.row(static_cast<Eigen::Index>(r)) = in_rows[r].transpose();
    c.bg(static_cast<Eigen::Index>(r)) = in_rhs[r];
  }

  if (E.rows() == 0) {
    c.E = E;
    c.be = be;
    return c;
  }

  // Keep a maximal independent subset of equality rows; the dropped rows must
  // be implied by the kept ones, otherwise the system is inconsistent.
  Eigen::ColPivHouseholderQR<Matrix> qr(E.transpose());
  qr.setThreshold(kRankTol);
  const Eigen::Index rank = qr.rank();
  std::vector<int> keep;
  for (Eigen::Index r = 0; r < rank; ++r) keep.push_back(qr.colsPermutation().indices()(r));
  std::sort(keep.begin(), keep.end());

  c.E.resize(static_cast<Eigen::Index>(keep.size()), n);
  c.be.resize(static_cast<Eigen::Index>(keep.size()));
  std::vector<RowOrigin> kept_origin;
  for (std::size_t r = 0; r < keep.size(); ++r) {
    c.E.row(static_cast<Eigen::Index>(r)) = E.row(keep[r]);
    c.be(static_cast<Eigen::Index>(r)) = be(keep[r]);
    kept_origin.push_back(c.eq_origin[keep[r]]);
  }
  c.dropped += static_cast<int>(E.rows() - rank);
  c.eq_origin = std::move(kept_origin);

  if (rank < E.rows()) {
    const Vector xp = c.E.transpose() * (c.E * c.E.transpose()).ldlt().solve(c.be);
    const double resid = inf_norm(E * xp - be);
    if (resid > 10.0 * feas_tol * std::max(1.0, inf_norm(xp))) {
      c.infeasible = "inconsistent equality constraints";
    }
  }
  return c;
}

// Working-set machinery shared by phase 1 and the main solve.
struct CoreResult {
  Vector x;
  Vector lam_eq;
  Vector mu;  // one entry per G row, zero when inactive
  std::vector<int> working;
  QpStatus status = QpStatus::kMaxIterations;
  int iterations = 0;
  std::vector<double> trace;
  std::string message;
};

// Rows of G active at x that are linearly independent of E and of each other,
// scanned in index order.
std::vector<int> initial_working_set(const Matrix& E, const Matrix& G, const Vector& bg,
                                     const Vector& x, double tol) {
  const Eigen::Index n = x.size();
  std::vector<Vector> basis;
  auto residual = [&](Vector v) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) v -= q.dot(v) * q;
    }
    return v;
  };
  auto try_add = [&](const Vector& a) {
    if (static_cast<Eigen::Index>(basis.size()) >= n) return false;
    Vector r = residual(a);
    const double nr = r.norm();
    if (nr <= 1e-8 * a.norm()) return false;
    basis.push_back(r / nr);
    return true;
  };
  for (Eigen::Index i = 0; i < E.rows(); ++i) try_add(E.row(i).transpose());

  std::vector<int> working;
  const Vector slack = bg - G * x;
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    if (std::abs(slack(i)) <= tol && try_add(G.row(i).transpose())) {
      working.push_back(static_cast<int>(i));
    }
  }
  return working;
}

CoreResult active_set(const Matrix& H, const Vector& f, const Matrix& E, const Vector& be,
                      const Matrix& G, const Vector& bg, Vector x, std::vector<int> working,
                      int max_iter, bool record_trace) {
  (void)be;
  const Eigen::Index n = x.size();
  const Eigen::Index me = E.rows();
  CoreResult out;
  std::vector<char> in_working(static_cast<std::size_t>(G.rows()), 0);
  for (int w : working) in_working[static_cast<std::size_t>(w)] = 1;

  auto objective = [&](const Vector& v) { return 0.5 * v.dot(H * v) + f.dot(v); };

  bool stationary = false;
  bool use_bland = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    out.iterations = iter + 1;
    if (record_trace) out.trace.push_back(objective(x));

    const Eigen::Index m = me + static_cast<Eigen::Index>(working.size());
    Matrix Mt(n, m);  // active constraint normals as columns
    if (me > 0) Mt.leftCols(me) = E.transpose();
    for (std::size_t w = 0; w < working.size(); ++w) {
      Mt.col(me + static_cast<Eigen::Index>(w)) = G.row(working[w]).transpose();
    }
    Eigen::HouseholderQR<Matrix> qr(Mt);
    const Matrix Q = qr.householderQ();
    const Vector g = H * x + f;
    const double gscale = std::max({1.0, inf_norm(g), inf_norm(f)});

    Vector step = Vector::Zero(n);
    bool ray = false;
    if (!stationary && m < n) {
      const Matrix Z = Q.rightCols(n - m);
      const Vector gz = Z.transpose() * g;
      const Matrix Hz = Z.transpose() * H * Z;
      Eigen::LLT<Matrix> llt(Hz);
      bool definite = llt.info() == Eigen::Success;
      if (definite) {
        const Vector diag = llt.matrixLLT().diagonal();
        const double lo = diag.minCoeff();
        const double hi = diag.maxCoeff();
        definite = lo > 0.0 && lo * lo > 1e-12 * hi * hi;
      }
      if (definite) {
        step = -Z * llt.solve(gz);
      } else {
        // Singular reduced Hessian: descend along zero-curvature directions
        // when the gradient has a component there, otherwise take the
        // minimum-norm Newton step.
        Eigen::SelfAdjointEigenSolver<Matrix> es(Hz);
        const Vector& ev = es.eigenvalues();
        const Matrix& V = es.eigenvectors();
        const double top = ev.cwiseAbs().maxCoeff();
        const double thresh = 1e-12 * top;
        const Vector gv = V.transpose() * gz;
        Vector dz = Vector::Zero(n - m);
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
          if (ev(i) <= thresh && std::abs(gv(i)) > 1e-10 * gscale) dz -= gv(i) * V.col(i);
        }
        if (dz.squaredNorm() > 0.0) {
          ray = true;
          step = Z * dz;
        } else {
          for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (ev(i) > thresh) dz -= (gv(i) / ev(i)) * V.col(i);
          }
          step = Z * dz;
        }
      }
      if (!ray && inf_norm(step) <= 1e-12 * std::max(1.0, inf_norm(x))) stationary = true;
    } else {
      stationary = true;
    }

    if (stationary) {
      Vector lam = Vector::Zero(m);
      if (m > 0) {
        const Vector rhs = -(Q.leftCols(m).transpose() * g);
        lam = qr.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(rhs);
      }
      // Pick an inequality with a negative multiplier to release.
      int drop = -1;
      double most_negative = -1e-10 * gscale;
      for (std::size_t w = 0; w < working.size(); ++w) {
        const double mu = lam(me + static_cast<Eigen::Index>(w));
        if (mu >= -1e-10 * gscale) continue;
        if (use_bland) {
          if (drop < 0 || working[w] < working[static_cast<std::size_t>(drop)]) {
            drop = static_cast<int>(w);
          }
        } else if (mu < most_negative) {
          most_negative = mu;
          drop = static_cast<int>(w);
        }
      }
      if (drop < 0) {
        out.x = std::move(x);
        out.lam_eq = lam.head(me);
        out.mu = Vector::Zero(G.rows());
        for (std::size_t w = 0; w < working.size(); ++w) {
          out.mu(working[w]) = std::max(0.0, lam(me + static_cast<Eigen::Index>(w)));
        }
        out.working = std::move(working);
        out.status = QpStatus::kOptimal;
        if (record_trace) out.trace.push_back(objective(out.x));
        return out;
      }
      in_working[static_cast<std::size_t>(working[static_cast<std::size_t>(drop)])] = 0;
      working.erase(working.begin() + drop);
      stationary = false;
      continue;
    }

    // Ratio test: largest step keeping every inactive inequality satisfied.
    const double pnorm = step.norm();
    double alpha = ray ? kInf : 1.0;
    int blocking = -1;
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
      if (in_working[static_cast<std::size_t>(i)]) continue;
      const double rate = G.row(i).dot(step);
      if (rate <= 1e-12 * pnorm) continue;
      const double a = std::max(0.0, (bg(i) - G.row(i).dot(x)) / rate);
      if (a < alpha * (1.0 - 1e-12) || (blocking < 0 && a <= alpha)) {
        alpha = a;
        blocking = static_cast<int>(i);
      }
    }
    if (blocking < 0 && ray) {
      out.x = std::move(x);
      out.status = QpStatus::kUnbounded;
      out.message = "objective decreases without bound along a feasible ray";
      out.lam_eq = Vector::Zero(me);
      out.mu = Vector::Zero(G.rows());
      out.working = std::move(working);
      return out;
    }
    x += alpha * step;
    use_bland = alpha <= 1e-14;
    if (blocking >= 0) {
      working.push_back(blocking);
      in_working[static_cast<std::size_t>(blocking)] = 1;
    } else {
      stationary = true;
    }
  }
  out.x = std::move(x);
  out.lam_eq = Vector::Zero(me);
  out.mu = Vector::Zero(G.rows());
  out.working = std::move(working);
  out.status = QpStatus::kMaxIterations;
  out.message = "iteration cap reached";
  return out;
}

int iteration_cap(const Canonical& c, const QpOptions& options) {
  if (options.max_iterations > 0) return options.max_iterations;
  return 50 * static_cast<int>(c.n + c.E.rows() + c.G.rows() + 1);
}

bool feasible(const Canonical& c, const Vector& x, double tol) {
  if (c.E.rows() > 0 && inf_norm(c.E * x - c.be) > tol) return false;
  if (c.G.rows() > 0 && (c.G * x - c.bg).maxCoeff() > tol) return false;
  return true;
}

// Projection of x onto the equality affine set.
Vector project_equalities(const Canonical& c, const Vector& x) {
  if (c.E.rows() == 0) return x;
  const Vector r = c.be - c.E * x;
  return x + c.E.transpose() * (c.E * c.E.transpose()).ldlt().solve(r);
}

// Minimize sum(t) + ridge/2 (|x - x0|^2 + |t|^2) subject to E x = be,
// G_V x - t <= bg_V for initially violated rows V, G_i x <= bg_i otherwise,
// t >= 0.
std::optional<Vector> phase1(const Canonical& c, const Vector& start, const QpOptions& options,
                             int* iterations) {
  const Vector x0 = project_equalities(c, start);
  if (feasible(c, x0, options.feasibility_tol)) return x0;

  const Eigen::Index n = c.n;
  const Eigen::Index mi = c.G.rows();
  std::vector<Eigen::Index> violated;
  const Vector viol = c.G * x0 - c.bg;
  for (Eigen::Index i = 0; i < mi; ++i) {
    if (viol(i) > options.feasibility_tol) violated.push_back(i);
  }
  if (violated.empty()) {
    // Equality residual only: projection failed to converge numerically.
    const Vector x1 = project_equalities(c, x0);
    if (feasible(c, x1, options.feasibility_tol)) return x1;
    return std::nullopt;
  }
  const Eigen::Index nv = static_cast<Eigen::Index>(violated.size());
  const Eigen::Index N = n + nv;

  Matrix H = kPhase1Ridge * Matrix::Identity(N, N);
  Vector f(N);
  f.head(n) = -kPhase1Ridge * x0;
  f.tail(nv).setOnes();

  Matrix E = Matrix::Zero(c.E.rows(), N);
  if (c.E.rows() > 0) E.leftCols(n) = c.E;

  Matrix G = Matrix::Zero(mi + nv, N);
  Vector bg = Vector::Zero(mi + nv);
  G.topLeftCorner(mi, n) = c.G;
  bg.head(mi) = c.bg;
  Vector z(N);
  z.head(n) = x0;
  for (Eigen::Index v = 0; v < nv; ++v) {
    G(violated[static_cast<std::size_t>(v)], n + v) = -1.0;
    G(mi + v, n + v) = -1.0;
    z(n + v) = viol(violated[static_cast<std::size_t>(v)]);
  }

  auto working = initial_working_set(E, G, bg, z, options.feasibility_tol);
  const int cap = 50 * static_cast<int>(N + E.rows() + G.rows() + 1);
  CoreResult r = active_set(H, f, E, c.be, G, bg, z, std::move(working), cap, false);
  if (iterations) *iterations += r.iterations;
  if (r.status != QpStatus::kOptimal) return std::nullopt;
  Vector x = r.x.head(n);
  if (feasible(c, x, options.feasibility_tol)) return x;
  return std::nullopt;
}

}  // namespace

QpProblem make_qp(Matrix H, Vector f) {
  QpProblem p;
  const Eigen::Index n = f.size();
  p.H = std::move(H);
  p.f = std::move(f);
  p.Aeq.resize(0, n);
  p.beq.resize(0);
  p.A.resize(0, n);
  p.b.resize(0);
  p.lb = Vector::Constant(n, -kInf);
  p.ub = Vector::Constant(n, kInf);
  return p;
}

const char* to_string(QpStatus status) {
  switch (status) {
    case QpStatus::kOptimal:
      return "optimal";
    case QpStatus::kInfeasible:
      return "infeasible";
    case QpStatus::kUnbounded:
      return "unbounded";
    case QpStatus::kMaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

double KktResiduals::max() const {
  return std::max({stationarity, primal, dual, complementarity});
}

double qp_objective(const QpProblem& prob, const Vector& x) {
  return 0.5 * x.dot(prob.H * x) + prob.f.dot(x);
}

double max_violation(const QpProblem& prob, const Vector& x) {
  double v = 0.0;
  if (prob.Aeq.rows() > 0) v = std::max(v, inf_norm(prob.Aeq * x - prob.beq));
  if (prob.A.rows() > 0) v = std::max(v, (prob.A * x - prob.b).maxCoeff());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (prob.lb.size()) v = std::max(v, prob.lb(i) - x(i));
    if (prob.ub.size()) v = std::max(v, x(i) - prob.ub(i));
  }
  return v;
}

KktResiduals kkt_residuals(const QpProblem& prob, const QpSolution& sol) {
  const Eigen::Index n = prob.dim();
  const Vector& x = sol.x;
  auto or_zero = [](const Vector& v, Eigen::Index size) {
    return v.size() == size ? v : Vector::Zero(size);
  };
  const Vector mu_eq = or_zero(sol.mult_eq, prob.Aeq.rows());
  const Vector nu = or_zero(sol.mult_ineq, prob.A.rows());
  const Vector nl = or_zero(sol.mult_lower, n);
  const Vector nu_up = or_zero(sol.mult_upper, n);

  KktResiduals k;
  Vector grad = prob.H * x + prob.f - nl + nu_up;
  if (prob.Aeq.rows() > 0) grad += prob.Aeq.transpose() * mu_eq;
  if (prob.A.rows() > 0) grad += prob.A.transpose() * nu;
  k.stationarity = inf_norm(grad);
  k.primal = max_violation(prob, x);

  double min_mult = 0.0;
  if (nu.size()) min_mult = std::min(min_mult, nu.minCoeff());
  if (n) min_mult = std::min({min_mult, nl.minCoeff(), nu_up.minCoeff()});
  k.dual = -min_mult;

  double comp = 0.0;
  if (prob.A.rows() > 0) {
    comp = inf_norm(nu.cwiseProduct(prob.A * x - prob.b));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (prob.lb.size() && std::isfinite(prob.lb(i))) {
      comp = std::max(comp, std::abs(nl(i) * (x(i) - prob.lb(i))));
    }
    if (prob.ub.size() && std::isfinite(prob.ub(i))) {
      comp = std::max(comp, std::abs(nu_up(i) * (prob.ub(i) - x(i))));
    }
  }
  k.complementarity = comp;
  return k;
}

std::optional<Vector> phase1_feasible(const QpProblem& prob, const QpOptions& options) {
  validate(prob);
  const Canonical c = canonicalize(prob, options.feasibility_tol);
  if (!c.infeasible.empty()) return std::nullopt;
  return phase1(c, Vector::Zero(c.n), options, nullptr);
}

QpSolution solve_qp(const QpProblem& prob, const std::optional<Vector>& x0,
                    const QpOptions& options) {
  validate(prob);
  const int n = prob.dim();
  if (x0 && x0->size() != n) throw InputError("malformed QP: x0 length");

  QpSolution sol;
  sol.mult_eq = Vector::Zero(prob.Aeq.rows());
  sol.mult_ineq = Vector::Zero(prob.A.rows());
  sol.mult_lower = Vector::Zero(n);
  sol.mult_upper = Vector::Zero(n);
  sol.x = x0 ? *x0 : Vector::Zero(n);

  const Canonical c = canonicalize(prob, options.feasibility_tol);
  sol.dropped_equalities = c.dropped;
  if (!c.infeasible.empty()) {
    sol.status = QpStatus::kInfeasible;
    sol.message = c.infeasible;
    return sol;
  }

  std::optional<Vector> start;
  if (x0 && feasible(c, *x0, options.feasibility_tol)) {
    start = *x0;
  } else {
    start = phase1(c, sol.x, options, &sol.iterations);
  }
  if (!start) {
    sol.status = QpStatus::kInfeasible;
    sol.message = "no point satisfies the constraints (phase-1 slack is positive)";
    return sol;
  }

  auto working = initial_working_set(c.E, c.G, c.bg, *start, options.feasibility_tol);
  CoreResult r = active_set(c.H, c.f, c.E, c.be, c.G, c.bg, *start, std::move(working),
                            iteration_cap(c, options), options.record_trace);
  sol.iterations += r.iterations;
  sol.status = r.status;
  sol.message = r.message;
  sol.x = std::move(r.x);
  sol.objective_trace = std::move(r.trace);

  for (Eigen::Index r_i = 0; r_i < r.lam_eq.size(); ++r_i) {
    const auto& o = c.eq_origin[static_cast<std::size_t>(r_i)];
    const double lam = r.lam_eq(r_i) / o.scale;
    if (o.kind == RowKind::kGeneral) {
      sol.mult_eq(o.index) = lam;
    } else if (lam >= 0.0) {
      sol.mult_upper(o.index) = lam;
    } else {
      sol.mult_lower(o.index) = -lam;
    }
  }
  for (Eigen::Index i = 0; i < r.mu.size(); ++i) {
    const auto& o = c.ineq_origin[static_cast<std::size_t>(i)];
    const double mu = r.mu(i) / o.scale;
    switch (o.kind) {
      case RowKind::kGeneral:
        sol.mult_ineq(o.index) = mu;
        break;
      case RowKind::kLower:
        sol.mult_lower(o.index) = mu;
        break;
      case RowKind::kUpper:
        sol.mult_upper(o.index) = mu;
        break;
      case RowKind::kFixed:
        break;
    }
  }
  for (int w : r.working) {
    const auto& o = c.ineq_origin[static_cast<std::size_t>(w)];
    if (o.kind == RowKind::kGeneral) sol.active_ineq.push_back(o.index);
  }
  std::sort(sol.active_ineq.begin(), sol.active_ineq.end());
  sol.kkt = kkt_residuals(prob, sol);
  return sol;
}

}  // namespace scorecard
