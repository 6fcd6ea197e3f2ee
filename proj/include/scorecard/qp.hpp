#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scorecard/moments.hpp"

namespace scorecard {

/// minimize (1/2) x'Hx + f'x  s.t.  Aeq x = beq,  A x <= b,  lb <= x <= ub
///
/// Empty lb/ub mean unbounded; entries may be +-infinity.
struct QpProblem {
  Matrix H;
  Vector f;
  Matrix Aeq;
  Vector beq;
  Matrix A;
  Vector b;
  Vector lb;
  Vector ub;

  int dim() const { return static_cast<int>(f.size()); }
};

/// Fills unset blocks with correctly sized empties so callers only set
/// what they need.
QpProblem make_qp(Matrix H, Vector f);

enum class QpStatus { kOptimal, kInfeasible, kUnbounded, kMaxIterations };

const char* to_string(QpStatus status);

struct KktResiduals {
  double stationarity = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;

  double max() const;
};

struct QpSolution {
  Vector x;
  Vector mult_eq;     // free sign
  Vector mult_ineq;   // >= 0
  Vector mult_lower;  // >= 0
  Vector mult_upper;  // >= 0
  QpStatus status = QpStatus::kInfeasible;
  int iterations = 0;
  KktResiduals kkt;
  // Indices (into A) of general inequality rows in the final working set.
  std::vector<int> active_ineq;
  int dropped_equalities = 0;  // dependent Aeq rows removed
  std::vector<double> objective_trace;
  std::string message;

  bool optimal() const { return status == QpStatus::kOptimal; }
};

struct QpOptions {
  double feasibility_tol = 1e-9;
  double kkt_tol = 1e-6;
  int max_iterations = 0;  // 0: 50 * (n + number of constraints)
  bool record_trace = false;
};

/// Primal active-set method. If x0 is absent or infeasible a phase-1 LP
/// supplies the starting point. Throws InputError on malformed problems;
/// every numerical outcome is reported through QpSolution::status.
QpSolution solve_qp(const QpProblem& prob, const std::optional<Vector>& x0 = std::nullopt,
                    const QpOptions& options = {});

/// A point satisfying every constraint to the feasibility tolerance, found by
/// minimizing the total slack on violated inequalities. nullopt when the
/// system is infeasible.
std::optional<Vector> phase1_feasible(const QpProblem& prob, const QpOptions& options = {});

KktResiduals kkt_residuals(const QpProblem& prob, const QpSolution& sol);

double qp_objective(const QpProblem& prob, const Vector& x);

/// Largest violation of any constraint at x (0 when feasible).
double max_violation(const QpProblem& prob, const Vector& x);

}  // namespace scorecard
