#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scorecard/constraints.hpp"
#include "scorecard/moments.hpp"
#include "scorecard/qp.hpp"

namespace scorecard {

enum class ProblemKind { kClassic, kPenalized, kInWeight, kRange, kRegression };

const char* to_string(ProblemKind kind);
/// Accepts "classic", "penalized", "inweight", "range", "regression".
ProblemKind parse_problem_kind(const std::string& name);

struct PhiStep {
  double phi = 0.0;
  double gap = 0.0;  // S(phi)'CS(phi) - d'S(phi)
};

struct ScorecardSolution {
  ProblemKind kind = ProblemKind::kClassic;
  Vector weights;  // S, on the weight-of-evidence scale for problems 1-4
  double beta = 1.0;
  std::optional<double> phi_star;
  double lambda = 0.0;
  std::optional<double> delta;
  std::optional<double> div_floor;
  std::optional<double> intercept;
  // Regression only: factor taking S to the weight-of-evidence scale.
  std::optional<double> woe_factor;
  double div_dev = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> div_val;
  Vector equality_residual;  // Ac S
  Vector pattern_slack;      // Ap S (<= 0 when feasible)
  Vector inweight_residual;  // Ai S - IW
  std::vector<PhiStep> trace;
  int qp_iterations = 0;
};

/// Diagonal range-engineering emphasis R and targets T.
struct RangeTargets {
  Vector emphasis;
  Vector targets;
};

struct ProblemOptions {
  QpOptions qp;
  // Root accepted when |g| <= root_tol * max(1, |d'S|).
  double root_tol = 1e-9;
  std::pair<double, double> phi_bracket{0.01, 4.0};
  std::optional<Vector> warm_start;
  // When set, div_val is reported on these moments.
  const MomentSet* validation = nullptr;
};

ScorecardSolution solve_classic(const MomentSet& m, const ConstraintSet& cs, double delta = 1.0,
                                const ProblemOptions& options = {});

ScorecardSolution solve_penalized(const MomentSet& m, const ConstraintSet& cs, double delta,
                                  double lambda, const ProblemOptions& options = {});

struct LambdaPoint {
  double lambda = 0.0;
  bool ok = false;
  double div_dev = 0.0;
  double div_val = 0.0;
  std::string message;
};

struct LambdaTuning {
  double best = 0.0;
  std::vector<LambdaPoint> points;  // grid order
};

/// Grid search for the penalty with the largest validation divergence; ties
/// go to the smaller lambda. Failed grid points are skipped.
LambdaTuning tune_lambda(const MomentSet& dev, const MomentSet& val, const ConstraintSet& cs,
                         double delta, const std::vector<double>& grid,
                         const ProblemOptions& options = {});

struct PhiPoint {
  Vector weights;
  double gap = 0.0;
  QpSolution qp;
};

/// One QP of the in-weighting family at a fixed multiplier phi.
PhiPoint solve_inweight_at_phi(const MomentSet& m, const ConstraintSet& cs, double lambda,
                               double phi, const std::optional<Vector>& warm_start = std::nullopt,
                               const QpOptions& qp_options = {});

ScorecardSolution solve_inweight(const MomentSet& m, const ConstraintSet& cs, double lambda,
                                 const ProblemOptions& options = {});

PhiPoint solve_range_at_phi(const MomentSet& m, const ConstraintSet& cs, double lambda,
                            const RangeTargets& targets, double div_floor, double phi,
                            const std::optional<Vector>& warm_start = std::nullopt,
                            const QpOptions& qp_options = {});

ScorecardSolution solve_range(const MomentSet& m, const ConstraintSet& cs, double lambda,
                              const RangeTargets& targets, double div_floor,
                              const ProblemOptions& options = {});

/// Least squares with an unpenalized intercept column prepended to rows.
/// dev_moments, when given, supply the reported divergence and WoE factor.
ScorecardSolution solve_regression(const Matrix& rows, const Vector& y, const ConstraintSet& cs,
                                   double lambda, const MomentSet* dev_moments = nullptr,
                                   const ProblemOptions& options = {});

struct RootResult {
  double root = 0.0;
  double value = 0.0;
  int evaluations = 0;
  std::vector<PhiStep> trace;
};

/// Bracketed secant with bisection fallback. If g(lo) and g(hi) share a
/// sign the bracket is widened geometrically (at most 60 doublings). Throws
/// NumericalError when no sign change or no root within 100 evaluations.
RootResult line_search_root(const std::function<double(double)>& g,
                            std::pair<double, double> bracket, double tol);

}  // namespace scorecard
