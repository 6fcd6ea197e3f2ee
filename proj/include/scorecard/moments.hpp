#pragma once

#include <optional>

#include <Eigen/Dense>

namespace scorecard {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Class-conditional score moments of the indicator variables.
struct MomentSet {
  Vector mean_good;  // MG
  Vector mean_bad;   // MB
  Matrix cov_good;   // CG
  Matrix cov_bad;    // CB
  Matrix pooled;     // C = (CG + CB) / 2
  Vector diff;       // d = MG - MB
  Vector centering;  // e = MG + MB
  double n_good = 0.0;
  double n_bad = 0.0;

  int dim() const { return static_cast<int>(diff.size()); }
};

/// Rows are observations. Optional weights are frequency weights: a row of
/// weight w counts as w identical rows, and covariances use (sum w - 1).
MomentSet compute_moments(const Matrix& goods, const Matrix& bads,
                          const std::optional<Vector>& good_weights = std::nullopt,
                          const std::optional<Vector>& bad_weights = std::nullopt);

/// (d'S)^2 / (S'CS). Throws NumericalError when the pooled score variance is ~0.
double divergence(const Vector& s, const MomentSet& m);

struct WoeScaling {
  double beta = 1.0;
  Vector weights;  // beta * T, satisfies W'CW = d'W
};

/// Rescales T onto the weight-of-evidence scale. Requires d'T > 0.
WoeScaling woe_scale(const Vector& t, const MomentSet& m);

/// |S'CS - d'S| <= tol * max(1, |d'S|)
bool check_woe(const Vector& s, const MomentSet& m, double tol);

/// S'CS - d'S, the signed distance from the weight-of-evidence surface.
double woe_gap(const Vector& s, const MomentSet& m);

}  // namespace scorecard
