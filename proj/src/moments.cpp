#include "scorecard/moments.hpp"

#include <cmath>
#include <string>

#include "scorecard/errors.hpp"

namespace scorecard {
namespace {

constexpr double kVarianceFloor = 1e-14;

struct ClassMoments {
  Vector mean;
  Matrix cov;
  double count;
};

ClassMoments class_moments(const Matrix& rows, const std::optional<Vector>& weights,
                           const char* label) {
  const Eigen::Index n = rows.rows();
  Vector w = weights ? *weights : Vector::Ones(n);
  if (w.size() != n) {
    throw InputError(std::string(label) + " weights length does not match row count");
  }
  if ((w.array() < 0.0).any()) {
    throw InputError(std::string(label) + " weights must be nonnegative");
  }
  const double total = w.sum();
  if (total <= 0.0) {
    throw NumericalError(std::string(label) + " class has all-zero weights");
  }
  if (total < 2.0) {
    throw NumericalError(std::string(label) +
                         " class is degenerate: fewer than 2 effective rows");
  }
  ClassMoments out;
  out.count = total;
  out.mean = rows.transpose() * w / total;
  const Matrix centered = rows.rowwise() - out.mean.transpose();
  out.cov = centered.transpose() * w.asDiagonal() * centered / (total - 1.0);
  // Exact symmetry keeps downstream factorizations honest.
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

}  // namespace

MomentSet compute_moments(const Matrix& goods, const Matrix& bads,
                          const std::optional<Vector>& good_weights,
                          const std::optional<Vector>& bad_weights) {
  if (goods.cols() != bads.cols()) {
    throw InputError("good and bad design matrices have different column counts");
  }
  auto g = class_moments(goods, good_weights, "good");
  auto b = class_moments(bads, bad_weights, "bad");

  MomentSet m;
  m.mean_good = std::move(g.mean);
  m.mean_bad = std::move(b.mean);
  m.cov_good = std::move(g.cov);
  m.cov_bad = std::move(b.cov);
  m.pooled = 0.5 * (m.cov_good + m.cov_bad);
  m.diff = m.mean_good - m.mean_bad;
  m.centering = m.mean_good + m.mean_bad;
  m.n_good = g.count;
  m.n_bad = b.count;
  return m;
}

double divergence(const Vector& s, const MomentSet& m) {
  const double var = s.dot(m.pooled * s);
  const double scale = std::max(1.0, s.squaredNorm() * m.pooled.diagonal().cwiseAbs().maxCoeff());
  if (var <= kVarianceFloor * scale) {
    throw NumericalError("score has zero pooled variance; divergence undefined");
  }
  const double mean_gap = m.diff.dot(s);
  return mean_gap * mean_gap / var;
}

WoeScaling woe_scale(const Vector& t, const MomentSet& m) {
  const double var = t.dot(m.pooled * t);
  if (var <= kVarianceFloor) {
    throw NumericalError("cannot rescale a score with zero pooled variance");
  }
  const double gap = m.diff.dot(t);
  if (gap <= 0.0) {
    throw NumericalError("d'T <= 0: rescaling to the weight-of-evidence scale would flip "
                         "or annihilate the score");
  }
  WoeScaling out;
  out.beta = gap / var;
  out.weights = out.beta * t;
  return out;
}

double woe_gap(const Vector& s, const MomentSet& m) {
  return s.dot(m.pooled * s) - m.diff.dot(s);
}

bool check_woe(const Vector& s, const MomentSet& m, double tol) {
  return std::abs(woe_gap(s, m)) <= tol * std::max(1.0, std::abs(m.diff.dot(s)));
}

}  // namespace scorecard
