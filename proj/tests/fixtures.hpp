#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "scorecard/config.hpp"
#include "scorecard/constraints.hpp"
#include "scorecard/io.hpp"
#include "scorecard/model.hpp"
#include "scorecard/moments.hpp"
#include "scorecard/qp.hpp"

namespace fixtures {

using scorecard::Matrix;
using scorecard::Vector;

inline std::filesystem::path source_dir() { return SCORECARD_SOURCE_DIR; }
inline std::filesystem::path fraud_config_path() {
  return source_dir() / "configs" / "fraud_171.json";
}

inline const std::vector<int>& fraud_counts() {
  static const std::vector<int> counts = {7, 7, 7, 13, 8, 11, 4, 7, 4, 3, 7, 7, 4,
                                          8, 4, 6, 5, 5, 3, 4, 16, 5, 6, 10, 10};
  return counts;
}

inline const std::vector<int>& fraud_high() {
  static const std::vector<int> high = {7,   14,  21,  34,  42,  53,  57,  64,  68,
                                        71,  78,  85,  89,  97,  101, 107, 112, 117,
                                        120, 124, 140, 145, 151, 161, 171};
  return high;
}

/// Engineering spec written directly from the fraud-model j/k/a vectors.
inline scorecard::EngineeringSpec fraud_spec() {
  using scorecard::PatternSense;
  scorecard::EngineeringSpec spec;
  spec.centering = true;
  spec.noinform = true;
  spec.fixes = {1, 8, 58, 65, 90, 91};
  spec.equalities = {{69, 98}, {69, 118}, {69, 121}};
  const std::vector<int> j = {
      2,   3,   4,   5,   9,   10,  11,  12,  16,  17,  18,  19,  24,  25,  26,  27,  28,  29,
      30,  31,  32,  36,  37,  38,  39,  40,  43,  44,  45,  46,  47,  48,  49,  50,  51,  54,
      55,  59,  60,  61,  62,  66,  69,  69,  73,  74,  75,  76,  80,  81,  82,  83,  86,  87,
      92,  93,  94,  95,  98,  99,  102, 103, 104, 105, 108, 109, 110, 118, 121, 122, 125, 126,
      127, 128, 129, 130, 131, 132, 133, 134, 135, 136, 137, 138, 141, 142, 143, 147, 148, 149,
      152, 153, 154, 155, 156, 157, 158, 159, 162, 163, 164, 165, 166, 167, 168, 169};
  std::vector<int> k(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) k[i] = j[i] + 1;
  k[12] = 31;
  k[13] = 30;
  k[43] = 71;
  std::vector<int> a(j.size(), 1);
  for (int i = 0; i < 4; ++i) a[i] = -1;
  for (int i = 21; i < 41; ++i) a[i] = -1;
  for (int i = 42; i < 84; ++i) a[i] = -1;
  for (std::size_t i = 0; i < j.size(); ++i) {
    // Row a*S_j - a*S_k <= 0.
    spec.patterns.push_back(
        {j[i], k[i], a[i] == 1 ? PatternSense::kLessEqual : PatternSense::kGreaterEqual});
  }
  spec.inweights = {{2, 0.5}, {13, 0.3}};
  return spec;
}

inline scorecard::RunConfig fraud_config() { return scorecard::load_config(fraud_config_path()); }

/// Development and validation moments of the synthetic 171-attribute dataset.
struct FraudData {
  scorecard::RunConfig cfg;
  scorecard::SampleSplit split;
  scorecard::MomentSet dev;
  scorecard::MomentSet val;
  scorecard::IndexMap map;
  scorecard::ConstraintSet cs;  // includes in-weights
};

inline const FraudData& fraud_data() {
  static const FraudData data = [] {
    FraudData d;
    d.cfg = fraud_config();
    const auto raw = scorecard::generate_synthetic(d.cfg.layout, d.cfg.synthetic);
    d.split = scorecard::split_dataset(raw, d.cfg.split);
    d.dev = scorecard::moments_of(d.split.dev_goods, d.split.dev_bads);
    d.val = scorecard::moments_of(d.split.val_goods, d.split.val_bads);
    d.map = scorecard::build_index_map(d.cfg.layout);
    d.cs = scorecard::assemble(d.cfg.spec, d.dev, d.map);
    return d;
  }();
  return data;
}

/// Moments with pooled covariance C and mean difference d. MG = d, MB = 0.
inline scorecard::MomentSet moments_from(const Matrix& C, const Vector& d) {
  scorecard::MomentSet m;
  m.mean_good = d;
  m.mean_bad = Vector::Zero(d.size());
  m.cov_good = C;
  m.cov_bad = C;
  m.pooled = C;
  m.diff = d;
  m.centering = d;
  m.n_good = m.n_bad = 100;
  return m;
}

inline Matrix random_spd(int n, std::mt19937_64& rng, double shift = 0.1) {
  std::normal_distribution<double> nd;
  Matrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = nd(rng);
  return G * G.transpose() / n + shift * Matrix::Identity(n, n);
}

inline Vector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

/// Strictly convex QP built around a known feasible point so it is never infeasible.
inline scorecard::QpProblem random_qp(int n, int meq, int mineq, bool with_bounds,
                                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  auto qp = scorecard::make_qp(random_spd(n, rng), random_vector(n, rng));
  const Vector x0 = random_vector(n, rng);
  if (meq > 0) {
    qp.Aeq = Matrix(meq, n);
    for (int i = 0; i < meq; ++i) qp.Aeq.row(i) = random_vector(n, rng).transpose();
    qp.beq = qp.Aeq * x0;
  }
  if (mineq > 0) {
    qp.A = Matrix(mineq, n);
    for (int i = 0; i < mineq; ++i) qp.A.row(i) = random_vector(n, rng).transpose();
    qp.b = qp.A * x0 + Vector::NullaryExpr(mineq, [&](Eigen::Index) { return ud(rng); });
  }
  if (with_bounds) {
    qp.lb = x0 - Vector::NullaryExpr(n, [&](Eigen::Index) { return 0.1 + ud(rng); });
    qp.ub = x0 + Vector::NullaryExpr(n, [&](Eigen::Index) { return 0.1 + ud(rng); });
  }
  return qp;
}

/// Direct solve of the equality-constrained KKT system.
inline Vector kkt_direct(const scorecard::QpProblem& qp) {
  const int n = qp.dim();
  const int m = static_cast<int>(qp.Aeq.rows());
  Matrix K = Matrix::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = qp.H;
  K.topRightCorner(n, m) = qp.Aeq.transpose();
  K.bottomLeftCorner(m, n) = qp.Aeq;
  Vector rhs(n + m);
  rhs << -qp.f, qp.beq;
  return K.fullPivLu().solve(rhs).head(n);
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("scorecard_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
