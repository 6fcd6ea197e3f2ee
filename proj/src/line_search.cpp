#include <cmath>
#include <limits>

#include "scorecard/errors.hpp"
#include "scorecard/problems.hpp"

namespace scorecard {
namespace {

constexpr int kMaxDoublings = 60;
constexpr int kMaxEvaluations = 100;

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

}  // namespace

RootResult line_search_root(const std::function<double(double)>& g,
                            std::pair<double, double> bracket, double tol) {
  auto [lo, hi] = bracket;
  if (!(lo < hi)) throw InputError("line search bracket must satisfy lo < hi");

  RootResult out;
  auto eval = [&](double x) {
    const double v = g(x);
    if (!std::isfinite(v)) throw NumericalError("line search function returned a non-finite value");
    ++out.evaluations;
    out.trace.push_back({x, v});
    return v;
  };
  auto done = [&](double x, double v) {
    out.root = x;
    out.value = v;
    return out;
  };

  double glo = eval(lo);
  if (std::abs(glo) <= tol) return done(lo, glo);
  double ghi = eval(hi);
  if (std::abs(ghi) <= tol) return done(hi, ghi);

  for (int k = 0; k < kMaxDoublings && !opposite(glo, ghi); ++k) {
    const double width = hi - lo;
    const double new_lo = lo > 0.0 ? 0.5 * lo : lo - width;
    const double g_new_lo = eval(new_lo);
    if (std::abs(g_new_lo) <= tol) return done(new_lo, g_new_lo);
    if (opposite(g_new_lo, glo)) {
      hi = lo;
      ghi = glo;
      lo = new_lo;
      glo = g_new_lo;
      break;
    }
    lo = new_lo;
    glo = g_new_lo;
    const double new_hi = hi + width;
    const double g_new_hi = eval(new_hi);
    if (std::abs(g_new_hi) <= tol) return done(new_hi, g_new_hi);
    if (opposite(g_new_hi, ghi)) {
      lo = hi;
      glo = ghi;
      hi = new_hi;
      ghi = g_new_hi;
      break;
    }
    hi = new_hi;
    ghi = g_new_hi;
  }
  if (!opposite(glo, ghi)) {
    throw NumericalError("no sign change found after " + std::to_string(kMaxDoublings) +
                         " bracket doublings");
  }

  // Secant on the bracket ends. When one end survives twice in a row its
  // value is halved (Illinois). Bisection replaces the secant step when over
  // two iterations neither the bracket width nor |g| has halved.
  double width_before = std::numeric_limits<double>::infinity();
  double width_prev = width_before;
  double resid_before = width_before;
  double resid_prev = width_before;
  int side = 0;  // -1: lo replaced last, +1: hi replaced last
  const int budget = out.evaluations + kMaxEvaluations;
  while (out.evaluations < budget) {
    double x = hi - ghi * (hi - lo) / (ghi - glo);
    const bool stalled = (hi - lo) > 0.5 * width_before && resid_prev > 0.5 * resid_before;
    if (!(x > lo && x < hi) || stalled) x = 0.5 * (lo + hi);
    const double v = eval(x);
    if (std::abs(v) <= tol) return done(x, v);
    if (opposite(v, glo)) {
      hi = x;
      ghi = v;
      if (side == 1) glo *= 0.5;
      side = 1;
    } else {
      lo = x;
      glo = v;
      if (side == -1) ghi *= 0.5;
      side = -1;
    }
    width_before = width_prev;
    width_prev = hi - lo;
    resid_before = resid_prev;
    resid_prev = std::abs(v);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi))) {
      break;
    }
  }
  throw NumericalError("line search did not reach |g| <= " + std::to_string(tol));
}

}  // namespace scorecard
