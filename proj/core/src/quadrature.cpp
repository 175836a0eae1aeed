#include "reluland/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "reluland/errors.hpp"

namespace reluland {

namespace {

using GaussKronrod15 = boost::math::quadrature::gauss_kronrod<double, 15>;

constexpr std::size_t kMaxIntervals = 1u << 18;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

struct GkState {
  const std::function<double(double)>* f;
  int max_depth;
  std::size_t intervals = 0;
  bool exhausted = false;
};

struct Panel {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

// Error estimates at this multiple of eps * int |f| are rounding noise;
// refining such a panel cannot improve it.
constexpr double kRoundoffFloor = 64.0 * std::numeric_limits<double>::epsilon();

Panel gk_panel(const std::function<double(double)>& f, double lo, double hi) {
  Panel p;
  p.value = GaussKronrod15::integrate(f, lo, hi, 0, 0.0, &p.error, &p.l1);
  // Without recursion Boost reports the error of the rule mapped to [-1, 1]
  // and never rescales it (the value and L1 norm are rescaled).
  p.error *= 0.5 * (hi - lo);
  return p;
}

QuadratureResult gk_rule(const std::function<double(double)>& f, double lo, double hi) {
  const Panel p = gk_panel(f, lo, hi);
  return {p.value, p.error};
}

// Bisect until each panel meets its share of the absolute tolerance.
QuadratureResult gk_adaptive(GkState& st, double lo, double hi, double tol, int depth, const Panel& whole) {
  if (whole.error <= std::max(tol, kRoundoffFloor * whole.l1)) return {whole.value, whole.error};
  if (depth >= st.max_depth || st.intervals >= kMaxIntervals) {
    if (whole.error > tol) st.exhausted = true;
    return {whole.value, whole.error};
  }
  const double mid = 0.5 * (lo + hi);
  if (!(mid > lo && mid < hi)) {
    st.exhausted = true;
    return {whole.value, whole.error};
  }
  st.intervals += 2;
  const Panel left = gk_panel(*st.f, lo, mid);
  const Panel right = gk_panel(*st.f, mid, hi);
  // Once the refinement agrees with the coarse panel to rounding, stop.
  const double combined = left.value + right.value;
  if (left.error + right.error <= tol) return {combined, left.error + right.error};
  const QuadratureResult l = gk_adaptive(st, lo, mid, 0.5 * tol, depth + 1, left);
  const QuadratureResult r = gk_adaptive(st, mid, hi, 0.5 * tol, depth + 1, right);
  return {l.value + r.value, l.error + r.error};
}

// tanh-sinh takes a relative tolerance; derive it from a coarse magnitude and
// bisect panels whose (conservative) level-difference estimate misses tol.
QuadratureResult ts_adaptive(boost::math::quadrature::tanh_sinh<double>& ts,
                             const std::function<double(double)>& f, double lo, double hi, double tol, int depth,
                             int max_depth, bool& exhausted) {
  const double magnitude = std::max(std::abs(gk_rule(f, lo, hi).value), tol);
  const double rel = std::max(tol / magnitude, 4.0 * std::numeric_limits<double>::epsilon());
  double err = 0.0;
  double l1 = 0.0;
  const double v = ts.integrate(f, lo, hi, rel, &err, &l1);
  const double mid = 0.5 * (lo + hi);
  if (err <= tol || depth >= max_depth || !(mid > lo && mid < hi)) {
    if (err > tol) exhausted = true;
    return {v, err};
  }
  const QuadratureResult l = ts_adaptive(ts, f, lo, mid, 0.5 * tol, depth + 1, max_depth, exhausted);
  const QuadratureResult r = ts_adaptive(ts, f, mid, hi, 0.5 * tol, depth + 1, max_depth, exhausted);
  return {l.value + r.value, l.error + r.error};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& opts) {
  if (!(opts.abs_tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  if (lo == hi) return {0.0, 0.0};
  if (hi < lo) {
    QuadratureResult r = integrate(f, hi, lo, opts);
    r.value = -r.value;
    return r;
  }

  QuadratureResult result;
  bool ok = true;
  if (opts.backend == QuadratureBackend::GaussKronrod) {
    GkState st{&f, opts.max_depth};
    result = gk_adaptive(st, lo, hi, opts.abs_tol, 0, gk_panel(f, lo, hi));
    ok = !st.exhausted;
  } else {
    boost::math::quadrature::tanh_sinh<double> ts;
    bool exhausted = false;
    result = ts_adaptive(ts, f, lo, hi, opts.abs_tol, 0, opts.max_depth, exhausted);
    ok = !exhausted;
  }

  if (!ok || !std::isfinite(result.value)) {
    throw AccuracyError("quadrature did not reach tolerance " + sci(opts.abs_tol) + " (error estimate " + sci(result.error) + ")",
                        result.value, result.error);
  }
  return result;
}

}  // namespace reluland
