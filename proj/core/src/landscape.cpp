#include "reluland/landscape.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "reluland/errors.hpp"

namespace reluland {

double GradientVector::max_norm() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Integrals of N and x*N over one affine segment, in local coordinates.
struct SegmentMoments {
  double n0;   // int N
  double n1;   // int x N
  double nn;   // int N^2
};

SegmentMoments segment_moments(const Segment& s) {
  const double d = s.hi - s.lo;
  const double v = s.value_lo;
  const double m = s.slope;
  return {d * (v + 0.5 * m * d), s.lo * d * v + (s.lo * m + v) * d * d / 2.0 + m * d * d * d / 3.0,
          d * (v * v + v * m * d + m * m * d * d / 3.0)};
}

double risk_with_sq(const Params& p, const Target& t, double sq) {
  double nn = 0.0;
  double nf = 0.0;
  for (const Segment& s : linear_pieces(p, t.lo(), t.hi())) {
    const SegmentMoments mom = segment_moments(s);
    const Primitives pl = t.cumulative(s.lo);
    const Primitives ph = t.cumulative(s.hi);
    const double f0 = ph.m0 - pl.m0;
    const double f1 = ph.m1 - pl.m1;
    nn += mom.nn;
    nf += s.value_lo * f0 + s.slope * (f1 - s.lo * f0);
  }
  return std::max(0.0, nn - 2.0 * nf + sq);
}

// Points where the integrand of the smoothed quantities changes character.
std::vector<double> smooth_split_points(const Params& p, const Target& t, const SmoothActivation* act) {
  std::vector<double> pts{t.lo(), t.hi()};
  for (double x : t.interior_breakpoints()) pts.push_back(x);
  for (int j = 0; j < p.width(); ++j) {
    if (p.w(j) == 0.0) continue;
    pts.push_back(-p.b(j) / p.w(j));
    if (act != nullptr) {
      for (double offset : {-40.0, 0.0, 40.0}) {
        const double z = (act->shift() + offset) / act->r();
        pts.push_back((z - p.b(j)) / p.w(j));
      }
    }
  }
  std::vector<double> out;
  for (double x : pts)
    if (x >= t.lo() && x <= t.hi()) out.push_back(x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double integrate_split(const std::function<double(double)>& f, const std::vector<double>& pts,
                       const QuadratureOptions& opts) {
  const std::size_t panels = std::max<std::size_t>(pts.size() - 1, 1);
  QuadratureOptions local = opts;
  local.abs_tol = opts.abs_tol / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += integrate(f, pts[i], pts[i + 1], local).value;
  return total;
}

}  // namespace

double risk(const Params& p, const Target& t) { return risk_with_sq(p, t, t.total_sq_integral()); }

double risk(const Params& p, const Target& t, const QuadratureOptions& opts) {
  return risk_with_sq(p, t, t.sq_integral(t.lo(), t.hi(), opts));
}

double risk_by_quadrature(const Params& p, const Target& t, const QuadratureOptions& opts) {
  const std::vector<double> pts = smooth_split_points(p, t, nullptr);
  return integrate_split(
      [&](double x) {
        const double r = realize(p, x) - t(x);
        return r * r;
      },
      pts, opts);
}

GradientVector grad(const Params& p, const Target& t) {
  const double lo = t.lo();
  const double hi = t.hi();
  const std::vector<Segment> segs = linear_pieces(p, lo, hi);

  // Running residual moments R0(x) = int_lo^x (N - f), R1(x) = int_lo^x x (N - f)
  // at every segment boundary.
  std::vector<double> grid{lo};
  std::vector<double> r0{0.0};
  std::vector<double> r1{0.0};
  Primitives prev = t.cumulative(lo);
  for (const Segment& s : segs) {
    const SegmentMoments mom = segment_moments(s);
    const Primitives cur = t.cumulative(s.hi);
    r0.push_back(r0.back() + mom.n0 - (cur.m0 - prev.m0));
    r1.push_back(r1.back() + mom.n1 - (cur.m1 - prev.m1));
    grid.push_back(s.hi);
    prev = cur;
  }
  auto at = [&](double x) -> std::size_t {
    return static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), x) - grid.begin());
  };

  std::vector<double> g(p.size(), 0.0);
  const std::size_t last = grid.size() - 1;
  for (int j = 0; j < p.width(); ++j) {
    const double w = p.w(j);
    const double b = p.b(j);
    std::size_t il = 0;
    std::size_t ih = 0;  // empty when il == ih
    if (w > 0.0) {
      const double k = -b / w;
      if (k < hi) {
        il = k <= lo ? 0 : at(k);
        ih = last;
      }
    } else if (w < 0.0) {
      const double k = -b / w;
      if (k > lo) {
        il = 0;
        ih = k >= hi ? last : at(k);
      }
    } else if (b > 0.0) {
      il = 0;
      ih = last;
    }
    const double i0 = r0[ih] - r0[il];
    const double i1 = r1[ih] - r1[il];
    g[p.idx_w(j)] = 2.0 * p.v(j) * i1;
    g[p.idx_b(j)] = 2.0 * p.v(j) * i0;
    g[p.idx_v(j)] = 2.0 * (b * i0 + w * i1);
  }
  g[p.idx_c()] = 2.0 * r0[last];
  return GradientVector(std::move(g));
}

double risk_smooth(const Params& p, const Target& t, const SmoothActivation& act, const QuadratureOptions& opts) {
  const std::vector<double> pts = smooth_split_points(p, t, &act);
  return integrate_split(
      [&](double x) {
        const double r = realize_smooth(p, x, act) - t(x);
        return r * r;
      },
      pts, opts);
}

GradientVector grad_smooth(const Params& p, const Target& t, const SmoothActivation& act,
                           const QuadratureOptions& opts) {
  const std::vector<double> pts = smooth_split_points(p, t, &act);
  auto residual = [&](double x) { return realize_smooth(p, x, act) - t(x); };
  std::vector<double> g(p.size(), 0.0);
  for (int j = 0; j < p.width(); ++j) {
    const double v = p.v(j);
    auto z = [&](double x) { return preactivation(p, j, x); };
    g[p.idx_w(j)] =
        integrate_split([&](double x) { return 2.0 * v * act.derivative(z(x)) * x * residual(x); }, pts, opts);
    g[p.idx_b(j)] = integrate_split([&](double x) { return 2.0 * v * act.derivative(z(x)) * residual(x); }, pts, opts);
    g[p.idx_v(j)] = integrate_split([&](double x) { return 2.0 * act(z(x)) * residual(x); }, pts, opts);
  }
  g[p.idx_c()] = integrate_split([&](double x) { return 2.0 * residual(x); }, pts, opts);
  return GradientVector(std::move(g));
}

// ---------------------------------------------------------------------------
// Hessians

double HessianReport::max_abs_eigenvalue() const {
  double m = 0.0;
  for (double l : eigenvalues) m = std::max(m, std::abs(l));
  return m;
}

HessianReport make_hessian_report(std::vector<double> matrix, int dim, std::vector<std::size_t> coords,
                                  double rank_tol) {
  if (dim <= 0 || matrix.size() != static_cast<std::size_t>(dim * dim))
    throw DomainError("Hessian matrix has the wrong size");
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = matrix[static_cast<std::size_t>(i * dim + j)];
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) matrix[static_cast<std::size_t>(i * dim + j)] = sym(i, j);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  HessianReport rep;
  rep.dim = dim;
  rep.coords = std::move(coords);
  rep.matrix = std::move(matrix);
  rep.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
  rep.rank_tol = rank_tol;
  const double cutoff = rank_tol * rep.max_abs_eigenvalue();
  rep.numerical_rank = static_cast<int>(
      std::count_if(rep.eigenvalues.begin(), rep.eigenvalues.end(), [&](double l) { return std::abs(l) > cutoff; }));
  return rep;
}

bool is_smooth_point(const Params& p, double lo, double hi) {
  for (int j = 0; j < p.width(); ++j) {
    if (p.w(j) * lo + p.b(j) == 0.0 || p.w(j) * hi + p.b(j) == 0.0) return false;
  }
  return true;
}

HessianReport hessian_fd(const Params& p, const Target& t, double step, HessianCoords coords, double rank_tol) {
  if (!(step > 0.0)) throw DomainError("Hessian step must be positive");
  if (!is_smooth_point(p, t.lo(), t.hi()))
    throw NonSmoothPointError("Hessian requested at a point where a kink sits on a domain endpoint");

  std::vector<std::size_t> idx;
  if (coords == HessianCoords::All) {
    for (std::size_t i = 0; i < p.size(); ++i) idx.push_back(i);
  } else {
    idx = {p.idx_w(0), p.idx_b(0), p.idx_v(0), p.idx_c()};
  }
  const int dim = static_cast<int>(idx.size());
  std::vector<double> m(static_cast<std::size_t>(dim * dim), 0.0);
  for (int col = 0; col < dim; ++col) {
    Params plus = p;
    Params minus = p;
    plus[idx[static_cast<std::size_t>(col)]] += step;
    minus[idx[static_cast<std::size_t>(col)]] -= step;
    const GradientVector gp = grad(plus, t);
    const GradientVector gm = grad(minus, t);
    for (int row = 0; row < dim; ++row) {
      const std::size_t k = idx[static_cast<std::size_t>(row)];
      m[static_cast<std::size_t>(row * dim + col)] = (gp[k] - gm[k]) / (2.0 * step);
    }
  }
  return make_hessian_report(std::move(m), dim, std::move(idx), rank_tol);
}

HessianReport closed_hessian_M(double q, double theta1, const BenchmarkTarget& t, double rank_tol) {
  if (!(q > t.alpha() && q < t.beta())) throw DomainError("closed-form Hessian needs alpha < q < beta");
  if (!(theta1 > 0.0)) throw DomainError("closed-form Hessian needs theta1 > 0");
  const double a = t.a();
  const double b = t.b();
  const double L = b - a;
  const double t1 = theta1;
  const double om = 1.0 - q;
  const double op = 1.0 + 3.0 * q;
  const double sq = std::sqrt(om) * std::sqrt(op);
  const double den2 = t1 * t1 * L * om * om * op * op;

  const double h11 = (a * a * om * om + b * b * (1 + 2 * q) * (1 + 2 * q) + a * b * (1 + 4 * q - 5 * q * q)) / (6 * den2);
  const double h12 = (a * (1 - q * q) + b * (1 + 4 * q + q * q)) / (4 * den2);
  const double h13 = L * std::sqrt(om) * (a * om + b * (2 + q)) / (6 * std::sqrt(op));
  const double h14 = (a * om + b * (1 + q)) / (2 * t1 * sq);
  const double h22 = (1 + 2 * q) / (2 * den2);
  const double h23 = L * std::sqrt(om) / (2 * std::sqrt(op));
  const double h24 = 1.0 / (t1 * sq);
  const double h33 = 2.0 / 3.0 * t1 * t1 * L * L * L * om * om * om;
  const double h34 = t1 * L * L * om * om;
  const double h44 = 2.0 * L;

  std::vector<double> m{h11, h12, h13, h14,  //
                        h12, h22, h23, h24,  //
                        h13, h23, h33, h34,  //
                        h14, h24, h34, h44};
  return make_hessian_report(std::move(m), 4, {}, rank_tol);
}

std::string_view to_string(CritClass c) {
  switch (c) {
    case CritClass::LocalMin:
      return "local_min";
    case CritClass::LocalMax:
      return "local_max";
    case CritClass::Saddle:
      return "saddle";
    case CritClass::Degenerate:
      return "degenerate";
  }
  return "degenerate";
}

CritClass classify(const HessianReport& report, double grad_norm, std::optional<int> expected_corank) {
  if (!(grad_norm < 1e-6)) throw NotCriticalError("classify: gradient norm is not below 1e-6");
  const double scale = report.max_abs_eigenvalue();
  if (scale == 0.0) return CritClass::Degenerate;
  const double cutoff = report.rank_tol * scale;
  int pos = 0;
  int neg = 0;
  for (double l : report.eigenvalues) {
    if (l > cutoff) ++pos;
    if (l < -cutoff) ++neg;
  }
  const int zero = report.dim - pos - neg;
  if (expected_corank && zero != *expected_corank) return CritClass::Degenerate;
  if (pos > 0 && neg > 0) return CritClass::Saddle;
  if (neg == 0) return CritClass::LocalMin;
  return CritClass::LocalMax;
}

}  // namespace reluland
