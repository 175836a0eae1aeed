#include "reluland/enumerate.hpp"

#include <algorithm>
#include <cmath>

#include "reluland/errors.hpp"

namespace reluland {

namespace {

constexpr double kVwZeroTol = 1e-12;
constexpr double kRootTol = 1e-15;
constexpr double kClusterTol = 1e-9;

void require_unit_continuous(const PiecewisePolynomial& f) {
  if (f.lo() != 0.0 || f.hi() != 1.0) throw DomainError("kink enumeration expects a target on [0, 1]");
  if (!f.is_continuous()) throw DomainError("kink enumeration needs a continuous target");
}

// Drop coefficients that are rounding noise relative to `scale`.
Polynomial clean(const Polynomial& p, double scale) {
  std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
  for (double& x : c)
    if (std::abs(x) <= 1e-15 * scale) x = 0.0;
  return Polynomial(std::move(c));
}

// Moment residuals of a solution against f on [0, 1].
std::array<double, 3> residuals(const PiecewisePolynomial& f, const KinkSolution& s) {
  const double q = s.q;
  const double c = s.c;
  const double vw = s.vw;
  const double f_left = f.moment(0, 0.0, q);
  const double f_right = f.moment(0, q, 1.0);
  if (s.orientation == KinkOrientation::Increasing) {
    const double r = 1.0 - q;
    return {c * q - f_left, c * r + vw * r * r / 2.0 - f_right,
            c * (1.0 - q * q) / 2.0 + vw * (r * r * r / 3.0 + q * r * r / 2.0) - f.moment(1, q, 1.0)};
  }
  return {c * (1.0 - q) - f_right, c * q - vw * q * q / 2.0 - f_left,
          c * q * q / 2.0 - vw * q * q * q / 6.0 - f.moment(1, 0.0, q)};
}

void cluster_sorted(std::vector<double>& xs) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs)
    if (out.empty() || x - out.back() > kClusterTol) out.push_back(x);
  xs = std::move(out);
}

PiecewisePolynomial reflect(const PiecewisePolynomial& f) {
  const PiecewisePolynomial g = f.compose_affine(-1.0, 1.0);
  std::vector<double> bps(g.breakpoints().begin(), g.breakpoints().end());
  bps.front() = 0.0;
  bps.back() = 1.0;
  return PiecewisePolynomial(std::move(bps), {g.pieces().begin(), g.pieces().end()});
}

// Roots in (0, 1) of the increasing-kink equation, piece by piece.
std::vector<double> increasing_roots(const PiecewisePolynomial& f) {
  const Polynomial q = Polynomial::monomial(1);
  const Polynomial one_minus_q_sq{1.0, -2.0, 1.0};
  const Polynomial x = Polynomial::monomial(1);
  const auto bps = f.breakpoints();
  const std::size_t m = f.num_pieces();
  const double total = f.moment(0, 0.0, 1.0);

  std::vector<double> roots;
  for (std::size_t j = 0; j < m; ++j) {
    const double lo = bps[j];
    const double hi = bps[j + 1];
    const Polynomial anti = f.piece(j).antiderivative();
    const Polynomial xanti = (x * f.piece(j)).antiderivative();
    const double before = f.moment(0, 0.0, lo);
    const double tail0 = f.moment(0, hi, 1.0);
    const double tail1 = f.moment(1, hi, 1.0);

    // int_0^q f, int_q^1 f, int_q^1 x f as polynomials in q on this piece.
    const Polynomial left = anti + Polynomial::constant(before - anti(lo));
    const Polynomial right0 = Polynomial::constant(anti(hi) + tail0) - anti;
    const Polynomial right1 = Polynomial::constant(xanti(hi) + tail1) - xanti;

    const Polynomial t1 = one_minus_q_sq * left;
    const Polynomial t2 = 2.0 * q * (q + Polynomial::constant(2.0)) * right0;
    const Polynomial t3 = 6.0 * q * right1;
    const double scale = std::max({t1.scale(), t2.scale(), t3.scale()});
    Polynomial d = clean(t1 - t2 + t3, scale);

    if (d.scale() <= 1e-12 * scale) {
      // The equation holds on the whole piece; admissible only when every
      // point of the piece has vw = 0, which the exclusion rule discards.
      const Polynomial flat = left - Polynomial::constant(total) * q;
      if (flat.scale() <= 1e-12 * std::max({left.scale(), std::abs(total), 1e-300})) continue;
      throw DegeneracyError("kink equation vanishes identically on a piece");
    }
    // q = 0 is always a simple root and q = 1 a double root; both are
    // boundary kinks covered by the constant and affine cases.
    if (j == 0) d = divide(d, q).quotient;
    if (j + 1 == m) d = divide(d, one_minus_q_sq).quotient;
    if (d.is_zero()) continue;
    for (double r : roots_in(d, lo, hi, kRootTol))
      if (r > 0.0 && r < 1.0) roots.push_back(r);
  }
  cluster_sorted(roots);
  return roots;
}

}  // namespace

PiecewisePolynomial normalize_to_unit(const PiecewisePolynomial& f) {
  const PiecewisePolynomial g = f.compose_affine(f.hi() - f.lo(), f.lo());
  std::vector<double> bps(g.breakpoints().begin(), g.breakpoints().end());
  bps.front() = 0.0;
  bps.back() = 1.0;
  return PiecewisePolynomial(std::move(bps), {g.pieces().begin(), g.pieces().end()});
}

double KinkSolution::max_residual() const {
  return std::max({std::abs(residuals[0]), std::abs(residuals[1]), std::abs(residuals[2])});
}

Realization KinkSolution::realization() const {
  if (orientation == KinkOrientation::Increasing) return Realization{0.0, 1.0, {q}, {0.0, vw}, c};
  return Realization{0.0, 1.0, {q}, {vw, 0.0}, c - vw * q};
}

Realization enum_constant(const Target& t) {
  return Realization::constant(t.lo(), t.hi(), t.integral(t.lo(), t.hi()) / t.width());
}

Realization enum_affine(const Target& t) {
  const double L = t.width();
  const double mid = 0.5 * (t.lo() + t.hi());
  const double m0 = t.integral(t.lo(), t.hi());
  const double m1 = t.x_integral(t.lo(), t.hi());
  const double slope = (m1 - mid * m0) / (L * L * L / 12.0);
  const double intercept = m0 / L - slope * mid;
  return Realization::affine(t.lo(), t.hi(), slope, intercept);
}

std::vector<KinkSolution> enum_kink_increasing(const PiecewisePolynomial& f, std::vector<double>* excluded) {
  require_unit_continuous(f);
  const double total = f.moment(0, 0.0, 1.0);
  std::vector<KinkSolution> out;
  for (double q : increasing_roots(f)) {
    const double mean_left = f.moment(0, 0.0, q) / q;
    const double gap = total - mean_left;
    if (std::abs(gap) <= kVwZeroTol * (1.0 + std::abs(total))) {
      if (excluded != nullptr) excluded->push_back(q);
      continue;
    }
    KinkSolution s;
    s.q = q;
    s.c = mean_left;
    s.vw = 2.0 / ((1.0 - q) * (1.0 - q)) * gap;
    s.orientation = KinkOrientation::Increasing;
    s.residuals = residuals(f, s);
    out.push_back(s);
  }
  return out;
}

std::vector<KinkSolution> enum_kink_decreasing(const PiecewisePolynomial& f, std::vector<double>* excluded) {
  require_unit_continuous(f);
  const PiecewisePolynomial g = reflect(f);
  std::vector<double> mirrored;
  const std::vector<KinkSolution> inc = enum_kink_increasing(g, &mirrored);
  if (excluded != nullptr)
    for (auto it = mirrored.rbegin(); it != mirrored.rend(); ++it) excluded->push_back(1.0 - *it);

  const double total = f.moment(0, 0.0, 1.0);
  std::vector<KinkSolution> out;
  for (auto it = inc.rbegin(); it != inc.rend(); ++it) {
    KinkSolution s;
    s.q = 1.0 - it->q;
    s.c = f.moment(0, s.q, 1.0) / (1.0 - s.q);
    s.vw = 2.0 / (s.q * s.q) * (s.c - total);
    s.orientation = KinkOrientation::Decreasing;
    s.residuals = residuals(f, s);
    out.push_back(s);
  }
  return out;
}

double kink_residual_increasing(const PiecewisePolynomial& f, double q) {
  const double left = f.moment(0, 0.0, q);
  const double r0 = f.moment(0, q, 1.0);
  const double r1 = f.moment(1, q, 1.0);
  return (1.0 - q) * (1.0 - q) * left - 2.0 * q * ((q + 2.0) * r0 - 3.0 * r1);
}

double kink_residual_decreasing(const PiecewisePolynomial& f, double q) {
  const double right = f.moment(0, q, 1.0);
  const double left0 = f.moment(0, 0.0, q);
  const double left1 = f.moment(1, 0.0, q);
  return q * q * right - 6.0 * (1.0 - q) * (left1 - q / 3.0 * left0);
}

GridOracleResult grid_oracle(const PiecewisePolynomial& f, double resolution) {
  require_unit_continuous(f);
  if (!(resolution > 0.0 && resolution <= 1e-3)) throw DomainError("grid resolution must lie in (0, 1e-3]");
  const int n = static_cast<int>(std::ceil(1.0 / resolution));
  std::vector<double> qs;
  std::vector<double> di;
  std::vector<double> dd;
  double peak = 0.0;
  for (int i = 1; i < n; ++i) {
    const double q = static_cast<double>(i) / n;
    qs.push_back(q);
    di.push_back(kink_residual_increasing(f, q));
    dd.push_back(kink_residual_decreasing(f, q));
    peak = std::max({peak, std::abs(di.back()), std::abs(dd.back())});
  }

  GridOracleResult out;
  const double size = std::sqrt(f.squared().moment(0, 0.0, 1.0));
  if (peak <= 1e-13 * std::max(size, 1e-300)) {
    out.degenerate_everywhere = true;
    return out;
  }
  auto scan = [&](const std::vector<double>& d, std::vector<Bracket>& brackets) {
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      if (d[i] == 0.0) {
        brackets.push_back({i == 0 ? qs[i] : qs[i - 1], qs[i + 1]});
      } else if ((d[i] < 0.0) != (d[i + 1] < 0.0) && d[i + 1] != 0.0) {
        brackets.push_back({qs[i], qs[i + 1]});
      }
    }
  };
  scan(di, out.increasing);
  scan(dd, out.decreasing);
  return out;
}

OracleCheck cross_check_oracle(const PiecewisePolynomial& f, double resolution) {
  OracleCheck out;
  out.grid = grid_oracle(f, resolution);
  for (const KinkSolution& s : enum_kink_increasing(f, &out.increasing_roots)) out.increasing_roots.push_back(s.q);
  for (const KinkSolution& s : enum_kink_decreasing(f, &out.decreasing_roots)) out.decreasing_roots.push_back(s.q);
  std::sort(out.increasing_roots.begin(), out.increasing_roots.end());
  std::sort(out.decreasing_roots.begin(), out.decreasing_roots.end());

  if (out.grid.degenerate_everywhere) {
    // Every q solves the equation; only the vw = 0 exclusion keeps it finite.
    out.agrees = true;
    return out;
  }
  constexpr double kSlack = 1e-9;
  auto matches = [&](const std::vector<double>& roots, const std::vector<Bracket>& brackets) {
    for (double q : roots) {
      const bool inside = std::any_of(brackets.begin(), brackets.end(), [&](const Bracket& b) {
        return q >= b.lo - kSlack && q <= b.hi + kSlack;
      });
      if (!inside) return false;
    }
    for (const Bracket& b : brackets) {
      const bool hit = std::any_of(roots.begin(), roots.end(),
                                   [&](double q) { return q >= b.lo - kSlack && q <= b.hi + kSlack; });
      if (!hit) return false;
    }
    return true;
  };
  out.agrees = matches(out.increasing_roots, out.grid.increasing) && matches(out.decreasing_roots, out.grid.decreasing);
  return out;
}

std::string_view to_string(EntryKind k) {
  switch (k) {
    case EntryKind::Constant:
      return "constant";
    case EntryKind::Affine:
      return "affine";
    case EntryKind::IncreasingKink:
      return "increasing_kink";
    case EntryKind::DecreasingKink:
      return "decreasing_kink";
  }
  return "constant";
}

const CatalogEntry* CriticalCatalog::global_minimum() const {
  const CatalogEntry* best = nullptr;
  for (const CatalogEntry& e : entries)
    if (best == nullptr || e.risk < best->risk) best = &e;
  return best;
}

Params lift_kink(const KinkSolution& s, double a, double b) {
  const double L = b - a;
  const double kink = a + s.q * L;
  Params p(1);
  if (s.orientation == KinkOrientation::Increasing) {
    p.w(0) = 1.0;
    p.b(0) = -kink;
    p.v(0) = s.vw / L;
  } else {
    p.w(0) = -1.0;
    p.b(0) = kink;
    p.v(0) = -s.vw / L;
  }
  p.c() = s.c;
  return p;
}

CriticalCatalog enumerate_all(const Target& t, double dedup) {
  const PiecewisePolynomial* pp = t.piecewise();
  if (pp == nullptr)
    throw FinitenessError("finiteness hypothesis violated: enumeration needs a piecewise-polynomial target");
  if (!pp->is_continuous()) throw DomainError("enumeration needs a continuous target");
  const double a = t.lo();
  const double b = t.hi();
  const double L = b - a;
  const PiecewisePolynomial unit = normalize_to_unit(*pp);

  std::vector<CatalogEntry> candidates;
  {
    CatalogEntry e;
    e.kind = EntryKind::Constant;
    e.realization = enum_constant(t);
    e.theta = Params(1, {0.0, -1.0, 0.0, e.realization.offset});
    candidates.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.kind = EntryKind::Affine;
    e.realization = enum_affine(t);
    const double slope = e.realization.slopes.front();
    const double bias = L - a;  // kink one domain length left of a
    e.theta = Params(1, {1.0, bias, slope, e.realization.offset - slope * (a + bias)});
    candidates.push_back(std::move(e));
  }

  CriticalCatalog cat;
  std::vector<KinkSolution> kinks = enum_kink_increasing(unit, &cat.excluded);
  const std::vector<KinkSolution> dec = enum_kink_decreasing(unit, &cat.excluded);
  kinks.insert(kinks.end(), dec.begin(), dec.end());
  for (const KinkSolution& s : kinks) {
    CatalogEntry e;
    e.kind = s.orientation == KinkOrientation::Increasing ? EntryKind::IncreasingKink : EntryKind::DecreasingKink;
    e.theta = lift_kink(s, a, b);
    e.realization = canonical(e.theta, a, b);
    e.kink = s;
    candidates.push_back(std::move(e));
  }

  for (CatalogEntry& e : candidates) {
    bool duplicate = false;
    for (const CatalogEntry& kept : cat.entries)
      if (l2_distance(kept.realization, e.realization) < dedup) duplicate = true;
    if (duplicate) continue;

    e.risk = risk(e.theta, t);
    e.grad_norm = grad(e.theta, t).max_norm();
    try {
      const HessianReport h = hessian_fd(e.theta, t);
      e.hessian_corank = h.dim - h.numerical_rank;
      e.crit_class = classify(h, e.grad_norm);
    } catch (const NotCriticalError&) {
    } catch (const NonSmoothPointError&) {
    }
    cat.entries.push_back(std::move(e));
  }
  return cat;
}

}  // namespace reluland
