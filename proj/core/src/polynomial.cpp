#include "reluland/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "reluland/errors.hpp"

namespace reluland {

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { trim(); }

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(double value) { return Polynomial{value}; }

Polynomial Polynomial::monomial(int power, double coeff) {
  std::vector<double> c(static_cast<std::size_t>(power) + 1, 0.0);
  c.back() = coeff;
  return Polynomial(std::move(c));
}

void Polynomial::trim() noexcept {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

int Polynomial::degree() const noexcept {
  return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1;
}

double Polynomial::coeff(int power) const noexcept {
  if (power < 0 || static_cast<std::size_t>(power) >= coeffs_.size()) return 0.0;
  return coeffs_[static_cast<std::size_t>(power)];
}

double Polynomial::scale() const noexcept {
  double s = 0.0;
  for (double c : coeffs_) s = std::max(s, std::abs(c));
  return s;
}

double Polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  if (coeffs_.empty()) return {};
  std::vector<double> a(coeffs_.size() + 1, 0.0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) a[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
  return Polynomial(std::move(a));
}

double Polynomial::integral(double lo, double hi) const {
  const Polynomial anti = antiderivative();
  return anti(hi) - anti(lo);
}

Polynomial Polynomial::compose_affine(double s, double t) const {
  // Horner in polynomial arithmetic: p(s x + t) = (...(c_n (sx+t) + c_{n-1})(sx+t) + ...)
  const Polynomial inner{t, s};
  Polynomial acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * inner;
    acc += Polynomial{*it};
  }
  return acc;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double factor) {
  for (double& c : coeffs_) c *= factor;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) return {};
  std::vector<double> out(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
  return Polynomial(std::move(out));
}

DivisionResult divide(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<double> rem(num.coeffs().begin(), num.coeffs().end());
  const int dn = den.degree();
  const double lead = den.coeffs().back();
  if (num.is_zero() || num.degree() < dn) return {Polynomial{}, num};
  std::vector<double> quot(static_cast<std::size_t>(num.degree() - dn) + 1, 0.0);
  for (int k = num.degree() - dn; k >= 0; --k) {
    const double q = rem[static_cast<std::size_t>(k + dn)] / lead;
    quot[static_cast<std::size_t>(k)] = q;
    for (int i = 0; i <= dn; ++i) rem[static_cast<std::size_t>(k + i)] -= q * den.coeffs()[static_cast<std::size_t>(i)];
    rem[static_cast<std::size_t>(k + dn)] = 0.0;
  }
  rem.resize(static_cast<std::size_t>(dn));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

// ---------------------------------------------------------------------------
// Root isolation

namespace {

constexpr double kRootClusterTol = 1e-9;
constexpr int kMaxNewtonSteps = 30;

// Drop leading coefficients that are rounding noise relative to the rest.
Polynomial drop_negligible_leading(const Polynomial& p, double rel) {
  std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
  const double s = p.scale();
  while (c.size() > 1 && std::abs(c.back()) <= rel * s) c.pop_back();
  return Polynomial(std::move(c));
}

Polynomial normalized(const Polynomial& p) {
  const double s = p.scale();
  return s > 0.0 ? p * (1.0 / s) : p;
}

class SturmSequence {
 public:
  explicit SturmSequence(const Polynomial& p) {
    chain_.push_back(normalized(p));
    chain_.push_back(normalized(p.derivative()));
    while (!chain_.back().is_zero() && chain_.back().degree() > 0) {
      const Polynomial& a = chain_[chain_.size() - 2];
      const Polynomial& b = chain_.back();
      Polynomial r = divide(a, b).remainder;
      // Remainders that should vanish exactly (repeated roots) come out as
      // rounding noise; treat them as zero so the chain ends at the gcd.
      const double noise = 1e-12 * std::max(a.scale(), b.scale());
      std::vector<double> c(r.coeffs().begin(), r.coeffs().end());
      for (double& v : c)
        if (std::abs(v) <= noise) v = 0.0;
      r = Polynomial(std::move(c));
      if (r.is_zero()) break;
      chain_.push_back(normalized(-r));
    }
  }

  int variations(double x) const {
    int count = 0;
    int prev = 0;
    for (const Polynomial& s : chain_) {
      const double v = s(x);
      const int sign = (v > 0.0) - (v < 0.0);
      if (sign == 0) continue;
      if (prev != 0 && sign != prev) ++count;
      prev = sign;
    }
    return count;
  }

  // Distinct roots in (a, b].
  int count(double a, double b) const { return std::max(0, variations(a) - variations(b)); }

 private:
  std::vector<Polynomial> chain_;
};

double polish_bracketed(const Polynomial& p, const Polynomial& dp, double a, double b, double tol) {
  double fa = p(a);
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double fm = p(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  double x = 0.5 * (a + b);
  for (int i = 0; i < kMaxNewtonSteps; ++i) {
    const double fx = p(x);
    const double dfx = dp(x);
    if (fx == 0.0 || dfx == 0.0) break;
    const double next = x - fx / dfx;
    if (!(next >= a && next <= b) || std::abs(p(next)) >= std::abs(fx)) break;
    x = next;
  }
  return x;
}

}  // namespace

std::vector<double> roots_in(const Polynomial& p, double lo, double hi, double tol) {
  if (!(lo < hi)) throw DomainError("roots_in: need lo < hi");
  if (!(tol > 0.0)) throw DomainError("roots_in: need tol > 0");
  if (p.is_zero()) throw DegeneracyError("roots_in: polynomial is identically zero on interval");

  const Polynomial q = normalized(drop_negligible_leading(p, 4.0 * std::numeric_limits<double>::epsilon()));
  if (q.degree() == 0) return {};

  const Polynomial dq = q.derivative();
  const SturmSequence sturm(q);
  const double pad = std::max(tol, 1e-12 * (hi - lo));
  const double a0 = lo - pad;
  const double b0 = hi + pad;

  std::vector<double> found;
  // Explicit stack instead of recursion: (a, b, number of roots in (a, b]).
  struct Cell {
    double a, b;
    int n;
  };
  std::vector<Cell> stack{{a0, b0, sturm.count(a0, b0)}};
  while (!stack.empty()) {
    const Cell cell = stack.back();
    stack.pop_back();
    if (cell.n <= 0) continue;
    if (cell.b - cell.a <= tol) {
      found.push_back(0.5 * (cell.a + cell.b));
      continue;
    }
    if (cell.n == 1) {
      const double fa = q(cell.a);
      const double fb = q(cell.b);
      if (fb == 0.0) {
        found.push_back(cell.b);
        continue;
      }
      if ((fa < 0.0) != (fb < 0.0) && fa != 0.0) {
        found.push_back(polish_bracketed(q, dq, cell.a, cell.b, tol));
        continue;
      }
    }
    const double m = 0.5 * (cell.a + cell.b);
    const int left = std::min(cell.n, sturm.count(cell.a, m));
    stack.push_back({m, cell.b, cell.n - left});
    stack.push_back({cell.a, m, left});
  }

  std::vector<double> roots;
  for (double r : found) {
    if (r < lo - tol || r > hi + tol) continue;
    roots.push_back(std::clamp(r, lo, hi));
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> clustered;
  for (double r : roots) {
    if (!clustered.empty() && r - clustered.back() < kRootClusterTol) continue;
    clustered.push_back(r);
  }
  return clustered;
}

// ---------------------------------------------------------------------------
// PiecewisePolynomial

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Polynomial> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw DomainError("piecewise polynomial needs at least one piece");
  if (breakpoints_.size() != pieces_.size() + 1)
    throw DomainError("piecewise polynomial needs exactly one more breakpoint than pieces");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1]))
      throw DomainError("piecewise polynomial breakpoints must be strictly increasing");
  }
  for (double x : breakpoints_)
    if (!std::isfinite(x)) throw DomainError("piecewise polynomial breakpoints must be finite");
}

std::size_t PiecewisePolynomial::piece_index(double x) const {
  if (!(x >= lo() && x <= hi())) throw DomainError("piecewise polynomial evaluated outside its domain");
  // First breakpoint strictly greater than x; right piece owns breakpoints.
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto idx = static_cast<std::size_t>(it - breakpoints_.begin());
  return std::min(idx == 0 ? 0 : idx - 1, pieces_.size() - 1);
}

double PiecewisePolynomial::operator()(double x) const { return pieces_[piece_index(x)](x); }

double PiecewisePolynomial::moment(int k, double a, double b) const {
  if (k < 0) throw DomainError("moment order must be nonnegative");
  if (!(a <= b)) throw DomainError("moment: need lo <= hi");
  if (a < lo() || b > hi()) throw DomainError("moment interval outside the domain");
  const Polynomial weight = Polynomial::monomial(k);
  double total = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double l = std::max(a, breakpoints_[i]);
    const double h = std::min(b, breakpoints_[i + 1]);
    if (h <= l) continue;
    total += (weight * pieces_[i]).integral(l, h);
  }
  return total;
}

bool PiecewisePolynomial::is_continuous(double rel_tol) const {
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    const double x = breakpoints_[i];
    const double left = pieces_[i - 1](x);
    const double right = pieces_[i](x);
    if (std::abs(left - right) > rel_tol * std::max(1.0, std::abs(left))) return false;
  }
  return true;
}

PiecewisePolynomial PiecewisePolynomial::scaled(double factor) const {
  std::vector<Polynomial> out;
  out.reserve(pieces_.size());
  for (const Polynomial& p : pieces_) out.push_back(p * factor);
  return {breakpoints_, std::move(out)};
}

PiecewisePolynomial PiecewisePolynomial::squared() const {
  std::vector<Polynomial> out;
  out.reserve(pieces_.size());
  for (const Polynomial& p : pieces_) out.push_back(p * p);
  return {breakpoints_, std::move(out)};
}

PiecewisePolynomial PiecewisePolynomial::compose_affine(double s, double t) const {
  if (s == 0.0 || !std::isfinite(s)) throw DomainError("compose_affine needs a finite nonzero slope");
  std::vector<double> bps;
  std::vector<Polynomial> out;
  bps.reserve(breakpoints_.size());
  out.reserve(pieces_.size());
  for (double x : breakpoints_) bps.push_back((x - t) / s);
  for (const Polynomial& p : pieces_) out.push_back(p.compose_affine(s, t));
  if (s < 0.0) {
    std::reverse(bps.begin(), bps.end());
    std::reverse(out.begin(), out.end());
  }
  return {std::move(bps), std::move(out)};
}

}  // namespace reluland
