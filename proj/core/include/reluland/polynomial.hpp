#pragma once

// Univariate polynomial and piecewise-polynomial algebra on a closed interval.
//
// Coefficients are stored in ascending order: coeffs()[k] multiplies x^k.
// All integrals are evaluated through exact antiderivatives, so results are
// exact up to floating-point rounding.

#include <initializer_list>
#include <span>
#include <vector>

namespace reluland {

class Polynomial {
 public:
  /// The zero polynomial.
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial constant(double value);
  static Polynomial monomial(int power, double coeff = 1.0);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree of a nonzero polynomial; the zero polynomial reports 0.
  int degree() const noexcept;
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double coeff(int power) const noexcept;
  /// Largest coefficient magnitude (0 for the zero polynomial).
  double scale() const noexcept;

  double operator()(double x) const noexcept;

  Polynomial derivative() const;
  /// Antiderivative with zero constant term.
  Polynomial antiderivative() const;
  double integral(double lo, double hi) const;
  /// x -> p(s*x + t)
  Polynomial compose_affine(double s, double t) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double factor);

  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
  friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
  friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);
  friend Polynomial operator*(Polynomial p, double f) { return p *= f; }
  friend Polynomial operator*(double f, Polynomial p) { return p *= f; }
  friend Polynomial operator-(Polynomial p) { return p *= -1.0; }

 private:
  void trim() noexcept;

  std::vector<double> coeffs_;
};

/// Quotient and remainder of Euclidean division, `num = quot * den + rem`.
struct DivisionResult {
  Polynomial quotient;
  Polynomial remainder;
};
DivisionResult divide(const Polynomial& num, const Polynomial& den);

/// Sorted real roots of `p` in [lo, hi].
///
/// Roots are isolated with a Sturm sequence and interval bisection, then
/// polished by bisection and at most 30 safeguarded Newton steps. Roots closer
/// than 1e-9 are collapsed into one. Throws DegeneracyError for the zero
/// polynomial and DomainError unless lo < hi and tol > 0.
std::vector<double> roots_in(const Polynomial& p, double lo, double hi, double tol);

/// A function given by one polynomial per breakpoint interval.
///
/// At an interior breakpoint the piece to the right owns the value; the last
/// piece owns the right end of the domain.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Polynomial> pieces);

  double lo() const noexcept { return breakpoints_.front(); }
  double hi() const noexcept { return breakpoints_.back(); }
  std::size_t num_pieces() const noexcept { return pieces_.size(); }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const Polynomial> pieces() const noexcept { return pieces_; }
  const Polynomial& piece(std::size_t i) const { return pieces_.at(i); }

  /// Index of the piece owning x. Throws DomainError outside the domain.
  std::size_t piece_index(double x) const;
  double operator()(double x) const;

  /// Integral of x^k * p(x) over [lo, hi].
  double moment(int k, double lo, double hi) const;
  double integral(double lo, double hi) const { return moment(0, lo, hi); }

  /// True when adjacent pieces agree at interior breakpoints to `rel_tol`
  /// (relative to max(1, |value|)).
  bool is_continuous(double rel_tol = 1e-12) const;

  PiecewisePolynomial scaled(double factor) const;
  PiecewisePolynomial squared() const;
  /// The function x -> p(s*x + t) on the preimage domain; s must be nonzero.
  PiecewisePolynomial compose_affine(double s, double t) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<Polynomial> pieces_;
};

}  // namespace reluland
