#pragma once

#include <variant>
#include <vector>

#include "reluland/polynomial.hpp"
#include "reluland/quadrature.hpp"

namespace reluland {

/// The Lipschitz benchmark target: affine on [0, alpha], the algebraic
/// function (3u^2 - 1) / (4 (1-u)^{1/2} (1+3u)^{3/2}) on (alpha, beta] and a
/// quadratic on (beta, 1], transported to [a, b] by u = (x - a) / (b - a) and
/// multiplied by `scale`.
class BenchmarkTarget {
 public:
  BenchmarkTarget(double alpha, double beta, double a = 0.0, double b = 1.0, double scale = 1.0);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double scale() const noexcept { return scale_; }
  double width() const noexcept { return b_ - a_; }

  double to_unit(double x) const noexcept { return (x - a_) / (b_ - a_); }
  double from_unit(double u) const noexcept { return a_ + u * (b_ - a_); }

  /// Unscaled benchmark function on [0, 1].
  double unit_value(double u) const;
  /// Integral of the unscaled function over [0, u].
  double unit_integral(double u) const;
  /// Integral of u * f(u) over [0, u] (unscaled).
  double unit_x_integral(double u) const;
  /// Integral of f(u)^2 over [ulo, uhi] (unscaled). The outer pieces are
  /// exact; the middle piece uses adaptive quadrature.
  double unit_sq_integral(double ulo, double uhi, const QuadratureOptions& opts = {}) const;

  /// Scaled value at x in [a, b].
  double operator()(double x) const;

  BenchmarkTarget scaled(double factor) const;

  const Polynomial& left_piece() const noexcept { return left_; }
  const Polynomial& right_piece() const noexcept { return right_; }

 private:
  double alpha_, beta_, a_, b_, scale_;
  Polynomial left_, right_;
  Polynomial left_anti_, left_xanti_, right_anti_, right_xanti_;
  double int_alpha_ = 0.0, int_beta_ = 0.0, xint_alpha_ = 0.0, xint_beta_ = 0.0;
};

/// Antiderivatives of the middle piece (valid on (0, 1)):
/// d/du middle_primitive(u) = (3u^2-1)/(4(1-u)^{1/2}(1+3u)^{3/2}), and
/// d/du middle_x_primitive(u) = u times the same.
double middle_primitive(double u);
double middle_x_primitive(double u);

/// Running integrals of f and x*f from the left end of the domain.
struct Primitives {
  double m0 = 0.0;
  double m1 = 0.0;
};

/// A target function on [lo, hi]: either a piecewise polynomial or the
/// benchmark function.
class Target {
 public:
  explicit Target(PiecewisePolynomial f);
  explicit Target(BenchmarkTarget f);

  bool is_benchmark() const noexcept { return std::holds_alternative<BenchmarkTarget>(f_); }
  const BenchmarkTarget* benchmark() const noexcept { return std::get_if<BenchmarkTarget>(&f_); }
  const PiecewisePolynomial* piecewise() const noexcept { return std::get_if<PiecewisePolynomial>(&f_); }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }

  /// Throws DomainError outside [lo, hi].
  double operator()(double x) const;

  /// Integrals of f and x*f over [lo(), x].
  Primitives cumulative(double x) const;
  double integral(double lo, double hi) const;
  double x_integral(double lo, double hi) const;
  /// Integral of f^2 over [lo, hi]; exact for piecewise polynomials.
  double sq_integral(double lo, double hi, const QuadratureOptions& opts = {}) const;
  /// Integral of f^2 over the whole domain, computed once at construction.
  double total_sq_integral() const noexcept { return total_sq_; }

  /// Interior points where the closed form of f changes.
  std::vector<double> interior_breakpoints() const;

  /// The pointwise product c * f.
  Target scaled(double factor) const;

 private:
  void check_interval(double lo, double hi) const;

  std::variant<PiecewisePolynomial, BenchmarkTarget> f_;
  double lo_ = 0.0, hi_ = 1.0;
  std::vector<Primitives> piece_prefix_;  // piecewise only: primitives at breakpoints
  std::vector<Polynomial> piece_anti_, piece_xanti_;
  double total_sq_ = 0.0;
};

/// Default absolute tolerance for the cached whole-domain integral of f^2.
inline constexpr double kTargetSqTolerance = 1e-13;

}  // namespace reluland
