#include "reluland/target.hpp"

#include <algorithm>
#include <cmath>

#include "reluland/errors.hpp"

namespace reluland {

double middle_primitive(double u) { return -u * std::sqrt(1.0 - u) / (4.0 * std::sqrt(1.0 + 3.0 * u)); }

double middle_x_primitive(double u) {
  return -(3.0 * u * u + 2.0 * u + 1.0) * std::sqrt(1.0 - u) / (24.0 * std::sqrt(1.0 + 3.0 * u));
}

namespace {

double middle_value(double u) {
  return (3.0 * u * u - 1.0) / (4.0 * std::sqrt(1.0 - u) * std::pow(1.0 + 3.0 * u, 1.5));
}

}  // namespace

// ---------------------------------------------------------------------------
// BenchmarkTarget

BenchmarkTarget::BenchmarkTarget(double alpha, double beta, double a, double b, double scale)
    : alpha_(alpha), beta_(beta), a_(a), b_(b), scale_(scale) {
  if (!(alpha > 0.0 && alpha < beta && beta < 1.0))
    throw DomainError("benchmark target needs 0 < alpha < beta < 1");
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) throw DomainError("benchmark target needs finite a < b");
  if (!std::isfinite(scale)) throw DomainError("benchmark target scale must be finite");

  const double kl = 4.0 * std::sqrt(1.0 - alpha) * std::pow(1.0 + 3.0 * alpha, 1.5);
  left_ = Polynomial{(-4.0 * alpha + 3.0 * alpha * alpha - 1.0) / kl, 4.0 / kl};
  const double kr = 4.0 * std::pow(1.0 - beta, 2.5) * std::pow(1.0 + 3.0 * beta, 1.5);
  right_ = Polynomial{(3.0 * std::pow(beta, 4) + 10.0 * beta * beta - 1.0) / kr,
                      -(18.0 * beta * beta + 8.0 * beta - 2.0) / kr, 12.0 * beta / kr};

  const Polynomial x = Polynomial::monomial(1);
  left_anti_ = left_.antiderivative();
  left_xanti_ = (x * left_).antiderivative();
  right_anti_ = right_.antiderivative();
  right_xanti_ = (x * right_).antiderivative();

  int_alpha_ = left_anti_(alpha);
  xint_alpha_ = left_xanti_(alpha);
  int_beta_ = int_alpha_ + middle_primitive(beta) - middle_primitive(alpha);
  xint_beta_ = xint_alpha_ + middle_x_primitive(beta) - middle_x_primitive(alpha);
}

double BenchmarkTarget::unit_value(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("benchmark target evaluated outside [0, 1]");
  if (u <= alpha_) return left_(u);
  if (u <= beta_) return middle_value(u);
  return right_(u);
}

double BenchmarkTarget::unit_integral(double u) const {
  if (u <= alpha_) return left_anti_(u);
  if (u <= beta_) return int_alpha_ + middle_primitive(u) - middle_primitive(alpha_);
  return int_beta_ + right_anti_(u) - right_anti_(beta_);
}

double BenchmarkTarget::unit_x_integral(double u) const {
  if (u <= alpha_) return left_xanti_(u);
  if (u <= beta_) return xint_alpha_ + middle_x_primitive(u) - middle_x_primitive(alpha_);
  return xint_beta_ + right_xanti_(u) - right_xanti_(beta_);
}

double BenchmarkTarget::unit_sq_integral(double ulo, double uhi, const QuadratureOptions& opts) const {
  if (!(ulo >= 0.0 && uhi <= 1.0 && ulo <= uhi)) throw DomainError("benchmark square integral outside [0, 1]");
  double total = 0.0;
  if (ulo < alpha_) total += (left_ * left_).integral(ulo, std::min(uhi, alpha_));
  const double mlo = std::max(ulo, alpha_);
  const double mhi = std::min(uhi, beta_);
  if (mlo < mhi) {
    total += integrate([](double u) { return middle_value(u) * middle_value(u); }, mlo, mhi, opts).value;
  }
  if (uhi > beta_) total += (right_ * right_).integral(std::max(ulo, beta_), uhi);
  return total;
}

double BenchmarkTarget::operator()(double x) const {
  if (!(x >= a_ && x <= b_)) throw DomainError("benchmark target evaluated outside its domain");
  return scale_ * unit_value(std::clamp(to_unit(x), 0.0, 1.0));
}

BenchmarkTarget BenchmarkTarget::scaled(double factor) const {
  return BenchmarkTarget(alpha_, beta_, a_, b_, scale_ * factor);
}

// ---------------------------------------------------------------------------
// Target

Target::Target(PiecewisePolynomial f) : f_(std::move(f)) {
  const auto& pp = std::get<PiecewisePolynomial>(f_);
  lo_ = pp.lo();
  hi_ = pp.hi();
  const Polynomial x = Polynomial::monomial(1);
  piece_prefix_.push_back({});
  for (std::size_t i = 0; i < pp.num_pieces(); ++i) {
    piece_anti_.push_back(pp.piece(i).antiderivative());
    piece_xanti_.push_back((x * pp.piece(i)).antiderivative());
    const double l = pp.breakpoints()[i];
    const double h = pp.breakpoints()[i + 1];
    const Primitives& prev = piece_prefix_.back();
    piece_prefix_.push_back({prev.m0 + piece_anti_[i](h) - piece_anti_[i](l),
                             prev.m1 + piece_xanti_[i](h) - piece_xanti_[i](l)});
  }
  total_sq_ = pp.squared().moment(0, lo_, hi_);
}

Target::Target(BenchmarkTarget f) : f_(std::move(f)) {
  const auto& bt = std::get<BenchmarkTarget>(f_);
  lo_ = bt.a();
  hi_ = bt.b();
  QuadratureOptions opts;
  opts.abs_tol = kTargetSqTolerance;
  total_sq_ = bt.scale() * bt.scale() * bt.width() * bt.unit_sq_integral(0.0, 1.0, opts);
}

double Target::operator()(double x) const {
  return std::visit([x](const auto& f) { return f(x); }, f_);
}

void Target::check_interval(double lo, double hi) const {
  if (!(lo >= lo_ && hi <= hi_ && lo <= hi)) throw DomainError("target integral interval outside the domain");
}

Primitives Target::cumulative(double x) const {
  if (!(x >= lo_ && x <= hi_)) throw DomainError("target primitive evaluated outside the domain");
  if (const auto* pp = piecewise()) {
    const std::size_t i = pp->piece_index(x);
    const double l = pp->breakpoints()[i];
    const Primitives& base = piece_prefix_[i];
    return {base.m0 + piece_anti_[i](x) - piece_anti_[i](l), base.m1 + piece_xanti_[i](x) - piece_xanti_[i](l)};
  }
  const auto& bt = std::get<BenchmarkTarget>(f_);
  const double u = std::clamp(bt.to_unit(x), 0.0, 1.0);
  const double L = bt.width();
  const double f0 = bt.unit_integral(u);
  const double f1 = bt.unit_x_integral(u);
  return {bt.scale() * L * f0, bt.scale() * L * (bt.a() * f0 + L * f1)};
}

double Target::integral(double lo, double hi) const {
  check_interval(lo, hi);
  return cumulative(hi).m0 - cumulative(lo).m0;
}

double Target::x_integral(double lo, double hi) const {
  check_interval(lo, hi);
  return cumulative(hi).m1 - cumulative(lo).m1;
}

double Target::sq_integral(double lo, double hi, const QuadratureOptions& opts) const {
  check_interval(lo, hi);
  if (const auto* pp = piecewise()) return pp->squared().moment(0, lo, hi);
  const auto& bt = std::get<BenchmarkTarget>(f_);
  const double factor = bt.scale() * bt.scale() * bt.width();
  if (factor == 0.0) return 0.0;
  QuadratureOptions unit_opts = opts;
  unit_opts.abs_tol = opts.abs_tol / std::abs(factor);
  return factor * bt.unit_sq_integral(std::clamp(bt.to_unit(lo), 0.0, 1.0), std::clamp(bt.to_unit(hi), 0.0, 1.0),
                                      unit_opts);
}

std::vector<double> Target::interior_breakpoints() const {
  if (const auto* pp = piecewise()) {
    const auto bps = pp->breakpoints();
    return {bps.begin() + 1, bps.end() - 1};
  }
  const auto& bt = std::get<BenchmarkTarget>(f_);
  return {bt.from_unit(bt.alpha()), bt.from_unit(bt.beta())};
}

Target Target::scaled(double factor) const {
  if (!std::isfinite(factor)) throw DomainError("target scale factor must be finite");
  if (const auto* pp = piecewise()) return Target(pp->scaled(factor));
  return Target(std::get<BenchmarkTarget>(f_).scaled(factor));
}

}  // namespace reluland
