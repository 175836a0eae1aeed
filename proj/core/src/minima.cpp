#include "reluland/minima.hpp"

#include <cmath>

#include "reluland/errors.hpp"
#include "reluland/landscape.hpp"
#include "reluland/rng.hpp"

namespace reluland {

namespace {

void require_unscaled(const BenchmarkTarget& t) {
  if (t.scale() != 1.0) throw DomainError("the local-minimum family is defined for the unscaled benchmark target");
}

// Offset and post-kink slope of the family realization in normalized coordinates.
double family_offset(double q) { return -std::sqrt(1.0 - q) / (4.0 * std::sqrt(1.0 + 3.0 * q)); }
double family_slope(double q) { return 1.0 / (2.0 * std::pow(1.0 - q, 1.5) * std::sqrt(1.0 + 3.0 * q)); }

// Neurons j >= first get weights in [-2, -1] and a margin u in [0.1, 1]
// below zero at the left endpoint, where a negative-weight neuron peaks.
void fill_inactive(Params& p, int first, double a, double b, std::uint64_t seed,
                   std::vector<InactiveNeuron>* out) {
  SplitMix64 rng(seed);
  for (int j = first; j < p.width(); ++j) {
    const double w = rng.uniform(-2.0, -1.0);
    const double u = rng.uniform(0.1, 1.0);
    const double v = rng.uniform(-1.0, 1.0);
    p.w(j) = w;
    p.b(j) = -w * a - u;
    p.v(j) = v;
    if (!(std::max(w * a + p.b(j), w * b + p.b(j)) < 0.0))
      throw DomainError("failed to draw an inactive neuron");  // unreachable for finite a < b
    if (out != nullptr) out->push_back({w, p.b(j), v});
  }
}

}  // namespace

MinimaSample sample_M(const BenchmarkTarget& t, int H, double x, double y, std::uint64_t seed) {
  require_unscaled(t);
  if (H < 1) throw DomainError("width must be at least 1");
  if (!(x > t.alpha() && x < t.beta())) throw DomainError("kink position must lie strictly between alpha and beta");
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("inner scale must be positive");

  const double L = t.width();
  MinimaSample s;
  s.x = x;
  s.y = y;
  s.theta = Params(H);
  Params& p = s.theta;
  p.w(0) = y / L;
  p.b(0) = -y * (x + t.a() / L);
  p.v(0) = 1.0 / (2.0 * y * std::pow(1.0 - x, 1.5) * std::sqrt(1.0 + 3.0 * x));
  p.c() = family_offset(x);
  fill_inactive(p, 1, t.a(), t.b(), seed, &s.inactive);
  return s;
}

double minima_risk(const BenchmarkTarget& t, double tol) {
  require_unscaled(t);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  QuadratureOptions opts;
  opts.abs_tol = tol;
  return t.width() * (t.unit_sq_integral(0.0, 1.0, opts) - 1.0 / 48.0);
}

std::array<double, 3> verify_zero_integrals(const BenchmarkTarget& t, double q) {
  require_unscaled(t);
  if (!(q > t.alpha() && q < t.beta())) throw DomainError("q must lie strictly between alpha and beta");
  const double c = family_offset(q);
  const double s = family_slope(q);
  const double r = 1.0 - q;
  const double f_left = t.unit_integral(q);
  const double f_right = t.unit_integral(1.0) - f_left;
  const double fx_right = t.unit_x_integral(1.0) - t.unit_x_integral(q);
  // x N on [q, 1] integrated in the shifted variable z = x - q.
  const double n_x_right = c * (1.0 - q * q) / 2.0 + s * (r * r * r / 3.0 + q * r * r / 2.0);
  return {c * q - f_left, c * r + s * r * r / 2.0 - f_right, n_x_right - fx_right};
}

Params two_kink_witness(const BenchmarkTarget& t, int H, double p, double eps, std::uint64_t seed) {
  require_unscaled(t);
  if (H < 2) throw DomainError("the two-kink witness needs width at least 2");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (!(p - eps > t.alpha() && p + eps < t.beta()))
    throw DomainError("(p - eps, p + eps) must lie inside (alpha, beta)");

  const double c = family_offset(p);
  const double half = 0.5 * family_slope(p);
  constexpr int kGrid = 1000;
  for (int i = 1; i < kGrid; ++i) {
    const double u = p - eps + 2.0 * eps * i / kGrid;
    const double mid = c + half * (u - p + eps);
    const double low = c + 2.0 * half * std::max(u - p, 0.0);
    if (!(t.unit_value(u) > mid && mid > low))
      throw WitnessError("eps too large: the target does not dominate the witness near p");
  }

  const double L = t.width();
  Params w(H);
  w.w(0) = w.w(1) = 1.0 / L;
  w.b(0) = -t.a() / L - p + eps;
  w.b(1) = -t.a() / L - p - eps;
  w.v(0) = w.v(1) = half;
  w.c() = c;
  fill_inactive(w, 2, t.a(), t.b(), seed, nullptr);
  return w;
}

GapCertificate certify_gap(const BenchmarkTarget& t, int H, double p, double eps, std::uint64_t seed,
                           std::optional<QuadratureOptions> quadrature) {
  GapCertificate g;
  g.theta = sample_M(t, H, p, 1.0, seed).theta;
  g.witness = two_kink_witness(t, H, p, eps, seed);
  const Target target(t);
  if (quadrature) {
    g.risk_theta = risk_by_quadrature(g.theta, target, *quadrature);
    g.risk_witness = risk_by_quadrature(g.witness, target, *quadrature);
  } else {
    g.risk_theta = risk(g.theta, target);
    g.risk_witness = risk(g.witness, target);
  }
  g.gap = g.risk_theta - g.risk_witness;
  return g;
}

}  // namespace reluland
