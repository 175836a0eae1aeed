#include "reluland/network.hpp"

#include <algorithm>
#include <cmath>

#include "reluland/errors.hpp"
#include "reluland/polynomial.hpp"

namespace reluland {

Params::Params(int width) : Params(width, std::vector<double>(3 * static_cast<std::size_t>(std::max(width, 0)) + 1, 0.0)) {}

Params::Params(int width, std::vector<double> theta) : width_(width), theta_(std::move(theta)) {
  if (width < 1) throw DomainError("network width must be at least 1");
  if (theta_.size() != 3 * static_cast<std::size_t>(width) + 1)
    throw DomainError("parameter vector must have length 3H + 1");
}

double realize(const Params& p, double x) {
  double out = p.c();
  for (int j = 0; j < p.width(); ++j) out += p.v(j) * std::max(p.b(j) + p.w(j) * x, 0.0);
  return out;
}

// ---------------------------------------------------------------------------
// Smooth activations

namespace {

double softplus(double y) noexcept { return y > 30.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y)); }

double sigmoid(double y) noexcept {
  if (y >= 0.0) return 1.0 / (1.0 + std::exp(-y));
  const double e = std::exp(y);
  return e / (1.0 + e);
}

}  // namespace

SmoothActivation::SmoothActivation(double r) : SmoothActivation(r, 2.0 * std::log(r)) {}

SmoothActivation::SmoothActivation(double r, double shift) : r_(r), shift_(shift) {
  if (!(r >= 1.0) || !std::isfinite(r)) throw DomainError("activation sharpness r must be >= 1");
  if (!std::isfinite(shift)) throw DomainError("activation shift must be finite");
}

SmoothActivation SmoothActivation::sqrt_shifted(double r) { return SmoothActivation(r, std::sqrt(r)); }

double SmoothActivation::operator()(double z) const noexcept { return softplus(r_ * z - shift_) / r_; }

double SmoothActivation::derivative(double z) const noexcept { return sigmoid(r_ * z - shift_); }

double preactivation(const Params& p, int j, double x) {
  const double w = p.w(j);
  if (w == 0.0) return p.b(j);
  return w * (x + p.b(j) / w);
}

double realize_smooth(const Params& p, double x, const SmoothActivation& act) {
  double out = p.c();
  for (int j = 0; j < p.width(); ++j) out += p.v(j) * act(preactivation(p, j, x));
  return out;
}

// ---------------------------------------------------------------------------
// Piecewise-linear structure

std::vector<Segment> linear_pieces(const Params& p, double lo, double hi) {
  if (!(lo < hi)) throw DomainError("linear_pieces needs lo < hi");
  std::vector<double> grid{lo, hi};
  for (int j = 0; j < p.width(); ++j) {
    if (p.w(j) == 0.0) continue;
    const double k = -p.b(j) / p.w(j);
    if (k > lo && k < hi) grid.push_back(k);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<Segment> out;
  out.reserve(grid.size() - 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double l = grid[i];
    const double h = grid[i + 1];
    const double mid = 0.5 * (l + h);
    double slope = 0.0;
    for (int j = 0; j < p.width(); ++j)
      if (p.b(j) + p.w(j) * mid > 0.0) slope += p.v(j) * p.w(j);
    out.push_back({l, h, slope, realize(p, l)});
  }
  return out;
}

double Realization::operator()(double x) const {
  if (!(x >= lo && x <= hi)) throw DomainError("realization evaluated outside its domain");
  double value = offset;
  double left = lo;
  for (std::size_t i = 0; i < kinks.size() && kinks[i] < x; ++i) {
    value += slopes[i] * (kinks[i] - left);
    left = kinks[i];
  }
  const std::size_t idx = static_cast<std::size_t>(std::lower_bound(kinks.begin(), kinks.end(), x) - kinks.begin());
  return value + slopes[std::min(idx, slopes.size() - 1)] * (x - left);
}

std::vector<Segment> Realization::segments() const {
  std::vector<Segment> out;
  out.reserve(slopes.size());
  double left = lo;
  double value = offset;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    const double right = i < kinks.size() ? kinks[i] : hi;
    out.push_back({left, right, slopes[i], value});
    value += slopes[i] * (right - left);
    left = right;
  }
  return out;
}

Realization Realization::constant(double lo, double hi, double value) { return affine(lo, hi, 0.0, value); }

Realization Realization::affine(double lo, double hi, double slope, double intercept) {
  if (!(lo < hi)) throw DomainError("realization needs lo < hi");
  return Realization{lo, hi, {}, {slope}, intercept + slope * lo};
}

Realization Realization::from_segments(std::span<const Segment> segments) {
  if (segments.empty()) throw DomainError("realization needs at least one segment");
  Realization out;
  out.lo = segments.front().lo;
  out.hi = segments.back().hi;
  out.offset = segments.front().value_lo;
  for (const Segment& s : segments) {
    if (s.hi - s.lo <= kKinkMergeTol && segments.size() > 1) continue;
    if (out.slopes.empty()) {
      out.slopes.push_back(s.slope);
      continue;
    }
    const double last = out.slopes.back();
    if (std::abs(s.slope - last) <= kKinkMergeTol * std::max({1.0, std::abs(s.slope), std::abs(last)})) continue;
    out.kinks.push_back(s.lo);
    out.slopes.push_back(s.slope);
  }
  if (out.slopes.empty()) out.slopes.push_back(segments.front().slope);
  return out;
}

Realization canonical(const Params& p, double lo, double hi) {
  const std::vector<Segment> segs = linear_pieces(p, lo, hi);
  return Realization::from_segments(segs);
}

double l2_distance(const Realization& u, const Realization& v) {
  const double tol = 1e-12 * std::max(1.0, std::abs(u.hi - u.lo));
  if (std::abs(u.lo - v.lo) > tol || std::abs(u.hi - v.hi) > tol)
    throw DomainError("l2_distance needs realizations on the same domain");
  std::vector<double> grid{u.lo, u.hi};
  grid.insert(grid.end(), u.kinks.begin(), u.kinks.end());
  grid.insert(grid.end(), v.kinks.begin(), v.kinks.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const std::vector<Segment> su = u.segments();
  const std::vector<Segment> sv = v.segments();
  auto owning = [](const std::vector<Segment>& segs, double x) -> const Segment& {
    for (const Segment& s : segs)
      if (x <= s.hi) return s;
    return segs.back();
  };

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double l = grid[i];
    const double h = grid[i + 1];
    const double mid = 0.5 * (l + h);
    const Segment& a = owning(su, mid);
    const Segment& b = owning(sv, mid);
    // Difference in the local variable s = x - l.
    const Polynomial diff{a.at(l) - b.at(l), a.slope - b.slope};
    total += (diff * diff).integral(0.0, h - l);
  }
  return std::sqrt(std::max(total, 0.0));
}

}  // namespace reluland
