#pragma once

#include <span>
#include <vector>

namespace reluland {

/// Parameters of a width-H one-hidden-layer ReLU network on a 1-D input.
///
/// Layout of the flat vector (length 3H + 1), j = 0..H-1:
///   theta[j]        inner weight w_j
///   theta[H + j]    bias b_j
///   theta[2H + j]   outer weight v_j
///   theta[3H]       output offset c
class Params {
 public:
  explicit Params(int width);
  Params(int width, std::vector<double> theta);

  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return theta_.size(); }

  double w(int j) const { return theta_[idx_w(j)]; }
  double b(int j) const { return theta_[idx_b(j)]; }
  double v(int j) const { return theta_[idx_v(j)]; }
  double c() const { return theta_.back(); }
  double& w(int j) { return theta_[idx_w(j)]; }
  double& b(int j) { return theta_[idx_b(j)]; }
  double& v(int j) { return theta_[idx_v(j)]; }
  double& c() { return theta_.back(); }

  std::span<const double> theta() const noexcept { return theta_; }
  std::span<double> theta() noexcept { return theta_; }
  double operator[](std::size_t i) const { return theta_[i]; }
  double& operator[](std::size_t i) { return theta_[i]; }

  std::size_t idx_w(int j) const { return static_cast<std::size_t>(j); }
  std::size_t idx_b(int j) const { return static_cast<std::size_t>(width_ + j); }
  std::size_t idx_v(int j) const { return static_cast<std::size_t>(2 * width_ + j); }
  std::size_t idx_c() const { return static_cast<std::size_t>(3 * width_); }

  friend bool operator==(const Params&, const Params&) = default;

 private:
  int width_;
  std::vector<double> theta_;
};

/// ReLU network output c + sum_j v_j max(b_j + w_j x, 0).
double realize(const Params& p, double x);

/// Member of the smooth activation family
///   A_r(z) = softplus(r z - s) / r,
/// whose derivative sigmoid(r z - s) tends to the left-continuous indicator
/// of (0, inf) as r -> inf whenever the shift s -> inf with s / r -> 0.
class SmoothActivation {
 public:
  /// Default shift s = 2 ln r.
  explicit SmoothActivation(double r);
  SmoothActivation(double r, double shift);
  /// The s = sqrt(r) member of the family.
  static SmoothActivation sqrt_shifted(double r);

  double r() const noexcept { return r_; }
  double shift() const noexcept { return shift_; }
  double operator()(double z) const noexcept;
  double derivative(double z) const noexcept;

 private:
  double r_;
  double shift_;
};

/// Pre-activation b_j + w_j x evaluated as w_j (x - k_j) with k_j = -b_j / w_j.
/// Near the kink the subtraction is exact, so the result has small relative
/// error instead of absolute rounding noise; sharp activations need this.
double preactivation(const Params& p, int j, double x);

double realize_smooth(const Params& p, double x, const SmoothActivation& act);

/// One affine segment: value(x) = value_lo + slope * (x - lo) on [lo, hi].
struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  double slope = 0.0;
  double value_lo = 0.0;

  double at(double x) const noexcept { return value_lo + slope * (x - lo); }
};

/// Exact affine pieces of the ReLU network on [lo, hi], split at every kink
/// of a neuron with nonzero inner weight. No merging is performed.
std::vector<Segment> linear_pieces(const Params& p, double lo, double hi);

/// Canonical continuous piecewise-linear function on [lo, hi].
///
/// Kinks are strictly increasing interior points; segment slopes differ
/// across every kink; `offset` is the value at lo.
struct Realization {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> kinks;
  std::vector<double> slopes;  // kinks.size() + 1 entries
  double offset = 0.0;

  double operator()(double x) const;
  std::vector<Segment> segments() const;

  static Realization constant(double lo, double hi, double value);
  static Realization affine(double lo, double hi, double slope, double intercept);
  /// Builds the canonical form from arbitrary (possibly redundant) segments.
  static Realization from_segments(std::span<const Segment> segments);
};

/// Coincident-kink and equal-slope merge tolerance used by canonical().
inline constexpr double kKinkMergeTol = 1e-12;

Realization canonical(const Params& p, double lo, double hi);

/// L2 distance between two realizations on the same domain, integrated
/// exactly on the merged breakpoint grid.
double l2_distance(const Realization& u, const Realization& v);

}  // namespace reluland
