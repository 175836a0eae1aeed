#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "reluland/network.hpp"
#include "reluland/quadrature.hpp"
#include "reluland/target.hpp"

namespace reluland {

/// Generalized gradient in the Params layout.
class GradientVector {
 public:
  GradientVector() = default;
  explicit GradientVector(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  double max_norm() const noexcept;

 private:
  std::vector<double> values_;
};

/// Squared L2 risk of the ReLU network against t on t's domain. The network
/// part is integrated exactly segment by segment; the integral of f^2 is the
/// target's cached value.
double risk(const Params& p, const Target& t);
/// Same, recomputing the integral of f^2 with the given quadrature options.
double risk(const Params& p, const Target& t, const QuadratureOptions& opts);
/// Risk by direct quadrature of (N - f)^2, split at kinks and target
/// breakpoints. An independent route to the same number.
double risk_by_quadrature(const Params& p, const Target& t, const QuadratureOptions& opts = {});

/// Generalized gradient: the limit of smoothed-risk gradients. Every entry
/// is a closed-form integral over the neuron's active interval. Defined at
/// every parameter vector; equals the classical gradient wherever the risk
/// is differentiable.
GradientVector grad(const Params& p, const Target& t);

/// Risk and gradient of the network with activation A_r, by adaptive
/// quadrature split at kinks, target breakpoints and the activation's bend.
double risk_smooth(const Params& p, const Target& t, const SmoothActivation& act, const QuadratureOptions& opts = {});
GradientVector grad_smooth(const Params& p, const Target& t, const SmoothActivation& act,
                           const QuadratureOptions& opts = {});

enum class HessianCoords {
  All,          ///< all 3H + 1 coordinates
  Restricted4,  ///< (w_1, b_1, v_1, c)
};

struct HessianReport {
  int dim = 0;
  std::vector<std::size_t> coords;  // indices into the Params layout
  std::vector<double> matrix;       // row-major dim x dim, symmetric
  std::vector<double> eigenvalues;  // ascending
  int numerical_rank = 0;
  double rank_tol = 1e-6;

  double at(int i, int j) const { return matrix[static_cast<std::size_t>(i * dim + j)]; }
  double min_eigenvalue() const { return eigenvalues.front(); }
  double max_abs_eigenvalue() const;
};

inline constexpr double kDefaultRankTol = 1e-6;
inline constexpr double kDefaultHessianStep = 1e-5;

/// Symmetrizes `matrix`, computes its spectrum and numerical rank (count of
/// |lambda| > rank_tol * max |lambda|).
HessianReport make_hessian_report(std::vector<double> matrix, int dim, std::vector<std::size_t> coords,
                                  double rank_tol = kDefaultRankTol);

/// True when no neuron has its kink exactly at a domain endpoint, i.e.
/// w_j a + b_j != 0 and w_j b + b_j != 0 for every j.
bool is_smooth_point(const Params& p, double lo, double hi);

/// Hessian by symmetrized central differences of the exact gradient.
/// Throws NonSmoothPointError unless is_smooth_point holds.
HessianReport hessian_fd(const Params& p, const Target& t, double step = kDefaultHessianStep,
                         HessianCoords coords = HessianCoords::All, double rank_tol = kDefaultRankTol);

/// Closed-form Hessian with respect to (w_1, b_1, v_1, c) at a point of the
/// single-kink family with normalized kink q and first inner weight theta1.
/// Throws DomainError unless alpha < q < beta and theta1 > 0.
HessianReport closed_hessian_M(double q, double theta1, const BenchmarkTarget& t, double rank_tol = kDefaultRankTol);

enum class CritClass { LocalMin, LocalMax, Saddle, Degenerate };

std::string_view to_string(CritClass c);

/// Numerical second-order label of a critical point from its Hessian
/// spectrum. Advisory outside the analytic single-kink family: the label
/// cannot check that the zero set is a manifold of the observed corank.
/// Throws NotCriticalError when grad_norm >= 1e-6.
CritClass classify(const HessianReport& report, double grad_norm, std::optional<int> expected_corank = std::nullopt);

}  // namespace reluland
