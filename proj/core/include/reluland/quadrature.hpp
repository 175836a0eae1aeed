#pragma once

#include <functional>

namespace reluland {

enum class QuadratureBackend {
  GaussKronrod,  ///< adaptive bisection with the 7/15-point Gauss-Kronrod pair
  TanhSinh,      ///< double-exponential substitution
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  int max_depth = 40;
  QuadratureBackend backend = QuadratureBackend::GaussKronrod;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Integral of f over [lo, hi] to absolute tolerance `opts.abs_tol`.
///
/// Throws AccuracyError (carrying the best estimate) when the tolerance is
/// not met within `opts.max_depth` bisection levels.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& opts = {});

}  // namespace reluland
