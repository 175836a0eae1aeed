#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "reluland/network.hpp"
#include "reluland/quadrature.hpp"
#include "reluland/target.hpp"

namespace reluland {

/// Inner parameters of a neuron that is inactive on the whole domain.
struct InactiveNeuron {
  double w = 0.0;
  double b = 0.0;
  double v = 0.0;
};

/// A point of the single-kink local-minimum family for the benchmark target.
struct MinimaSample {
  double x = 0.0;  // normalized kink, in (alpha, beta)
  double y = 0.0;  // inner scale, > 0
  std::vector<InactiveNeuron> inactive;  // neurons 2..H
  Params theta{1};
};

/// Builds a family member with kink at normalized position x and inner scale
/// y; neurons 2..H are drawn from `seed` so that w a + b < 0 and w b + b < 0.
/// Requires an unscaled benchmark target (scale 1).
MinimaSample sample_M(const BenchmarkTarget& t, int H, double x, double y, std::uint64_t seed);

/// Common risk of every family member: (b - a) (int_0^1 f^2 - 1/48).
double minima_risk(const BenchmarkTarget& t, double tol = 1e-13);

/// Residuals (int_0^q (N - f), int_q^1 (N - f), int_q^1 x (N - f)) in
/// normalized coordinates, where N is the family realization with kink q.
std::array<double, 3> verify_zero_integrals(const BenchmarkTarget& t, double q);

/// Width-H parameter vector with two kinks at normalized p - eps and p + eps
/// and strictly lower risk than the family member at p. Throws WitnessError
/// when the target does not dominate the witness on (p - eps, p + eps).
Params two_kink_witness(const BenchmarkTarget& t, int H, double p, double eps, std::uint64_t seed);

struct GapCertificate {
  Params theta{1};
  Params witness{1};
  double risk_theta = 0.0;
  double risk_witness = 0.0;
  double gap = 0.0;
};

/// Compares the family member at p with the two-kink witness. With no
/// options both risks use the closed form; otherwise both are integrated
/// directly with the given quadrature settings.
GapCertificate certify_gap(const BenchmarkTarget& t, int H, double p, double eps, std::uint64_t seed,
                           std::optional<QuadratureOptions> quadrature = std::nullopt);

}  // namespace reluland
