#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "reluland/landscape.hpp"
#include "reluland/network.hpp"
#include "reluland/polynomial.hpp"
#include "reluland/target.hpp"

namespace reluland {

enum class KinkOrientation { Increasing, Decreasing };

/// Single-kink critical realization on [0, 1]: flat at level c on one side of
/// q, slope vw on the other (active) side.
struct KinkSolution {
  double q = 0.0;
  double c = 0.0;
  double vw = 0.0;
  KinkOrientation orientation = KinkOrientation::Increasing;
  std::array<double, 3> residuals{};  // the three moment equations

  double max_residual() const;
  /// The realization on [0, 1].
  Realization realization() const;
};

/// Mean of t over its domain, as a constant realization.
Realization enum_constant(const Target& t);
/// Least-squares affine fit of t.
Realization enum_affine(const Target& t);

/// Interior kinks of increasing single-neuron critical points for a
/// continuous piecewise polynomial on [0, 1]. Roots with vw = 0 are dropped;
/// their positions are appended to `excluded` when it is non-null.
std::vector<KinkSolution> enum_kink_increasing(const PiecewisePolynomial& f, std::vector<double>* excluded = nullptr);
/// Same for decreasing kinks, via the reflection x -> 1 - x.
std::vector<KinkSolution> enum_kink_decreasing(const PiecewisePolynomial& f, std::vector<double>* excluded = nullptr);

/// Kink equation residuals evaluated directly from cumulative moments.
double kink_residual_increasing(const PiecewisePolynomial& f, double q);
double kink_residual_decreasing(const PiecewisePolynomial& f, double q);

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

struct GridOracleResult {
  std::vector<Bracket> increasing;
  std::vector<Bracket> decreasing;
  /// Both residuals vanish on the whole grid (e.g. constant targets).
  bool degenerate_everywhere = false;
};

/// Sign-change brackets of the two kink residuals on the uniform grid of
/// spacing `resolution` inside (0, 1).
GridOracleResult grid_oracle(const PiecewisePolynomial& f, double resolution = 1e-5);

/// Result of matching enumerated kink roots (kept and vw = 0 excluded)
/// against the grid oracle's sign-change brackets.
struct OracleCheck {
  GridOracleResult grid;
  std::vector<double> increasing_roots;  // including excluded ones
  std::vector<double> decreasing_roots;
  /// Every root lies in a bracket and every bracket holds a root.
  bool agrees = false;
};

OracleCheck cross_check_oracle(const PiecewisePolynomial& f, double resolution = 1e-5);

/// The same function on [0, 1]: u -> f(lo + u (hi - lo)).
PiecewisePolynomial normalize_to_unit(const PiecewisePolynomial& f);

enum class EntryKind { Constant, Affine, IncreasingKink, DecreasingKink };
std::string_view to_string(EntryKind k);

struct CatalogEntry {
  EntryKind kind = EntryKind::Constant;
  Realization realization;
  Params theta{1};  // width-1 lift realizing the entry
  std::optional<KinkSolution> kink;  // normalized solution for kink entries
  double risk = 0.0;
  double grad_norm = 0.0;
  std::optional<CritClass> crit_class;  // advisory
  int hessian_corank = 0;
};

struct CriticalCatalog {
  std::vector<CatalogEntry> entries;
  std::vector<double> excluded;  // normalized kink roots dropped because vw = 0

  const CatalogEntry* global_minimum() const;
};

/// Width-1 lift of a kink solution on the target's domain.
Params lift_kink(const KinkSolution& s, double a, double b);

/// All critical realizations of a width-1 network for a continuous
/// piecewise-polynomial target. Throws FinitenessError for benchmark targets.
CriticalCatalog enumerate_all(const Target& t, double dedup = 1e-8);

}  // namespace reluland
