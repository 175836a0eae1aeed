#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "reluland/network.hpp"
#include "reluland/target.hpp"

namespace reluland {

struct TrainConfig {
  int H = 4;
  double lr = 1.0 / 20.0;
  double grad_tol = 1e-4;         // max-norm stopping threshold
  long long max_iters = 10'000'000;
  std::optional<double> weight_var;  // defaults to 2 / (1 + H)
  double dedup_l2 = 1e-4;
  std::uint64_t master_seed = 0;
  int runs = 50;
  /// Worker threads for ensemble(); 0 picks RELULAND_THREADS or the hardware count.
  int threads = 0;

  double effective_weight_var() const { return weight_var.value_or(2.0 / (1.0 + H)); }
  /// Throws DomainError on nonpositive settings.
  void validate() const;
};

struct TrainRun {
  std::uint64_t seed = 0;
  long long iterations = 0;
  Params theta{1};
  double grad_norm = 0.0;
  double risk = 0.0;
  Realization realization;
  bool converged = false;
  bool diverged = false;
  /// Some iterate had a kink exactly on a domain endpoint (or w = b = 0).
  bool hit_nonsmooth = false;
};

/// Xavier initialization: inner and outer weights i.i.d. normal with the given
/// variance (inner weights drawn first), biases and offset zero.
Params xavier_init(int H, std::uint64_t seed, double weight_var);

/// Full-batch gradient descent with the exact generalized gradient.
TrainRun gd_run(const Params& p0, const Target& t, const TrainConfig& cfg);

struct Cluster {
  std::size_t representative = 0;  // index into EnsembleReport::runs
  std::vector<std::size_t> members;
  double risk = 0.0;
};

struct EnsembleReport {
  std::vector<TrainRun> runs;       // in seed order
  std::vector<Cluster> clusters;    // sorted by risk
  bool all_co_clustered = false;
  std::size_t converged_runs = 0;

  double risk_spread() const;
};

/// Runs seeds master_seed .. master_seed + runs - 1 from Xavier starts and
/// greedily clusters converged realizations in seed order. The result does
/// not depend on the thread count.
EnsembleReport ensemble(const Target& t, const TrainConfig& cfg);

struct GFSample {
  double time = 0.0;
  double risk = 0.0;
};

struct GFRun {
  double t_end = 0.0;      // time actually reached
  long long accepted = 0;
  long long rejected = 0;
  double min_step = 0.0;
  double max_step = 0.0;
  bool step_underflow = false;
  std::vector<GFSample> trajectory;  // one sample per accepted step
  Params theta{1};
  double final_risk = 0.0;
};

/// Gradient flow theta' = -G(theta) by classical RK4 with step doubling: a
/// step is accepted when the full step and two half steps differ by less
/// than rtol in max-norm. Stops early, flagged, if the step falls below 1e-12.
GFRun gf_run(const Params& p0, const Target& t, double t_end, double rtol);

}  // namespace reluland
