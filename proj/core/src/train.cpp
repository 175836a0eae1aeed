#include "reluland/train.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "reluland/errors.hpp"
#include "reluland/landscape.hpp"
#include "reluland/rng.hpp"

namespace reluland {

void TrainConfig::validate() const {
  if (H < 1) throw DomainError("width must be at least 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw DomainError("learning rate must be positive");
  if (!(grad_tol > 0.0)) throw DomainError("gradient tolerance must be positive");
  if (max_iters < 0) throw DomainError("iteration cap must be nonnegative");
  if (!(effective_weight_var() > 0.0)) throw DomainError("weight variance must be positive");
  if (!(dedup_l2 > 0.0)) throw DomainError("dedup threshold must be positive");
  if (runs < 1) throw DomainError("number of runs must be at least 1");
  if (threads < 0) throw DomainError("thread count must be nonnegative");
}

Params xavier_init(int H, std::uint64_t seed, double weight_var) {
  if (H < 1) throw DomainError("width must be at least 1");
  if (!(weight_var > 0.0)) throw DomainError("weight variance must be positive");
  SplitMix64 rng(seed);
  const double sd = std::sqrt(weight_var);
  Params p(H);
  for (int j = 0; j < H; ++j) p.w(j) = rng.normal(0.0, sd);
  for (int j = 0; j < H; ++j) p.v(j) = rng.normal(0.0, sd);
  return p;
}

namespace {

bool nonsmooth(const Params& p, double lo, double hi) {
  for (int j = 0; j < p.width(); ++j) {
    if (std::abs(p.w(j) * lo + p.b(j)) < 1e-14 || std::abs(p.w(j) * hi + p.b(j)) < 1e-14) return true;
    if (p.w(j) == 0.0 && p.b(j) == 0.0) return true;
  }
  return false;
}

int worker_count(int requested, int tasks) {
  int n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("RELULAND_THREADS")) {
      try {
        n = std::stoi(env);
      } catch (const std::exception&) {
        n = 0;
      }
    }
  }
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return std::clamp(n, 1, std::max(tasks, 1));
}

}  // namespace

TrainRun gd_run(const Params& p0, const Target& t, const TrainConfig& cfg) {
  cfg.validate();
  TrainRun run;
  Params p = p0;
  long long k = 0;
  for (;; ++k) {
    if (nonsmooth(p, t.lo(), t.hi())) run.hit_nonsmooth = true;
    const GradientVector g = grad(p, t);
    run.grad_norm = g.max_norm();
    if (run.grad_norm < cfg.grad_tol) {
      run.converged = true;
      break;
    }
    if (k >= cfg.max_iters) break;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] -= cfg.lr * g[i];
      norm2 += p[i] * p[i];
    }
    if (!(std::sqrt(norm2) <= 1e8)) {
      run.diverged = true;
      ++k;
      break;
    }
  }
  run.iterations = k;
  run.risk = risk(p, t);
  run.realization = canonical(p, t.lo(), t.hi());
  run.theta = std::move(p);
  return run;
}

double EnsembleReport::risk_spread() const {
  if (clusters.empty()) return 0.0;
  return clusters.back().risk - clusters.front().risk;
}

EnsembleReport ensemble(const Target& t, const TrainConfig& cfg) {
  cfg.validate();
  const double var = cfg.effective_weight_var();
  EnsembleReport rep;
  rep.runs.resize(static_cast<std::size_t>(cfg.runs));

  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < cfg.runs; i = next++) {
      const std::uint64_t seed = cfg.master_seed + static_cast<std::uint64_t>(i);
      TrainRun r = gd_run(xavier_init(cfg.H, seed, var), t, cfg);
      r.seed = seed;
      rep.runs[static_cast<std::size_t>(i)] = std::move(r);
    }
  };
  const int n = worker_count(cfg.threads, cfg.runs);
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }

  for (std::size_t i = 0; i < rep.runs.size(); ++i) {
    const TrainRun& r = rep.runs[i];
    if (!r.converged) continue;
    ++rep.converged_runs;
    bool placed = false;
    for (Cluster& c : rep.clusters) {
      if (l2_distance(rep.runs[c.representative].realization, r.realization) < cfg.dedup_l2) {
        c.members.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) rep.clusters.push_back({i, {i}, r.risk});
  }
  std::stable_sort(rep.clusters.begin(), rep.clusters.end(),
                   [](const Cluster& x, const Cluster& y) { return x.risk < y.risk; });
  rep.all_co_clustered = rep.clusters.size() == 1;
  return rep;
}

// ---------------------------------------------------------------------------
// Gradient flow

namespace {

std::vector<double> flow(const std::vector<double>& y, int H, const Target& t) {
  const GradientVector g = grad(Params(H, y), t);
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = -g[i];
  return out;
}

std::vector<double> rk4_step(const std::vector<double>& y, double h, int H, const Target& t) {
  auto axpy = [](const std::vector<double>& a, double s, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * b[i];
    return out;
  };
  const std::vector<double> k1 = flow(y, H, t);
  const std::vector<double> k2 = flow(axpy(y, h / 2.0, k1), H, t);
  const std::vector<double> k3 = flow(axpy(y, h / 2.0, k2), H, t);
  const std::vector<double> k4 = flow(axpy(y, h, k3), H, t);
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace

GFRun gf_run(const Params& p0, const Target& t, double t_end, double rtol) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("flow horizon must be positive");
  if (!(rtol > 0.0)) throw DomainError("flow tolerance must be positive");
  const int H = p0.width();
  std::vector<double> y(p0.theta().begin(), p0.theta().end());
  double time = 0.0;
  double h = std::min(0.1, t_end);
  GFRun out;
  out.min_step = h;
  out.max_step = 0.0;
  out.trajectory.push_back({0.0, risk(p0, t)});

  while (time < t_end) {
    const double step = std::min(h, t_end - time);
    const std::vector<double> full = rk4_step(y, step, H, t);
    const std::vector<double> half = rk4_step(rk4_step(y, step / 2.0, H, t), step / 2.0, H, t);
    double err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) err = std::max(err, std::abs(full[i] - half[i]));
    if (err < rtol) {
      // Richardson extrapolation of the two estimates.
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = half[i] + (half[i] - full[i]) / 15.0;
      time += step;
      ++out.accepted;
      out.min_step = std::min(out.min_step, step);
      out.max_step = std::max(out.max_step, step);
      out.trajectory.push_back({time, risk(Params(H, y), t)});
      if (err < rtol / 32.0) h = std::min(2.0 * h, 1.0);
    } else {
      ++out.rejected;
      h = step / 2.0;
      if (h < 1e-12) {
        out.step_underflow = true;
        break;
      }
    }
  }
  out.t_end = time;
  out.theta = Params(H, std::move(y));
  out.final_risk = risk(out.theta, t);
  return out;
}

}  // namespace reluland
