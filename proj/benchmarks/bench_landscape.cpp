#include <benchmark/benchmark.h>

#include "reluland/enumerate.hpp"
#include "reluland/landscape.hpp"
#include "reluland/minima.hpp"
#include "reluland/train.hpp"

using namespace reluland;

namespace {

const BenchmarkTarget kBench(1.0 / 3.0, 2.0 / 3.0);

Params random_params(int H) {
  Params p(H);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = 0.3 + 0.1 * static_cast<double>(i % 7) - 0.25 * (i % 2);
  return p;
}

void BM_Risk(benchmark::State& s) {
  const Target t(kBench);
  const Params p = random_params(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(risk(p, t));
}
BENCHMARK(BM_Risk)->Arg(1)->Arg(4)->Arg(16);

void BM_Grad(benchmark::State& s) {
  const Target t(kBench);
  const Params p = random_params(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(grad(p, t));
}
BENCHMARK(BM_Grad)->Arg(1)->Arg(4)->Arg(16);

void BM_GradSmooth(benchmark::State& s) {
  const Target t(kBench);
  const Params p = random_params(4);
  const SmoothActivation act(1e6);
  for (auto _ : s) benchmark::DoNotOptimize(grad_smooth(p, t, act));
}
BENCHMARK(BM_GradSmooth)->Unit(benchmark::kMillisecond);

void BM_HessianFd(benchmark::State& s) {
  const Target t(kBench);
  const Params p = sample_M(kBench, 4, 0.5, 1.0, 1).theta;
  for (auto _ : s) benchmark::DoNotOptimize(hessian_fd(p, t));
}
BENCHMARK(BM_HessianFd)->Unit(benchmark::kMillisecond);

void BM_EnumerateSquare(benchmark::State& s) {
  const Target t(PiecewisePolynomial({0.0, 1.0}, {Polynomial{0.0, 0.0, 1.0}}));
  for (auto _ : s) benchmark::DoNotOptimize(enumerate_all(t));
}
BENCHMARK(BM_EnumerateSquare)->Unit(benchmark::kMillisecond);

void BM_EnumeratePiecewise(benchmark::State& s) {
  const Target t(PiecewisePolynomial({-1.0, 0.0, 2.0}, {Polynomial{0.0, 0.0, 1.0}, Polynomial{0.0, 0.0, 0.0, 0.5}}));
  for (auto _ : s) benchmark::DoNotOptimize(enumerate_all(t));
}
BENCHMARK(BM_EnumeratePiecewise)->Unit(benchmark::kMillisecond);

void BM_Ensemble(benchmark::State& s) {
  const Target t(kBench);
  TrainConfig cfg;
  cfg.master_seed = 42;
  cfg.runs = 10;
  cfg.threads = 1;
  for (auto _ : s) benchmark::DoNotOptimize(ensemble(t, cfg));
}
BENCHMARK(BM_Ensemble)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
