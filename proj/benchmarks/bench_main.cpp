#include "mtlrc/empirical.hpp"
#include "mtlrc/fixed_point.hpp"
#include "mtlrc/graph.hpp"
#include "mtlrc/train.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace mtlrc;

void bm_lrc_group(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto spectra = power_law_spectra(broadcast_decay(PowerLawDecay({1.0}, {2.0}), T), 1024);
  const ProblemParams params(1000, T, 1.0);
  double r = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lrc_group(r, 1.5, spectra, params, 1.0).value);
    r *= 1.0000001;
  }
}
BENCHMARK(bm_lrc_group)->Arg(2)->Arg(16)->Arg(128);

void bm_fixed_point_solve(benchmark::State& state) {
  const auto spectra = power_law_spectra(PowerLawDecay({1.0}, {2.5}), 1024);
  const ProblemParams params(1000, 1, 1.0);
  const LossSpec loss(1.0, 1.0, 1.0);
  auto lrc = [&](double r) { return lrc_group(r, 2.0, spectra, params, 1.0).value; };
  const auto psi = make_excess_subroot(lrc, loss);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_fixed_point(psi, 1e-10).r_star);
  }
}
BENCHMARK(bm_fixed_point_solve);

void bm_fixed_point_bound(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto spectra = power_law_spectra(broadcast_decay(PowerLawDecay({1.0}, {3.0}), T), 512);
  const ProblemParams params(1000, T, 1.0);
  const LossSpec loss(1.0, 1.0, 1.0);
  const auto family = HypothesisFamily::group(2.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fixed_point_bound(family, spectra, params, loss));
  }
}
BENCHMARK(bm_fixed_point_bound)->Arg(2)->Arg(8);

void bm_empirical_grc(benchmark::State& state) {
  SyntheticTaskConfig cfg;
  cfg.T = 4;
  cfg.n = 64;
  cfg.p = 16;
  const auto family = HypothesisFamily::group(2.0, 1.0);
  const auto gen = generate_tasks(cfg, family, 1);
  const auto draws = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(empirical_grc(gen.sample, family, draws, 1).estimate);
  }
}
BENCHMARK(bm_empirical_grc)->Arg(100)->Arg(1000);

void bm_local_rc_draw(benchmark::State& state) {
  SyntheticTaskConfig cfg;
  cfg.T = 3;
  cfg.n = 24;
  cfg.p = 8;
  const auto family = HypothesisFamily::schatten(1.0, 0.8);
  const auto gen = generate_tasks(cfg, family, 2);
  const double lam = empirical_spectrum_max(gen.sample);
  const double r = 0.05 * family.ball_radius() * family.ball_radius() * lam;
  for (auto _ : state) {
    benchmark::DoNotOptimize(empirical_local_rc(gen.sample, family, r, 8, 3).estimate);
  }
}
BENCHMARK(bm_local_rc_draw);

void bm_frank_wolfe(benchmark::State& state) {
  Matrix w = Matrix::Zero(4, 4);
  for (Eigen::Index i = 0; i + 1 < 4; ++i) w(i, i + 1) = w(i + 1, i) = 1.0;
  const auto family = HypothesisFamily::graph(build_graph_operator(w, 1.0), 0.7);
  SyntheticTaskConfig cfg;
  cfg.T = 4;
  cfg.n = 128;
  cfg.p = 12;
  cfg.noise_std = 0.1;
  cfg.structure = TaskStructure::GraphSmooth;
  const auto gen = generate_tasks(cfg, family, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        train_frank_wolfe(gen.sample, family, 200, 1e-8).objective_trace.back());
  }
}
BENCHMARK(bm_frank_wolfe);

void bm_gram_spectra(benchmark::State& state) {
  SyntheticTaskConfig cfg;
  cfg.T = 2;
  cfg.n = static_cast<std::size_t>(state.range(0));
  cfg.p = 8;
  const auto family = HypothesisFamily::group(2.0, 1.0);
  const auto gen = generate_tasks(cfg, family, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gram_spectra(gen.sample, GaussianKernel{0.5}).max_leading());
  }
}
BENCHMARK(bm_gram_spectra)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
