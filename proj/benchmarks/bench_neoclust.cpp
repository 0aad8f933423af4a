#include <benchmark/benchmark.h>

#include <random>

#include "neoclust/neoclust.hpp"

namespace {

using namespace neoclust;

KernelProblem blob_problem(Index n) {
  BlobSpec spec;
  spec.n = n;
  spec.radius = 4.0;
  const Dataset d = overlapping_blobs(spec);
  return kernel_from_data(d.X, KernelSpec::linear(), 3, 0.1, 0.05);
}

KernelProblem karate_problem() {
  const Graph g = io::read_edge_list(std::string(NEOCLUST_DATA_DIR) + "/karate.txt");
  return kernel_from_graph(g, 2, 0.1, 0.1).problem;
}

void BM_AugLagEval(benchmark::State& state) {
  const KernelProblem p = blob_problem(state.range(0));
  const LowRankState st = lift(p, neo_iterate(p, std::nullopt).clustering);
  Multipliers m = Multipliers::zeros(p.n(), 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(auglag_eval(p, st, m));
}
BENCHMARK(BM_AugLagEval)->Arg(100)->Arg(300)->Arg(1000);

void BM_BoxSimplexQuadratic(benchmark::State& state) {
  const Index n = state.range(0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 1.0), dpos(0.1, 3.0);
  VectorXd a(n), D(n);
  for (Index i = 0; i < n; ++i) {
    a[i] = u(rng);
    D[i] = dpos(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(box_simplex_quadratic(a, D, 2.0, 3.0));
}
BENCHMARK(BM_BoxSimplexQuadratic)->Arg(100)->Arg(1000)->Arg(10000);

void BM_MinimizeBox(benchmark::State& state) {
  const Index n = state.range(0);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  MatrixXd B(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) B(i, j) = nd(rng);
  const MatrixXd Q = B * B.transpose() / double(n) + MatrixXd::Identity(n, n);
  VectorXd c(n);
  for (Index i = 0; i < n; ++i) c[i] = nd(rng);
  BoxProblem bp;
  bp.lower = VectorXd::Zero(n);
  bp.upper = VectorXd::Ones(n);
  bp.x0 = VectorXd::Zero(n);
  bp.objective = [&](const VectorXd& x, VectorXd& g) {
    g = Q * x + c;
    return 0.5 * x.dot(Q * x) + c.dot(x);
  };
  for (auto _ : state) benchmark::DoNotOptimize(minimize_box(bp));
}
BENCHMARK(BM_MinimizeBox)->Arg(50)->Arg(200);

void BM_KarateSolve(benchmark::State& state) {
  const KernelProblem p = karate_problem();
  IterativeOptions io;
  io.seed = 7;
  const LowRankState start = lift(p, neo_iterate(p, std::nullopt, io).clustering);
  SolverConfig cfg;
  cfg.method = static_cast<Method>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, start, cfg));
  state.SetLabel(std::string(to_string(cfg.method)));
}
BENCHMARK(BM_KarateSolve)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_NeoIterate(benchmark::State& state) {
  const KernelProblem p = blob_problem(state.range(0));
  IterativeOptions opts;
  opts.swap_search = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(neo_iterate(p, std::nullopt, opts));
}
BENCHMARK(BM_NeoIterate)->Args({300, 0})->Args({300, 1})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
