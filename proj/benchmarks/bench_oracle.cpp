#include <benchmark/benchmark.h>

#include "conecert/automaton.hpp"
#include "conecert/models.hpp"
#include "conecert/simulate.hpp"

namespace {

using namespace conecert;

void BM_enumerate_walks_virus(benchmark::State& state) {
  const SwitchingGraph g = build_virus_example().graph;
  const int horizon = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_walks(g, 2, horizon));
  }
}
BENCHMARK(BM_enumerate_walks_virus)->Arg(8)->Arg(16)->Arg(24);

void BM_l2_oracle_virus(benchmark::State& state) {
  const SystemDescription s = build_virus_example();
  const int horizon = static_cast<int>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(worst_case_l2_lower_bound(s, horizon, threads));
  }
}
BENCHMARK(BM_l2_oracle_virus)->Args({10, 1})->Args({10, 4})->Unit(benchmark::kMillisecond);

void BM_simulate_virus(benchmark::State& state) {
  const SystemDescription s = build_virus_example();
  const Walk walk = sample_walk(s.graph, 0, 200, 1);
  const std::vector<Vector> inputs(200, Vector(s.dims.q, 0.5));
  const Vector x0(s.dims.n, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(s, walk, inputs, x0));
  }
}
BENCHMARK(BM_simulate_virus);

}  // namespace
