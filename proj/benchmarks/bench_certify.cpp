#include <benchmark/benchmark.h>

#include "conecert/l1cert.hpp"
#include "conecert/l2cert.hpp"
#include "conecert/models.hpp"

namespace {

using namespace conecert;

void BM_certify_l1_virus(benchmark::State& state) {
  const SystemDescription s = build_virus_example();
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify_l1(s));
  }
}
BENCHMARK(BM_certify_l1_virus);

void BM_assemble_l1_virus(benchmark::State& state) {
  const SystemDescription s = build_virus_example();
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_l1_lp(s, 1e-7, 1e-6));
  }
}
BENCHMARK(BM_assemble_l1_virus);

void BM_certify_l2_scalar(benchmark::State& state) {
  SystemDescription s;
  s.kind = SystemKind::Gss;
  s.dims = {1, 1, 1};
  s.modes.push_back({0, Matrix::from_rows({{0.5}}), Matrix::from_rows({{1.0}}),
                     Matrix::from_rows({{1.0}}), Matrix::from_rows({{0.0}})});
  s.graph.nodes = {"v1"};
  s.graph.mode_count = 1;
  s.graph.edges = {{0, 0, 0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify_l2(s));
  }
}
BENCHMARK(BM_certify_l2_scalar);

void BM_feasible_l2_virus_scaled(benchmark::State& state) {
  // Equilibrated virus system at a comfortably feasible gamma.
  SystemDescription s = build_virus_example();
  for (ModeMatrices& m : s.modes) {
    m.b = 0.01 * m.b;
    m.c = (1.0 / 3.0) * m.c;
  }
  const double margin = default_l2_margin(s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(feasible_l2(s, 5000.0, margin));
  }
}
BENCHMARK(BM_feasible_l2_virus_scaled)->Unit(benchmark::kMillisecond);

}  // namespace
