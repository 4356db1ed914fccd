#include <benchmark/benchmark.h>

#include "collabgraph/barnes_hut.hpp"
#include "collabgraph/layout.hpp"
#include "synthetic.hpp"

namespace collab {
namespace {

void BM_BarnesHutRepulsion(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double theta = static_cast<double>(state.range(1)) / 10.0;
  const auto g = bench::random_graph(n, 4.0, 6);
  const auto layout = init_layout(g, 1);
  std::vector<Vec2> points;
  std::vector<double> masses;
  for (std::uint32_t i = 0; i < n; ++i) {
    points.push_back({layout.positions[i].x, layout.positions[i].y});
    masses.push_back(double(g.degree(i)) + 1.0);
  }
  for (auto _ : state) {
    auto forces = barnes_hut_repulsion(points, masses, 2.0, theta);
    benchmark::DoNotOptimize(forces.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BarnesHutRepulsion)
    ->Args({1'000, 0})
    ->Args({1'000, 12})
    ->Args({10'000, 12})
    ->Args({50'000, 12})
    ->Unit(benchmark::kMillisecond);

void BM_Fa2Step(benchmark::State& state) {
  const auto g = bench::random_graph(static_cast<std::size_t>(state.range(0)), 6.0, 7);
  LayoutParams params;
  params.threads = static_cast<unsigned>(state.range(1));
  auto layout = init_layout(g, 2);
  for (auto _ : state) benchmark::DoNotOptimize(fa2_step(layout, g, params));
}
BENCHMARK(BM_Fa2Step)
    ->Args({10'000, 1})
    ->Args({10'000, 4})
    ->Args({50'000, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace collab
