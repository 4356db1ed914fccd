#include <benchmark/benchmark.h>

#include "collabgraph/bipartite.hpp"
#include "collabgraph/projection.hpp"
#include "collabgraph/queries.hpp"
#include "synthetic.hpp"

namespace collab {
namespace {

BipartiteGraph zipf_bipartite(std::size_t rows) {
  return build_bipartite(clean_links(bench::zipf_links(rows, rows / 10, rows * 3 / 20, 3), AliasMap{}, 2));
}

void BM_ProjectAuthors(benchmark::State& state) {
  const auto bg = zipf_bipartite(static_cast<std::size_t>(state.range(0)));
  const ProjectionParams params{Mode::author, 2, 2, true};
  const auto threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    auto g = project(bg, params, threads);
    benchmark::DoNotOptimize(g.edges().data());
  }
}
BENCHMARK(BM_ProjectAuthors)
    ->Args({20'000, 1})
    ->Args({100'000, 1})
    ->Args({100'000, 4})
    ->Unit(benchmark::kMillisecond);

void BM_ProjectProjects(benchmark::State& state) {
  const auto bg = zipf_bipartite(static_cast<std::size_t>(state.range(0)));
  const ProjectionParams params{Mode::project, 1, 1, false};
  for (auto _ : state) {
    auto g = project(bg, params);
    benchmark::DoNotOptimize(g.edges().data());
  }
}
BENCHMARK(BM_ProjectProjects)->Arg(20'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_Neighborhood(benchmark::State& state) {
  const auto g = bench::random_graph(50'000, 6.0, 4);
  const auto depth = static_cast<std::uint32_t>(state.range(0));
  std::uint32_t center = 0;
  for (auto _ : state) {
    auto ball = neighborhood_nodes(g, center, depth);
    benchmark::DoNotOptimize(ball.data());
    center = (center + 7919) % static_cast<std::uint32_t>(g.node_count());
  }
}
BENCHMARK(BM_Neighborhood)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_Search(benchmark::State& state) {
  const auto g = bench::random_graph(50'000, 6.0, 5);
  for (auto _ : state) {
    auto hits = search_nodes(g, "n12", 20);
    benchmark::DoNotOptimize(hits.data());
  }
}
BENCHMARK(BM_Search)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace collab
