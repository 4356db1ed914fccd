#include <benchmark/benchmark.h>

#include "collabgraph/ingest.hpp"
#include "synthetic.hpp"

namespace collab {
namespace {

void BM_ValidateAuthorId(benchmark::State& state) {
  const auto links = bench::zipf_links(10'000, 1'000, 2'000, 1);
  for (auto _ : state) {
    std::size_t valid = 0;
    for (const auto& r : links) valid += validate_author_id(r.author);
    benchmark::DoNotOptimize(valid);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(links.size()));
}
BENCHMARK(BM_ValidateAuthorId);

void BM_CleanLinks(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto links = bench::zipf_links(rows, rows / 10, rows * 3 / 20, 2);
  for (auto _ : state) {
    auto cleaned = clean_links(links, AliasMap{}, 2);
    benchmark::DoNotOptimize(cleaned.pairs.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CleanLinks)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace collab
