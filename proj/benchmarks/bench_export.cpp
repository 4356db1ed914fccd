#include <benchmark/benchmark.h>

#include "collabgraph/export.hpp"
#include "synthetic.hpp"

namespace collab {
namespace {

GraphDocument document(std::size_t n) {
  GraphDocument doc;
  doc.graph = bench::random_graph(n, 6.0, 8);
  doc.layout = init_layout(doc.graph, 3);
  doc.attrs = render_attributes(doc.graph);
  return doc;
}

void BM_Export(benchmark::State& state) {
  const auto doc = document(static_cast<std::size_t>(state.range(0)));
  std::size_t bytes = 0;
  for (auto _ : state) {
    auto text = export_graph(doc);
    bytes = text.size();
    benchmark::DoNotOptimize(text.data());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_Export)->Arg(1'000)->Arg(50'000)->Unit(benchmark::kMillisecond);

void BM_Import(benchmark::State& state) {
  const auto text = export_graph(document(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) {
    auto doc = import_graph(text);
    benchmark::DoNotOptimize(doc.graph.nodes().data());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Import)->Arg(1'000)->Arg(50'000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace collab
