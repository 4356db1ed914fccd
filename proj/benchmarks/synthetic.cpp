#include "synthetic.hpp"

#include <random>
#include <set>
#include <string>

namespace collab::bench {

std::vector<LinkRecord> zipf_links(std::size_t rows, std::size_t projects, std::size_t authors,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto zipf = [](std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t r = 0; r < n; ++r) w[r] = 1.0 / double(r + 1);
    return std::discrete_distribution<std::size_t>(w.begin(), w.end());
  };
  auto project = zipf(projects);
  auto author = zipf(authors);
  std::vector<LinkRecord> out;
  out.reserve(rows);
  for (std::size_t k = 0; k < rows; ++k) {
    const auto p = std::to_string(project(rng));
    const auto a = std::to_string(author(rng));
    out.push_back({"org/repo" + p, rng() % 200 == 0 ? "dev" + a + " <unknown>"
                                                     : "Dev " + a + " <dev" + a + "@example.org>"});
  }
  return out;
}

ProjectedGraph random_graph(std::size_t nodes, double mean_degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ProjectedNode> ns;
  for (std::size_t i = 0; i < nodes; ++i) ns.push_back({"n" + std::to_string(i), 1 + std::uint32_t(rng() % 40)});
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::vector<WeightedEdge> es;
  const auto target = static_cast<std::size_t>(mean_degree * double(nodes) / 2.0);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(nodes - 1));
  while (es.size() < target) {
    auto u = pick(rng), v = pick(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (seen.emplace(u, v).second) es.push_back({u, v, 1 + std::uint32_t(rng() % 5)});
  }
  return ProjectedGraph(Mode::author, std::move(ns), std::move(es));
}

}  // namespace collab::bench
