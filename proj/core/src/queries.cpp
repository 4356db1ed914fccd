#include "collabgraph/queries.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "collabgraph/errors.hpp"

namespace collab {

namespace {

std::uint32_t require_node(const ProjectedGraph& g, std::string_view id) {
  auto idx = g.find(id);
  if (!idx) throw NotFoundError("unknown node: " + std::string(id));
  return *idx;
}

char fold(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool contains_folded(std::string_view haystack, std::string_view folded_needle) {
  if (folded_needle.size() > haystack.size()) return false;
  auto it = std::search(haystack.begin(), haystack.end(), folded_needle.begin(),
                        folded_needle.end(), [](char a, char b) { return fold(a) == b; });
  return it != haystack.end();
}

}  // namespace

std::uint64_t weighted_degree(const ProjectedGraph& g, std::string_view node) {
  return g.weighted_degree(require_node(g, node));
}

std::vector<std::uint32_t> neighborhood_nodes(const ProjectedGraph& g, std::uint32_t center,
                                              std::uint32_t depth) {
  if (center >= g.node_count()) throw NotFoundError("node index out of range");
  constexpr auto unseen = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(g.node_count(), unseen);
  std::vector<std::uint32_t> frontier{center};
  std::vector<std::uint32_t> reached{center};
  dist[center] = 0;
  for (std::uint32_t level = 0; level < depth && !frontier.empty(); ++level) {
    std::vector<std::uint32_t> next;
    for (auto u : frontier) {
      for (const auto& nb : g.neighbors(u)) {
        if (dist[nb.node] != unseen) continue;
        dist[nb.node] = level + 1;
        next.push_back(nb.node);
        reached.push_back(nb.node);
      }
    }
    frontier = std::move(next);
  }
  std::sort(reached.begin(), reached.end());
  return reached;
}

ProjectedGraph induced_subgraph(const ProjectedGraph& g, std::span<const std::uint32_t> nodes) {
  constexpr auto absent = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap(g.node_count(), absent);
  std::vector<ProjectedNode> sub_nodes;
  sub_nodes.reserve(nodes.size());
  for (auto i : nodes) {
    if (i >= g.node_count()) throw NotFoundError("node index out of range");
    if (remap[i] != absent) continue;
    remap[i] = static_cast<std::uint32_t>(sub_nodes.size());
    sub_nodes.push_back(g.nodes()[i]);
  }
  std::vector<WeightedEdge> sub_edges;
  for (auto i : nodes) {
    for (const auto& nb : g.neighbors(i)) {
      if (nb.node > i && remap[nb.node] != absent) {
        sub_edges.push_back({remap[i], remap[nb.node], nb.weight});
      }
    }
  }
  return ProjectedGraph(g.mode(), std::move(sub_nodes), std::move(sub_edges));
}

ProjectedGraph neighborhood(const ProjectedGraph& g, std::string_view center, std::uint32_t depth) {
  const auto ball = neighborhood_nodes(g, require_node(g, center), depth);
  return induced_subgraph(g, ball);
}

std::vector<std::uint32_t> search_node_indices(const ProjectedGraph& g, std::string_view query,
                                               std::size_t limit) {
  std::vector<std::uint32_t> hits;
  if (query.empty() || limit == 0) return hits;
  std::string needle(query);
  for (auto& c : needle) c = fold(c);
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    if (contains_folded(g.nodes()[i].id, needle)) hits.push_back(i);
  }
  // Node indices follow id order, so the index breaks degree ties.
  auto before = [&](std::uint32_t a, std::uint32_t b) {
    const auto wa = g.weighted_degree(a);
    const auto wb = g.weighted_degree(b);
    return wa != wb ? wa > wb : a < b;
  };
  if (hits.size() > limit) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(limit), hits.end(),
                      before);
    hits.resize(limit);
  } else {
    std::sort(hits.begin(), hits.end(), before);
  }
  return hits;
}

std::vector<std::string> search_nodes(const ProjectedGraph& g, std::string_view query,
                                      std::size_t limit) {
  std::vector<std::string> ids;
  for (auto i : search_node_indices(g, query, limit)) ids.push_back(g.nodes()[i].id);
  return ids;
}

GraphStats graph_stats(const ProjectedGraph& g) {
  GraphStats s;
  s.node_count = g.node_count();
  s.edge_count = g.edge_count();
  for (const auto& e : g.edges()) s.total_weight += e.weight;
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    s.max_weighted_degree = std::max(s.max_weighted_degree, g.weighted_degree(i));
  }
  return s;
}

}  // namespace collab
