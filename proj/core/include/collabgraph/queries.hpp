#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collabgraph/projection.hpp"

namespace collab {

// Sum of incident edge weights. Throws NotFoundError for unknown ids.
std::uint64_t weighted_degree(const ProjectedGraph& g, std::string_view node);

// Sorted indices of every node within `depth` unweighted hops of `center`.
std::vector<std::uint32_t> neighborhood_nodes(const ProjectedGraph& g, std::uint32_t center,
                                              std::uint32_t depth);

// Subgraph on `nodes` (indices into g) with every edge of g between them.
ProjectedGraph induced_subgraph(const ProjectedGraph& g, std::span<const std::uint32_t> nodes);

// Ego network: induced subgraph on the depth-ball around `center`.
ProjectedGraph neighborhood(const ProjectedGraph& g, std::string_view center, std::uint32_t depth);

// Case-insensitive substring match on node ids, ordered by descending
// weighted degree then id. An empty query matches nothing.
std::vector<std::string> search_nodes(const ProjectedGraph& g, std::string_view query,
                                      std::size_t limit);
// Same ordering, returning node indices.
std::vector<std::uint32_t> search_node_indices(const ProjectedGraph& g, std::string_view query,
                                               std::size_t limit);

struct GraphStats {
  std::uint64_t node_count = 0;
  std::uint64_t edge_count = 0;
  std::uint64_t total_weight = 0;
  std::uint64_t max_weighted_degree = 0;

  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

GraphStats graph_stats(const ProjectedGraph& g);

}  // namespace collab
