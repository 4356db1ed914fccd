#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collabgraph/bipartite.hpp"

namespace collab {

enum class Mode { author, project };

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

struct ProjectionParams {
  Mode mode = Mode::author;
  std::uint32_t min_degree = 1;
  std::uint32_t min_shared = 1;
  bool drop_isolated = false;

  friend bool operator==(const ProjectionParams&, const ProjectionParams&) = default;
};

struct ProjectedNode {
  std::string id;
  // Bipartite degree: projects per author, or authors per project.
  std::uint32_t counterpart_count = 0;

  friend bool operator==(const ProjectedNode&, const ProjectedNode&) = default;
};

struct WeightedEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  std::uint32_t weight = 0;

  friend auto operator<=>(const WeightedEdge&, const WeightedEdge&) = default;
};

struct Neighbor {
  std::uint32_t node = 0;
  std::uint32_t weight = 0;
};

// One-mode weighted graph in canonical form: nodes sorted by id, edges stored
// once with u < v and sorted by (u, v). Immutable after construction.
class ProjectedGraph {
 public:
  ProjectedGraph() = default;

  // Canonicalizes node order and edge orientation. Throws ContractViolation
  // on duplicate ids, self-loops, parallel edges, zero weights or
  // out-of-range endpoints.
  ProjectedGraph(Mode mode, std::vector<ProjectedNode> nodes, std::vector<WeightedEdge> edges);

  Mode mode() const { return mode_; }
  const std::vector<ProjectedNode>& nodes() const { return nodes_; }
  const std::vector<WeightedEdge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty(); }

  std::optional<std::uint32_t> find(std::string_view id) const;

  std::span<const Neighbor> neighbors(std::uint32_t node) const {
    return {adjacency_.data() + offsets_[node], adjacency_.data() + offsets_[node + 1]};
  }
  std::size_t degree(std::uint32_t node) const { return offsets_[node + 1] - offsets_[node]; }
  std::uint64_t weighted_degree(std::uint32_t node) const { return weighted_degree_[node]; }

  friend bool operator==(const ProjectedGraph& a, const ProjectedGraph& b) {
    return a.mode_ == b.mode_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  Mode mode_ = Mode::author;
  std::vector<ProjectedNode> nodes_;
  std::vector<WeightedEdge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<std::uint64_t> weighted_degree_;
};

// Filters nodes of `params.mode` by counterpart count, counts shared
// counterparts for every surviving pair (the other side is never
// thresholded), keeps pairs with weight >= min_shared and optionally drops
// nodes left without edges. Parallel over source nodes; the result does not
// depend on `threads`.
ProjectedGraph project(const BipartiteGraph& bg, const ProjectionParams& params,
                       unsigned threads = 1);

// Unthresholded one-mode neighbor lists indexed like the bipartite side of
// `mode`; every list is sorted.
std::vector<std::vector<std::uint32_t>> adjacency_maps(const BipartiteGraph& bg, Mode mode);

}  // namespace collab
