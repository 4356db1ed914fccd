#include "collabgraph/projection.hpp"

#include <algorithm>
#include <numeric>

#include "collabgraph/errors.hpp"
#include "parallel.hpp"

namespace collab {

std::string_view to_string(Mode mode) { return mode == Mode::author ? "author" : "project"; }

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "author") return Mode::author;
  if (text == "project") return Mode::project;
  return std::nullopt;
}

ProjectedGraph::ProjectedGraph(Mode mode, std::vector<ProjectedNode> nodes,
                               std::vector<WeightedEdge> edges)
    : mode_(mode), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  const auto n = nodes_.size();
  for (const auto& e : edges_) {
    if (e.u >= n || e.v >= n) throw ContractViolation("edge endpoint out of range");
    if (e.u == e.v) throw ContractViolation("self-loop on node " + nodes_[e.u].id);
    if (e.weight == 0) throw ContractViolation("edge weight must be positive");
  }

  auto by_id = [](const ProjectedNode& a, const ProjectedNode& b) { return a.id < b.id; };
  if (!std::is_sorted(nodes_.begin(), nodes_.end(), by_id)) {
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return nodes_[a].id < nodes_[b].id; });
    std::vector<std::uint32_t> remap(n);
    std::vector<ProjectedNode> sorted;
    sorted.reserve(n);
    for (std::uint32_t rank = 0; rank < n; ++rank) {
      remap[order[rank]] = rank;
      sorted.push_back(std::move(nodes_[order[rank]]));
    }
    nodes_ = std::move(sorted);
    for (auto& e : edges_) {
      e.u = remap[e.u];
      e.v = remap[e.v];
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (nodes_[i].id == nodes_[i - 1].id) throw ContractViolation("duplicate node id: " + nodes_[i].id);
  }

  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  auto endpoints = [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  };
  if (!std::is_sorted(edges_.begin(), edges_.end(), endpoints)) {
    std::sort(edges_.begin(), edges_.end(), endpoints);
  }
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
      throw ContractViolation("parallel edge " + nodes_[edges_[i].u].id + " - " +
                              nodes_[edges_[i].v].id);
    }
  }

  offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.resize(2 * edges_.size());
  weighted_degree_.assign(n, 0);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[cursor[e.u]++] = {e.v, e.weight};
    adjacency_[cursor[e.v]++] = {e.u, e.weight};
    weighted_degree_[e.u] += e.weight;
    weighted_degree_[e.v] += e.weight;
  }
  // Rows are filled in edge order; sort each by neighbor index.
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
}

std::optional<std::uint32_t> ProjectedGraph::find(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const ProjectedNode& a, std::string_view b) { return a.id < b; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes_.begin());
}

namespace {

// Uniform view of one side of the bipartite graph.
struct Side {
  const BipartiteGraph& bg;
  Mode mode;

  std::size_t size() const {
    return mode == Mode::author ? bg.author_count() : bg.project_count();
  }
  const std::string& name(std::uint32_t i) const {
    return mode == Mode::author ? bg.authors()[i] : bg.projects()[i];
  }
  std::span<const std::uint32_t> counterparts(std::uint32_t i) const {
    return mode == Mode::author ? bg.projects_of(i) : bg.authors_of(i);
  }
  std::span<const std::uint32_t> members(std::uint32_t c) const {
    return mode == Mode::author ? bg.authors_of(c) : bg.projects_of(c);
  }
};

}  // namespace

ProjectedGraph project(const BipartiteGraph& bg, const ProjectionParams& params,
                       unsigned threads) {
  if (params.min_degree < 1 || params.min_shared < 1) {
    throw ContractViolation("min_degree and min_shared must be at least 1");
  }
  const Side side{bg, params.mode};
  const std::size_t n = side.size();

  std::vector<char> keep(n, 0);
  for (std::uint32_t i = 0; i < n; ++i) keep[i] = side.counterparts(i).size() >= params.min_degree;

  // Neighbor-of-neighbor accumulation: for source u, walk each counterpart's
  // member list past u and bump a dense counter; flush after every u so the
  // counter memory stays O(n) per worker.
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(n, 256));
  std::vector<std::vector<WeightedEdge>> chunk_edges(chunks);
  detail::for_each_chunk(n, chunks, threads, [&](std::size_t chunk, std::size_t begin,
                                                 std::size_t end) {
    std::vector<std::uint32_t> count(n, 0);
    std::vector<std::uint32_t> touched;
    auto& out = chunk_edges[chunk];
    for (auto u = static_cast<std::uint32_t>(begin); u < end; ++u) {
      if (!keep[u]) continue;
      for (auto c : side.counterparts(u)) {
        const auto members = side.members(c);
        for (auto it = std::upper_bound(members.begin(), members.end(), u); it != members.end();
             ++it) {
          const auto v = *it;
          if (!keep[v]) continue;
          if (count[v]++ == 0) touched.push_back(v);
        }
      }
      std::sort(touched.begin(), touched.end());
      for (auto v : touched) {
        if (count[v] >= params.min_shared) out.push_back({u, v, count[v]});
        count[v] = 0;
      }
      touched.clear();
    }
  });

  std::size_t total = 0;
  for (const auto& c : chunk_edges) total += c.size();
  std::vector<WeightedEdge> edges;
  edges.reserve(total);
  for (auto& c : chunk_edges) {
    edges.insert(edges.end(), c.begin(), c.end());
    std::vector<WeightedEdge>().swap(c);
  }

  if (params.drop_isolated) {
    std::vector<char> has_edge(n, 0);
    for (const auto& e : edges) has_edge[e.u] = has_edge[e.v] = 1;
    for (std::size_t i = 0; i < n; ++i) keep[i] = keep[i] && has_edge[i];
  }

  std::vector<std::uint32_t> remap(n, UINT32_MAX);
  std::vector<ProjectedNode> nodes;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    remap[i] = static_cast<std::uint32_t>(nodes.size());
    nodes.push_back({side.name(i), static_cast<std::uint32_t>(side.counterparts(i).size())});
  }
  for (auto& e : edges) {
    e.u = remap[e.u];
    e.v = remap[e.v];
  }
  return ProjectedGraph(params.mode, std::move(nodes), std::move(edges));
}

std::vector<std::vector<std::uint32_t>> adjacency_maps(const BipartiteGraph& bg, Mode mode) {
  const Side side{bg, mode};
  std::vector<std::vector<std::uint32_t>> adj(side.size());
  for (std::uint32_t u = 0; u < side.size(); ++u) {
    auto& row = adj[u];
    for (auto c : side.counterparts(u)) {
      for (auto v : side.members(c)) {
        if (v != u) row.push_back(v);
      }
    }
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

}  // namespace collab
