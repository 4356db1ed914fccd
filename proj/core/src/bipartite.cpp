#include "collabgraph/bipartite.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "collabgraph/errors.hpp"

namespace collab {

namespace {

// Sorts names in place and returns old-index -> new-index.
std::vector<std::uint32_t> sort_names(std::vector<std::string>& names, const char* side) {
  std::vector<std::uint32_t> order(names.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return names[a] < names[b]; });
  std::vector<std::uint32_t> remap(names.size());
  std::vector<std::string> sorted;
  sorted.reserve(names.size());
  for (std::uint32_t rank = 0; rank < order.size(); ++rank) {
    remap[order[rank]] = rank;
    sorted.push_back(std::move(names[order[rank]]));
  }
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) {
      throw ContractViolation(std::string("duplicate ") + side + " name: " + sorted[i]);
    }
  }
  names = std::move(sorted);
  return remap;
}

std::optional<std::uint32_t> find_sorted(const std::vector<std::string>& names,
                                         std::string_view name) {
  auto it = std::lower_bound(names.begin(), names.end(), name,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == names.end() || *it != name) return std::nullopt;
  return static_cast<std::uint32_t>(it - names.begin());
}

}  // namespace

BipartiteGraph::BipartiteGraph(std::vector<std::string> projects,
                               std::vector<std::string> authors, std::vector<LinkPair> edges)
    : projects_(std::move(projects)), authors_(std::move(authors)) {
  for (const auto& e : edges) {
    if (e.project >= projects_.size() || e.author >= authors_.size()) {
      throw ContractViolation("bipartite edge index out of range");
    }
  }
  const bool projects_sorted = std::is_sorted(projects_.begin(), projects_.end());
  const bool authors_sorted = std::is_sorted(authors_.begin(), authors_.end());
  if (!projects_sorted || !authors_sorted) {
    const auto pmap = sort_names(projects_, "project");
    const auto amap = sort_names(authors_, "author");
    for (auto& e : edges) e = {pmap[e.project], amap[e.author]};
  } else {
    auto dup = [](const std::vector<std::string>& v) {
      return std::adjacent_find(v.begin(), v.end()) != v.end();
    };
    if (dup(projects_) || dup(authors_)) throw ContractViolation("duplicate node name");
  }
  if (!std::is_sorted(edges.begin(), edges.end())) std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  project_offsets_.assign(projects_.size() + 1, 0);
  author_offsets_.assign(authors_.size() + 1, 0);
  for (const auto& e : edges) {
    ++project_offsets_[e.project + 1];
    ++author_offsets_[e.author + 1];
  }
  std::partial_sum(project_offsets_.begin(), project_offsets_.end(), project_offsets_.begin());
  std::partial_sum(author_offsets_.begin(), author_offsets_.end(), author_offsets_.begin());

  // Edges are sorted by (project, author), so both fills produce sorted rows.
  project_authors_.resize(edges.size());
  author_projects_.resize(edges.size());
  std::vector<std::size_t> cursor(author_offsets_.begin(), author_offsets_.end() - 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    project_authors_[i] = edges[i].author;
    author_projects_[cursor[edges[i].author]++] = edges[i].project;
  }
}

std::optional<std::uint32_t> BipartiteGraph::find_project(std::string_view name) const {
  return find_sorted(projects_, name);
}

std::optional<std::uint32_t> BipartiteGraph::find_author(std::string_view name) const {
  return find_sorted(authors_, name);
}

BipartiteGraph build_bipartite(const CleanedLinkSet& links) {
  return BipartiteGraph(links.projects, links.authors, links.pairs);
}

BipartiteGraph build_bipartite(std::span<const LinkRecord> records) {
  std::unordered_map<std::string_view, std::uint32_t> project_ids;
  std::unordered_map<std::string_view, std::uint32_t> author_ids;
  std::vector<std::string> projects;
  std::vector<std::string> authors;
  std::vector<LinkPair> edges;
  edges.reserve(records.size());
  for (const auto& rec : records) {
    auto [pit, pnew] = project_ids.try_emplace(rec.project, projects.size());
    if (pnew) projects.push_back(rec.project);
    auto [ait, anew] = author_ids.try_emplace(rec.author, authors.size());
    if (anew) authors.push_back(rec.author);
    edges.push_back({pit->second, ait->second});
  }
  return BipartiteGraph(std::move(projects), std::move(authors), std::move(edges));
}

}  // namespace collab
