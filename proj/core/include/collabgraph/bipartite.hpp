#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collabgraph/ingest.hpp"

namespace collab {

// Author/project contribution graph in CSR form, both directions.
// Names on each side are sorted and unique; indices are dense.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  // `edges` index into `projects` / `authors`. Names are sorted (indices
  // remapped accordingly) and duplicate edges collapse. Throws
  // ContractViolation on duplicate names or out-of-range indices.
  BipartiteGraph(std::vector<std::string> projects, std::vector<std::string> authors,
                 std::vector<LinkPair> edges);

  std::size_t project_count() const { return projects_.size(); }
  std::size_t author_count() const { return authors_.size(); }
  std::size_t edge_count() const { return project_authors_.size(); }

  const std::vector<std::string>& projects() const { return projects_; }
  const std::vector<std::string>& authors() const { return authors_; }

  // Sorted author indices of a project, and the transpose.
  std::span<const std::uint32_t> authors_of(std::uint32_t project) const {
    return {project_authors_.data() + project_offsets_[project],
            project_authors_.data() + project_offsets_[project + 1]};
  }
  std::span<const std::uint32_t> projects_of(std::uint32_t author) const {
    return {author_projects_.data() + author_offsets_[author],
            author_projects_.data() + author_offsets_[author + 1]};
  }

  std::optional<std::uint32_t> find_project(std::string_view name) const;
  std::optional<std::uint32_t> find_author(std::string_view name) const;

 private:
  std::vector<std::string> projects_;
  std::vector<std::string> authors_;
  std::vector<std::size_t> project_offsets_{0};
  std::vector<std::uint32_t> project_authors_;
  std::vector<std::size_t> author_offsets_{0};
  std::vector<std::uint32_t> author_projects_;
};

BipartiteGraph build_bipartite(const CleanedLinkSet& links);

// Deduplicating construction straight from records (no validation).
BipartiteGraph build_bipartite(std::span<const LinkRecord> records);

}  // namespace collab
