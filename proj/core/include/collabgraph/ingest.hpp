#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace collab {

// One (project, author) contribution as read from a link file.
struct LinkRecord {
  std::string project;
  std::string author;

  friend auto operator<=>(const LinkRecord&, const LinkRecord&) = default;
};

struct ParsedLinks {
  std::vector<LinkRecord> records;
  std::size_t parse_errors = 0;
};

// Reads "project<delim>author" lines. The line is split on the first
// delimiter; the author keeps the remainder verbatim. Lines without a
// delimiter or with an empty field are counted in parse_errors and skipped.
ParsedLinks parse_link_stream(std::istream& in, char delimiter = '\t');
ParsedLinks read_link_file(const std::filesystem::path& path, char delimiter = '\t');

// True iff `author` contains an email-like substring:
// [A-Za-z0-9._%+-]+ '@' [A-Za-z0-9.-]+ '.' [A-Za-z]{2,}
bool validate_author_id(std::string_view author);

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

// Raw author id -> canonical author id. Chains are collapsed when the map is
// built so every lookup is a single probe; members of a cycle all map to the
// lexicographically smallest id of that cycle.
class AliasMap {
 public:
  using Entries = std::unordered_map<std::string, std::string, StringHash, std::equal_to<>>;

  AliasMap() = default;

  // Builds from raw (alias, canonical) lines. For a repeated alias the first
  // mapping wins; later conflicting mappings are counted as skipped.
  static AliasMap from_pairs(std::span<const std::pair<std::string, std::string>> pairs);

  // Returns the canonical id, or `author` itself when it is not aliased.
  std::string_view resolve(std::string_view author) const;

  const Entries& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Lines dropped while loading (malformed or conflicting).
  std::size_t skipped_lines() const { return skipped_; }

 private:
  friend AliasMap load_alias_map(std::istream& in);

  Entries entries_;
  std::size_t skipped_ = 0;
};

// Reads "alias<TAB>canonical" lines.
AliasMap load_alias_map(std::istream& in);
AliasMap load_alias_file(const std::filesystem::path& path);

std::string resolve_alias(std::string_view author, const AliasMap& aliases);

struct CleaningStats {
  std::uint64_t rows_read = 0;
  std::uint64_t rows_dropped_invalid = 0;
  std::uint64_t rows_merged_alias = 0;
  std::uint64_t rows_merged_dedup = 0;
  std::uint64_t rows_dropped_min_authors = 0;
  std::uint64_t pairs_out = 0;
  std::uint64_t projects_out = 0;
  std::uint64_t authors_out = 0;

  friend bool operator==(const CleaningStats&, const CleaningStats&) = default;
};

// Indices into CleanedLinkSet::projects / authors.
struct LinkPair {
  std::uint32_t project = 0;
  std::uint32_t author = 0;

  friend auto operator<=>(const LinkPair&, const LinkPair&) = default;
};

// Distinct (project, canonical author) pairs. `projects` and `authors` are
// sorted and hold only names that occur in `pairs`; `pairs` is sorted.
struct CleanedLinkSet {
  std::vector<std::string> projects;
  std::vector<std::string> authors;
  std::vector<LinkPair> pairs;
  CleaningStats stats;
};

// alias resolution -> validation -> dedup -> min-authors filter.
// Every input row lands in exactly one of pairs_out, rows_dropped_invalid,
// rows_merged_dedup or rows_dropped_min_authors.
CleanedLinkSet clean_links(std::span<const LinkRecord> records, const AliasMap& aliases,
                           std::size_t min_authors = 2);

std::string stats_to_json(const CleaningStats& stats);

// Writes the pairs back out in link-file shape, sorted by (project, author).
void write_pairs(std::ostream& out, const CleanedLinkSet& links);

}  // namespace collab
