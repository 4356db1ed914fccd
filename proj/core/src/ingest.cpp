#include "collabgraph/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "collabgraph/errors.hpp"

namespace collab {

namespace {

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_local_char(char c) {
  return is_alpha(c) || is_digit(c) || c == '.' || c == '_' || c == '%' || c == '+' ||
         c == '-';
}

bool is_domain_char(char c) { return is_alpha(c) || is_digit(c) || c == '.' || c == '-'; }

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

ParsedLinks parse_link_stream(std::istream& in, char delimiter) {
  ParsedLinks out;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    const auto pos = line.find(delimiter);
    if (pos == std::string::npos || pos == 0 || pos + 1 == line.size()) {
      ++out.parse_errors;
      continue;
    }
    out.records.push_back({line.substr(0, pos), line.substr(pos + 1)});
  }
  if (in.bad()) throw IoError("read error on link stream");
  return out;
}

ParsedLinks read_link_file(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open link file: " + path.string());
  return parse_link_stream(in, delimiter);
}

bool validate_author_id(std::string_view author) {
  const std::size_t n = author.size();
  for (std::size_t at = 1; at < n; ++at) {
    if (author[at] != '@' || !is_local_char(author[at - 1])) continue;
    // The domain run must hold at least one character before the final dot,
    // and the dot must be followed by two letters (letters are domain chars,
    // so they extend the same run).
    for (std::size_t j = at + 1; j < n && is_domain_char(author[j]); ++j) {
      if (author[j] == '.' && j >= at + 2 && j + 2 < n && is_alpha(author[j + 1]) &&
          is_alpha(author[j + 2])) {
        return true;
      }
    }
  }
  return false;
}

AliasMap AliasMap::from_pairs(std::span<const std::pair<std::string, std::string>> pairs) {
  AliasMap map;
  Entries direct;
  direct.reserve(pairs.size());
  for (const auto& [alias, canonical] : pairs) {
    auto [it, inserted] = direct.try_emplace(alias, canonical);
    if (!inserted && it->second != canonical) ++map.skipped_;
  }

  // `direct` is a functional graph (one outgoing edge per alias). Walk each
  // chain once, memoizing results; a walk that re-enters its own path has
  // found a cycle.
  enum class State : std::uint8_t { unvisited, on_path, done };
  std::unordered_map<std::string_view, State> state;
  state.reserve(direct.size());
  map.entries_.reserve(direct.size());

  std::vector<std::string_view> path;
  for (const auto& [start, unused] : direct) {
    if (state[start] == State::done) continue;
    path.clear();
    std::string_view cur = start;
    while (true) {
      auto it = direct.find(cur);
      if (it == direct.end()) break;
      auto& st = state[cur];
      if (st != State::unvisited) break;
      st = State::on_path;
      path.push_back(cur);
      cur = it->second;
    }

    std::string_view target;
    auto found = direct.find(cur);
    if (found == direct.end()) {
      target = cur;
    } else if (state[cur] == State::done) {
      target = map.entries_.find(cur)->second;
    } else {
      auto cycle_begin = std::find(path.begin(), path.end(), cur);
      target = *std::min_element(cycle_begin, path.end());
    }
    const std::string resolved(target);
    for (auto node : path) {
      map.entries_.emplace(std::string(node), resolved);
      state[node] = State::done;
    }
  }
  return map;
}

std::string_view AliasMap::resolve(std::string_view author) const {
  auto it = entries_.find(author);
  return it == entries_.end() ? author : std::string_view(it->second);
}

AliasMap load_alias_map(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t malformed = 0;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    const auto pos = line.find('\t');
    if (pos == std::string::npos || pos == 0 || pos + 1 == line.size()) {
      ++malformed;
      continue;
    }
    pairs.emplace_back(line.substr(0, pos), line.substr(pos + 1));
  }
  if (in.bad()) throw IoError("read error on alias stream");
  AliasMap map = AliasMap::from_pairs(pairs);
  map.skipped_ += malformed;
  return map;
}

AliasMap load_alias_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open alias file: " + path.string());
  return load_alias_map(in);
}

std::string resolve_alias(std::string_view author, const AliasMap& aliases) {
  return std::string(aliases.resolve(author));
}

namespace {

// Assigns dense ids to strings in first-seen order.
class Interner {
 public:
  std::uint32_t intern(std::string_view s) {
    auto it = ids_.find(s);
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(s);
    ids_.emplace(names_.back(), id);
    return id;
  }
  std::vector<std::string>& names() { return names_; }

 private:
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> ids_;
  std::vector<std::string> names_;
};

// Keeps only the ids flagged in `used`, renumbered in lexicographic order of
// their names. Returns old-id -> new-id.
std::vector<std::uint32_t> compact_sorted(std::vector<std::string>& names,
                                          const std::vector<bool>& used) {
  std::vector<std::uint32_t> order;
  for (std::uint32_t i = 0; i < names.size(); ++i)
    if (used[i]) order.push_back(i);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return names[a] < names[b]; });

  std::vector<std::uint32_t> remap(names.size(), UINT32_MAX);
  std::vector<std::string> kept;
  kept.reserve(order.size());
  for (std::uint32_t rank = 0; rank < order.size(); ++rank) {
    remap[order[rank]] = rank;
    kept.push_back(std::move(names[order[rank]]));
  }
  names = std::move(kept);
  return remap;
}

}  // namespace

CleanedLinkSet clean_links(std::span<const LinkRecord> records, const AliasMap& aliases,
                           std::size_t min_authors) {
  if (min_authors == 0) throw ContractViolation("min_authors must be at least 1");

  CleaningStats stats;
  Interner projects;
  Interner authors;
  std::vector<LinkPair> pairs;
  pairs.reserve(records.size());

  for (const auto& rec : records) {
    ++stats.rows_read;
    const std::string_view canonical = aliases.resolve(rec.author);
    if (canonical != rec.author) ++stats.rows_merged_alias;
    if (!validate_author_id(canonical)) {
      ++stats.rows_dropped_invalid;
      continue;
    }
    pairs.push_back({projects.intern(rec.project), authors.intern(canonical)});
  }

  std::sort(pairs.begin(), pairs.end());
  const auto unique_end = std::unique(pairs.begin(), pairs.end());
  stats.rows_merged_dedup = static_cast<std::uint64_t>(pairs.end() - unique_end);
  pairs.erase(unique_end, pairs.end());

  // Pairs are grouped by project; drop whole groups below the threshold.
  std::vector<LinkPair> kept;
  kept.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    while (j < pairs.size() && pairs[j].project == pairs[i].project) ++j;
    if (j - i >= min_authors) {
      kept.insert(kept.end(), pairs.begin() + static_cast<std::ptrdiff_t>(i),
                  pairs.begin() + static_cast<std::ptrdiff_t>(j));
    } else {
      stats.rows_dropped_min_authors += j - i;
    }
    i = j;
  }

  std::vector<bool> project_used(projects.names().size(), false);
  std::vector<bool> author_used(authors.names().size(), false);
  for (const auto& p : kept) {
    project_used[p.project] = true;
    author_used[p.author] = true;
  }

  CleanedLinkSet out;
  const auto project_remap = compact_sorted(projects.names(), project_used);
  const auto author_remap = compact_sorted(authors.names(), author_used);
  out.projects = std::move(projects.names());
  out.authors = std::move(authors.names());
  for (auto& p : kept) p = {project_remap[p.project], author_remap[p.author]};
  std::sort(kept.begin(), kept.end());
  out.pairs = std::move(kept);

  stats.pairs_out = out.pairs.size();
  stats.projects_out = out.projects.size();
  stats.authors_out = out.authors.size();
  out.stats = stats;
  return out;
}

std::string stats_to_json(const CleaningStats& stats) {
  nlohmann::ordered_json j;
  j["rows_read"] = stats.rows_read;
  j["rows_dropped_invalid"] = stats.rows_dropped_invalid;
  j["rows_merged_alias"] = stats.rows_merged_alias;
  j["rows_merged_dedup"] = stats.rows_merged_dedup;
  j["rows_dropped_min_authors"] = stats.rows_dropped_min_authors;
  j["pairs_out"] = stats.pairs_out;
  j["projects_out"] = stats.projects_out;
  j["authors_out"] = stats.authors_out;
  return j.dump(2);
}

void write_pairs(std::ostream& out, const CleanedLinkSet& links) {
  for (const auto& p : links.pairs) {
    out << links.projects[p.project] << '\t' << links.authors[p.author] << '\n';
  }
}

}  // namespace collab
