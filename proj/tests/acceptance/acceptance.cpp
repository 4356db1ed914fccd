// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Criteria can be selected by name:
//   acceptance [name...]

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "collabgraph/bipartite.hpp"
#include "collabgraph/errors.hpp"
#include "collabgraph/export.hpp"
#include "collabgraph/ingest.hpp"
#include "collabgraph/layout.hpp"
#include "collabgraph/projection.hpp"
#include "collabgraph/queries.hpp"
#include "live_service.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace collab;
using nlohmann::json;
using Links = std::vector<std::pair<std::string, std::string>>;

namespace {

const fs::path kFixtures = COLLABGRAPH_FIXTURE_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages of a criterion.
class Verdict {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  bool ok() const { return failures_ == 0; }
  Outcome outcome(const std::string& summary) const {
    if (ok()) return {true, summary};
    return {false, summary + "; " + std::to_string(failures_) + "/" + std::to_string(checks_) +
                       " checks failed: " + messages_};
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string messages_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("collabgraph_acceptance_" + std::to_string(getpid())) / name;
  fs::create_directories(dir);
  return dir;
}

GraphDocument laid_out(ProjectedGraph g, std::uint64_t seed, unsigned threads = 1,
                       std::uint32_t iterations = 1000) {
  GraphDocument doc;
  doc.graph = std::move(g);
  LayoutParams params;
  params.seed = seed;
  params.threads = threads;
  params.max_iterations = iterations;
  doc.layout = run_layout(doc.graph, params);
  doc.attrs = render_attributes(doc.graph);
  return doc;
}

// --- projection oracle -------------------------------------------------------

Outcome projection_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240101);
  Verdict v;
  std::size_t edges_checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto np = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
    const auto na = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
    const auto density = std::uniform_real_distribution<double>(0.005, 0.2)(rng);
    const auto links = testing::random_links(rng, np, na, density);
    const auto bg = testing::to_bipartite(links);
    for (Mode mode : {Mode::author, Mode::project}) {
      ProjectionParams params;
      params.mode = mode;
      params.min_degree = std::uniform_int_distribution<std::uint32_t>(1, 6)(rng);
      params.min_shared = std::uniform_int_distribution<std::uint32_t>(1, 4)(rng);
      params.drop_isolated = rng() % 2 == 0;
      const auto threads = static_cast<unsigned>(1 + rng() % 4);
      const auto got = testing::as_expected(project(bg, params, threads));
      const auto want = testing::brute_force_projection(links, params);
      edges_checked += want.edges.size();
      v.check(got == want, "trial " + std::to_string(trial) + " mode " + std::string(to_string(mode)));
    }
  }
  const double elapsed = seconds_since(t0);
  v.check(elapsed < 60.0, "runtime " + fmt("%.1f s", elapsed) + " >= 60 s");
  return v.outcome("200 graphs x 2 modes, " + std::to_string(edges_checked) +
                   " oracle edges, " + fmt("%.1f s", elapsed) + " (< 60 s)");
}

// --- cleaning conservation ---------------------------------------------------

Outcome cleaning_conservation() {
  std::mt19937_64 rng(77);
  const auto dir = scratch_dir("cleaning");
  Verdict v;
  std::uint64_t rows = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t np = 5 + rng() % 60, na = 5 + rng() % 80;
    auto author = [&](std::size_t a) { return "Dev" + std::to_string(a) + " <d" + std::to_string(a) + "@ex.org>"; };

    // Alias lines: chains a -> a+1 -> ..., plus the occasional cycle and
    // aliases onto invalid ids.
    Links alias_lines;
    for (std::size_t a = 0; a + 1 < na; ++a) {
      if (rng() % 4 == 0) alias_lines.emplace_back(author(a), author(a + 1 + rng() % 3));
    }
    if (na > 3 && rng() % 2) {
      alias_lines.emplace_back(author(na - 1), author(na - 2));
      alias_lines.emplace_back(author(na - 2), author(na - 1));
    }
    if (rng() % 3 == 0) alias_lines.emplace_back(author(0), "^^ <^^>");

    std::ostringstream links_text, alias_text;
    std::vector<LinkRecord> raw;
    const std::size_t n_rows = 20 + rng() % 400;
    for (std::size_t k = 0; k < n_rows; ++k) {
      LinkRecord r{"org/p" + std::to_string(rng() % np), author(rng() % na)};
      switch (rng() % 10) {
        case 0: r.author = "^^ <^^>"; break;
        case 1: r.author = "nobody <nobody@localhost>"; break;
        case 2:
          if (!raw.empty()) r = raw[rng() % raw.size()];  // duplicate row
          break;
        default: break;
      }
      raw.push_back(r);
      links_text << r.project << '\t' << r.author << '\n';
      if (rng() % 25 == 0) links_text << "malformed line without tab\n";
    }
    for (const auto& [a, c] : alias_lines) alias_text << a << '\t' << c << '\n';
    write_text_file(dir / "links.tsv", links_text.str());
    write_text_file(dir / "aliases.tsv", alias_text.str());

    const std::size_t min_authors = 1 + rng() % 3;
    const auto parsed = read_link_file(dir / "links.tsv");
    const auto cleaned = clean_links(parsed.records, load_alias_file(dir / "aliases.tsv"), min_authors);
    const auto& s = cleaned.stats;
    const auto tag = "file " + std::to_string(trial);
    rows += s.rows_read;

    v.check(parsed.records == raw, tag + ": parse");
    v.check(s.rows_read == raw.size(), tag + ": rows_read");
    v.check(s.rows_read == s.pairs_out + s.rows_dropped_invalid + s.rows_merged_dedup +
                               s.rows_dropped_min_authors,
            tag + ": conservation identity");

    // Independent pipeline over plain containers.
    const auto closure = testing::naive_alias_closure(alias_lines);
    std::uint64_t merged_alias = 0, invalid = 0;
    std::set<std::pair<std::string, std::string>> distinct;
    std::uint64_t valid_rows = 0;
    for (const auto& r : raw) {
      auto it = closure.find(r.author);
      const std::string canonical = it == closure.end() ? r.author : it->second;
      merged_alias += canonical != r.author;
      if (!testing::regex_email_match(canonical)) {
        ++invalid;
        continue;
      }
      ++valid_rows;
      distinct.emplace(r.project, canonical);
    }
    std::map<std::string, std::size_t> per_project;
    for (const auto& [p, a] : distinct) ++per_project[p];
    std::set<std::pair<std::string, std::string>> kept;
    for (const auto& pa : distinct) {
      if (per_project[pa.first] >= min_authors) kept.insert(pa);
    }
    std::set<std::pair<std::string, std::string>> got;
    std::set<std::string> used_projects, used_authors;
    for (const auto& lp : cleaned.pairs) {
      got.emplace(cleaned.projects[lp.project], cleaned.authors[lp.author]);
      used_projects.insert(cleaned.projects[lp.project]);
      used_authors.insert(cleaned.authors[lp.author]);
    }
    v.check(got == kept, tag + ": pairs differ from oracle");
    v.check(got.size() == cleaned.pairs.size(), tag + ": duplicate pairs");
    v.check(s.rows_merged_alias == merged_alias, tag + ": rows_merged_alias");
    v.check(s.rows_dropped_invalid == invalid, tag + ": rows_dropped_invalid");
    v.check(s.rows_merged_dedup == valid_rows - distinct.size(), tag + ": rows_merged_dedup");
    v.check(s.pairs_out == kept.size() && s.projects_out == used_projects.size() &&
                s.authors_out == used_authors.size(),
            tag + ": output counts");
    v.check(std::vector<std::string>(used_projects.begin(), used_projects.end()) == cleaned.projects &&
                std::vector<std::string>(used_authors.begin(), used_authors.end()) == cleaned.authors,
            tag + ": name tables");
    for (const auto& a : cleaned.authors) v.check(validate_author_id(a), tag + ": invalid author kept");
    std::map<std::string, std::size_t> out_per_project;
    for (const auto& [p, a] : got) ++out_per_project[p];
    for (const auto& [p, c] : out_per_project) v.check(c >= min_authors, tag + ": min_authors");
  }
  fs::remove_all(dir);
  return v.outcome("50 link files, " + std::to_string(rows) + " rows, identity exact");
}

// --- email validation --------------------------------------------------------

Outcome email_validation() {
  std::ifstream in(kFixtures / "author_ids.txt");
  Verdict v;
  std::size_t n = 0, valid = 0;
  for (std::string line; std::getline(in, line);) {
    ++n;
    const bool got = validate_author_id(line);
    valid += got;
    v.check(got == testing::regex_email_match(line), "disagree on '" + line + "'");
  }
  v.check(n >= 40, "corpus has only " + std::to_string(n) + " strings");
  return v.outcome(std::to_string(n) + " strings (" + std::to_string(valid) +
                   " valid), agreement with std::regex " +
                   (v.ok() ? "100%" : "below 100%"));
}

// --- neighborhood ------------------------------------------------------------

Outcome neighborhood_oracle() {
  std::mt19937_64 rng(5150);
  Verdict v;
  std::size_t queries = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, 500)(rng);
    const double density = std::uniform_real_distribution<double>(0.5, 4.0)(rng) / double(n);
    const auto g = testing::random_projected(rng, n, density);
    for (int c = 0; c < 3; ++c) {
      const auto& center = g.nodes()[rng() % n].id;
      for (std::uint32_t d = 0; d <= 3; ++d) {
        ++queries;
        const auto sub = neighborhood(g, center, d);
        const auto ball = testing::bfs_ball(g, center, static_cast<int>(d));
        std::set<std::string> got;
        for (const auto& node : sub.nodes()) got.insert(node.id);
        const auto tag = "graph " + std::to_string(trial) + " depth " + std::to_string(d);
        v.check(got == ball, tag + ": node set");

        // Induced edges straight from g's edge list.
        std::set<std::tuple<std::string, std::string, std::uint32_t>> want_edges, got_edges;
        for (const auto& e : g.edges()) {
          const auto& a = g.nodes()[e.u].id;
          const auto& b = g.nodes()[e.v].id;
          if (ball.count(a) && ball.count(b)) want_edges.emplace(a, b, e.weight);
        }
        for (const auto& e : sub.edges()) {
          got_edges.emplace(sub.nodes()[e.u].id, sub.nodes()[e.v].id, e.weight);
        }
        v.check(got_edges == want_edges, tag + ": edge set");
      }
    }
  }
  return v.outcome("100 graphs (n <= 500), " + std::to_string(queries) +
                   " queries, d in {0,1,2,3}, exact");
}

// --- layout numerics ---------------------------------------------------------

Outcome layout_numerics() {
  Verdict v;
  std::mt19937_64 rng(99);

  // theta = 0 against the direct pairwise sum.
  double worst_exact = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = testing::random_projected(rng, 200, 0.02);
    const auto pts = testing::as_points(init_layout(g, rng()));
    const auto m = testing::repulsion_masses(g);
    const auto approx = barnes_hut_repulsion(pts, m, 2.0, 0.0);
    const auto exact = testing::exact_repulsion(pts, m, 2.0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      worst_exact = std::max(worst_exact, testing::relative_error(approx[i], exact[i]));
    }
  }
  v.check(worst_exact <= 1e-9, "theta=0 max relative error " + fmt("%.3g", worst_exact));

  // theta = 1.2: mean relative error per configuration, on the initial disk
  // and on partially converged layouts.
  double worst_mean = 0.0;
  for (std::size_t n : {10u, 20u, 50u, 100u, 200u, 350u, 500u}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto g = testing::random_projected(rng, n, 4.0 / double(n));
      for (std::uint32_t iterations : {0u, 100u}) {
        LayoutState state = init_layout(g, rng());
        LayoutParams params;
        for (std::uint32_t it = 0; it < iterations; ++it) fa2_step(state, g, params);
        const auto pts = testing::as_points(state);
        const auto m = testing::repulsion_masses(g);
        const auto approx = barnes_hut_repulsion(pts, m, 2.0, 1.2);
        const auto exact = testing::exact_repulsion(pts, m, 2.0);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += testing::relative_error(approx[i], exact[i]);
        worst_mean = std::max(worst_mean, total / double(n));
      }
    }
  }
  v.check(worst_mean <= 0.05, "theta=1.2 mean relative error " + fmt("%.4f", worst_mean));

  // Coincident starts.
  std::size_t steps = 0;
  for (std::size_t n : {2u, 10u, 100u, 300u}) {
    for (const Point origin : {Point{0.0f, 0.0f}, Point{1e6f, -1e6f}}) {
      const auto g = testing::random_projected(rng, n, 3.0 / double(n));
      LayoutState state = init_layout(g, n);
      for (auto& p : state.positions) p = origin;
      LayoutParams params;
      bool finite = true;
      for (int it = 0; it < 1000 && finite; ++it) {
        fa2_step(state, g, params);
        ++steps;
        for (const auto& p : state.positions) finite &= std::isfinite(p.x) && std::isfinite(p.y);
      }
      v.check(finite, "non-finite position, n=" + std::to_string(n));
    }
  }

  // Barbell separation.
  const auto barbell = testing::barbell_graph(10);
  int separated = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    LayoutParams params;
    params.seed = seed;
    const auto state = run_layout(barbell, params);
    separated += testing::mean_clique_distance(state, 10, true) <
                 testing::mean_clique_distance(state, 10, false);
  }
  v.check(separated >= 95, "barbell separated in " + std::to_string(separated) + "/100");

  return v.outcome("theta=0 max err " + fmt("%.2g", worst_exact) + " (<= 1e-9); theta=1.2 worst mean err " +
                   fmt("%.4f", worst_mean) + " (<= 0.05); " + std::to_string(steps) +
                   " steps from coincident starts finite; barbell " + std::to_string(separated) +
                   "/100 (>= 95)");
}

// --- determinism -------------------------------------------------------------

std::string pipeline_bytes(const Links& links, Mode mode, std::uint64_t seed, unsigned threads) {
  std::vector<LinkRecord> records;
  for (const auto& [p, a] : links) records.push_back({p, a});
  const auto cleaned = clean_links(records, AliasMap{}, 2);
  const auto bg = build_bipartite(cleaned);
  const ProjectionParams params{mode, 1, 1, false};
  auto doc = laid_out(project(bg, params, threads), seed, threads, 300);
  doc.params = params;
  return export_graph(doc);
}

Outcome determinism() {
  std::mt19937_64 rng(4242);
  Verdict v;
  std::size_t bytes = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const auto links = testing::random_links(rng, 40 + rng() % 80, 40 + rng() % 120, 0.05);
    const auto mode = trial % 2 ? Mode::project : Mode::author;
    const auto seed = rng();
    const auto reference = pipeline_bytes(links, mode, seed, 1);
    bytes += reference.size();
    v.check(pipeline_bytes(links, mode, seed, 1) == reference, "rerun differs");
    for (unsigned threads : {2u, 4u, 8u}) {
      v.check(pipeline_bytes(links, mode, seed, threads) == reference,
              std::to_string(threads) + " threads differ");
    }
    auto shuffled = links;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    v.check(pipeline_bytes(shuffled, mode, seed, 4) == reference, "input order changes output");
  }
  return v.outcome("12 pipelines x {rerun, 2/4/8 threads, shuffled input}, " +
                   std::to_string(bytes) + " bytes compared, byte-identical");
}

// --- performance -------------------------------------------------------------

constexpr std::size_t kPerfRows = 1'000'000;
constexpr std::size_t kPerfProjects = 100'000;
constexpr std::size_t kPerfAuthors = 150'000;

// Each row draws its project and its author independently from Zipf(1)
// rank distributions, so both sides get heavy-tailed degrees. About 0.5% of
// rows carry an invalid author id.
void write_zipf_links(const fs::path& path) {
  std::mt19937_64 rng(1);
  auto zipf = [](std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t r = 0; r < n; ++r) w[r] = 1.0 / double(r + 1);
    return std::discrete_distribution<std::size_t>(w.begin(), w.end());
  };
  auto project = zipf(kPerfProjects);
  auto author = zipf(kPerfAuthors);
  std::string text;
  text.reserve(kPerfRows * 56);
  for (std::size_t k = 0; k < kPerfRows; ++k) {
    const auto p = project(rng);
    const auto a = author(rng);
    text += "org" + std::to_string(p % 997) + "/repo" + std::to_string(p) + '\t';
    if (rng() % 200 == 0) {
      text += "dev" + std::to_string(a) + " <unknown>\n";
    } else {
      text += "Dev " + std::to_string(a) + " <dev" + std::to_string(a) + "@example.org>\n";
    }
  }
  write_text_file(path, text);
}

// Runs in a fresh process so its peak RSS is its own.
int perf_child(const fs::path& links) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto parsed = read_link_file(links);
  const auto cleaned = clean_links(parsed.records, AliasMap{}, 2);
  const auto bg = build_bipartite(cleaned);
  const auto g = project(bg, {Mode::author, 2, 2, true},
                         std::max(1u, std::thread::hardware_concurrency()));
  const double elapsed = seconds_since(t0);
  std::cout << elapsed << ' ' << parsed.records.size() << ' ' << cleaned.pairs.size() << ' '
            << g.node_count() << ' ' << g.edge_count() << std::endl;
  return 0;
}

Outcome performance(const char* self) {
  const auto dir = scratch_dir("perf");
  const auto links = dir / "links.tsv";
  write_zipf_links(links);

  int fds[2];
  if (pipe(fds) != 0) return {false, "pipe failed"};
  const pid_t pid = fork();
  if (pid == 0) {
    dup2(fds[1], 1);
    close(fds[0]);
    execl(self, self, "--perf-child", links.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);
  std::string out;
  char buf[256];
  for (ssize_t r; (r = read(fds[0], buf, sizeof buf)) > 0;) out.append(buf, static_cast<std::size_t>(r));
  close(fds[0]);
  int status = 0;
  rusage usage{};
  wait4(pid, &status, 0, &usage);
  fs::remove_all(dir);

  Verdict v;
  double elapsed = 0;
  std::size_t rows = 0, pairs = 0, nodes = 0, edges = 0;
  std::istringstream(out) >> elapsed >> rows >> pairs >> nodes >> edges;
  const double peak_gb = double(usage.ru_maxrss) / (1024.0 * 1024.0);
  v.check(WIFEXITED(status) && WEXITSTATUS(status) == 0, "child process failed");
  v.check(rows == kPerfRows, "read " + std::to_string(rows) + " rows");
  v.check(elapsed < 120.0, fmt("%.1f s", elapsed) + " >= 120 s");
  v.check(peak_gb < 4.0, fmt("%.2f GB", peak_gb) + " >= 4 GB");
  return v.outcome(std::to_string(rows) + " Zipf rows -> " + std::to_string(pairs) + " pairs -> " +
                   std::to_string(nodes) + " authors / " + std::to_string(edges) +
                   " edges (min_degree 2, min_shared 2) in " + fmt("%.1f s", elapsed) +
                   " (< 120 s), peak RSS " + fmt("%.2f GB", peak_gb) + " (< 4 GB), " +
                   std::to_string(std::thread::hardware_concurrency()) + " core(s)");
}

// --- round trip --------------------------------------------------------------

Outcome round_trip() {
  std::mt19937_64 rng(8080);
  Verdict v;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = std::uniform_int_distribution<std::size_t>(0, 100)(rng);
    auto g = testing::random_projected(rng, n, n ? 3.0 / double(n) : 0.0);
    auto doc = laid_out(std::move(g), rng(), 1, 50);
    if (rng() % 2) {
      doc.params = ProjectionParams{Mode::author, static_cast<std::uint32_t>(1 + rng() % 9),
                                    static_cast<std::uint32_t>(1 + rng() % 9), rng() % 2 == 0};
    }
    const auto text = export_graph(doc);
    try {
      const auto back = import_graph(text);
      v.check(back == doc, "graph " + std::to_string(trial) + " differs after import");
      v.check(export_graph(back) == text, "graph " + std::to_string(trial) + " re-export differs");
    } catch (const std::exception& e) {
      v.check(false, std::string("import threw: ") + e.what());
    }
  }
  return v.outcome("100 random laid-out graphs (n <= 100), import(export(g)) == g exactly");
}

// --- service contract --------------------------------------------------------

Outcome service_contract() {
  Verdict v;
  auto registry = std::make_shared<GraphRegistry>();
  const auto source = std::make_shared<const BipartiteGraph>(
      build_bipartite(read_link_file(kFixtures / "three_clusters.pairs.tsv").records));
  auto clusters = laid_out(project(*source, {Mode::author, 1, 1, false}), 3);
  registry->put("clusters", clusters);
  std::mt19937_64 rng(2);
  registry->put("random", laid_out(testing::random_projected(rng, 200, 0.02), 4, 1, 200));

  ServiceConfig config;
  config.node_cap = 15;
  testing::LiveService live(registry, config);
  auto c = live.client();

  auto status_of = [&](const std::string& path) {
    auto res = c.Get(path);
    return res ? res->status : -1;
  };
  auto is_error_body = [](const httplib::Result& res) {
    if (!res) return false;
    auto body = json::parse(res->body, nullptr, false);
    return body.is_object() && body.size() == 2 && body.contains("error") && body.contains("detail");
  };
  auto post = [&](const json& body) { return c.Post("/api/projections", body.dump(), "application/json"); };

  // 409 before a source is loaded.
  auto res = post({{"mode", "author"}, {"min_degree", 1}, {"min_shared", 1}});
  v.check(res && res->status == 409 && is_error_body(res), "no source -> 409");
  registry->set_source(source);

  res = c.Get("/api/graphs");
  v.check(res && res->status == 200 && json::parse(res->body).size() == 2, "list");
  res = c.Get("/api/graphs/clusters");
  v.check(res && res->status == 200 && res->body == export_graph(clusters), "get document");
  v.check(res && import_graph(res->body) == clusters, "document validates");
  res = c.Get("/api/graphs/missing");
  v.check(res && res->status == 404 && is_error_body(res), "unknown graph -> 404");

  res = c.Get("/api/graphs/clusters/search?q=kde&limit=3");
  if (res && res->status == 200) {
    json want = json::array();
    for (const auto& id : search_nodes(clusters.graph, "kde", 3)) want.push_back(id);
    json got = json::array();
    for (const auto& hit : json::parse(res->body)) got.push_back(hit["id"]);
    v.check(got == want, "search ordering");
  } else {
    v.check(false, "search status");
  }
  v.check(status_of("/api/graphs/clusters/search") == 400, "search without q -> 400");
  v.check(status_of("/api/graphs/clusters/search?q=a&limit=0") == 400, "limit=0 -> 400");
  v.check(status_of("/api/graphs/clusters/search?q=a&limit=201") == 400, "limit=201 -> 400");
  v.check(status_of("/api/graphs/missing/search?q=a") == 404, "search unknown graph -> 404");

  const auto& random_doc = *registry->find("random");
  for (int k = 0; k < 10; ++k) {
    const auto& center = random_doc.graph.nodes()[rng() % 200].id;
    const int depth = k % 4;
    res = c.Get("/api/graphs/random/nodes/" + testing::percent_encode(center) +
                "/neighborhood?depth=" + std::to_string(depth));
    std::set<std::string> got;
    if (res && res->status == 200) {
      const auto sub = import_graph(res->body);
      for (const auto& n : sub.graph.nodes()) got.insert(n.id);
    }
    v.check(got == testing::bfs_ball(random_doc.graph, center, depth), "neighborhood oracle");
  }
  const std::string bridge = "/api/graphs/clusters/nodes/" +
                             testing::percent_encode("Bridge Builder <bridge@example.net>");
  v.check(status_of(bridge + "/neighborhood?depth=7") == 400, "depth=7 -> 400");
  v.check(status_of(bridge + "/neighborhood?depth=-1") == 400, "depth=-1 -> 400");
  v.check(status_of("/api/graphs/clusters/nodes/nobody/neighborhood") == 404, "unknown node -> 404");

  res = post({{"mode", "author"}, {"min_degree", 0}, {"min_shared", 1}});
  v.check(res && res->status == 400 && is_error_body(res), "min_degree=0 -> 400");
  res = post({{"mode", "authors"}, {"min_degree", 1}, {"min_shared", 1}});
  v.check(res && res->status == 400, "bad mode -> 400");
  res = post({{"mode", "author"}, {"min_degree", 1}, {"min_shared", 1}});
  v.check(res && res->status == 422 && is_error_body(res), "19 authors over cap 15 -> 422");
  res = post({{"mode", "project"}, {"min_degree", 1}, {"min_shared", 1}, {"layout", true}});
  std::string created;
  if (res && res->status == 201) created = json::parse(res->body)["id"];
  v.check(!created.empty(), "projection -> 201");
  v.check(status_of("/api/graphs/" + created) == 200, "created graph retrievable");
  res = c.Get("/api/graphs");
  v.check(res && json::parse(res->body).size() == 3, "list grows by one");

  // 32 readers against a stream of projections.
  std::atomic<bool> done{false};
  std::atomic<long> reads{0}, partial{0};
  std::vector<std::thread> readers;
  for (int r = 0; r < 32; ++r) {
    readers.emplace_back([&] {
      auto rc = live.client();
      while (!done) {
        auto list = rc.Get("/api/graphs");
        if (!list || list->status != 200) {
          ++partial;
          continue;
        }
        for (const auto& entry : json::parse(list->body)) {
          auto doc = rc.Get("/api/graphs/" + entry["id"].get<std::string>());
          try {
            if (!doc || doc->status != 200) throw std::runtime_error("status");
            const auto g = import_graph(doc->body);
            if (g.graph.node_count() != entry["node_count"].get<std::size_t>()) {
              throw std::runtime_error("size");
            }
            ++reads;
          } catch (const std::exception&) {
            ++partial;
          }
        }
      }
    });
  }
  int created_under_load = 0;
  for (int k = 0; k < 8; ++k) {
    auto r = post({{"mode", "project"}, {"min_degree", 1 + k % 3}, {"min_shared", 1}, {"layout", true}});
    created_under_load += r && r->status == 201;
  }
  done = true;
  for (auto& t : readers) t.join();
  v.check(created_under_load == 8, "projections under load");
  v.check(partial == 0, std::to_string(partial.load()) + " partial or failed reads");

  return v.outcome("list/get/search/neighborhood/projection, 400/404/409/422 checked; " +
                   std::to_string(reads.load()) + " documents read by 32 concurrent readers during 8 POSTs, " +
                   std::to_string(partial.load()) + " partial");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 3 && std::string(argv[1]) == "--perf-child") return perf_child(argv[2]);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"projection-oracle", projection_oracle},
      {"cleaning-conservation", cleaning_conservation},
      {"email-validation", email_validation},
      {"neighborhood", neighborhood_oracle},
      {"layout-numerics", layout_numerics},
      {"determinism", determinism},
      {"performance", [&] { return performance("/proc/self/exe"); }},
      {"round-trip", round_trip},
      {"service-contract", service_contract},
  };
  std::set<std::string> selected(argv + 1, argv + argc);

  int failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!selected.empty() && !selected.count(name)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += !outcome.pass;
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << name << ": " << outcome.detail << " ["
              << fmt("%.1f s", seconds_since(t0)) << "]" << std::endl;
  }
  fs::remove_all(fs::temp_directory_path() / ("collabgraph_acceptance_" + std::to_string(getpid())));
  return failed == 0 ? 0 : 1;
}
