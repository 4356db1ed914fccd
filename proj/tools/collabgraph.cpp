// collabgraph: command-line driver for the collaboration-graph pipeline.
//
//   ingest   raw link file (+ alias file) -> cleaned pair file + stats sidecar
//   project  pair file -> one-mode .graph.json (no positions yet)
//   layout   .graph.json -> .graph.json with ForceAtlas2 positions
//   a2gr     .graph.json -> depth-bounded neighborhood around one node
//   serve    directory of .graph.json files -> HTTP API (+ optional re-projection source)

#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "collabgraph/bipartite.hpp"
#include "collabgraph/errors.hpp"
#include "collabgraph/export.hpp"
#include "collabgraph/ingest.hpp"
#include "collabgraph/layout.hpp"
#include "collabgraph/projection.hpp"
#include "collabgraph/queries.hpp"
#include "collabgraph/service.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitEmpty = 2;
constexpr int kExitNotFound = 3;
constexpr int kExitUsage = 64;

struct IngestArgs {
  std::string links;
  std::string aliases;
  std::size_t min_authors = 2;
  std::string out;
};

struct ProjectArgs {
  std::string pairs;
  std::string mode;
  std::uint32_t min_degree = 1;
  std::uint32_t min_shared = 1;
  bool drop_isolated = false;
  bool allow_empty = false;
  unsigned threads = 1;
  std::string out;
};

struct LayoutArgs {
  std::string graph;
  std::uint64_t seed = 1;
  std::uint32_t iterations = 1000;
  collab::LayoutParams params;
  std::string out;
};

struct A2grArgs {
  std::string graph;
  std::string center;
  std::uint32_t depth = 1;
  std::string out;
};

struct ServeArgs {
  std::string graphs;
  std::string pairs;
  std::string listen = "127.0.0.1:8080";
  std::size_t node_cap = 50'000;
  std::string static_dir;
  unsigned threads = 1;
};

int run_ingest(const IngestArgs& args) {
  const auto parsed = collab::read_link_file(args.links);
  if (parsed.parse_errors > 0) {
    std::cerr << "ingest: skipped " << parsed.parse_errors << " malformed line(s)\n";
  }
  collab::AliasMap aliases;
  if (!args.aliases.empty()) {
    aliases = collab::load_alias_file(args.aliases);
    if (aliases.skipped_lines() > 0) {
      std::cerr << "ingest: skipped " << aliases.skipped_lines() << " alias line(s)\n";
    }
  }
  const auto cleaned = collab::clean_links(parsed.records, aliases, args.min_authors);

  std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
  if (!out) throw collab::IoError("cannot write " + args.out);
  collab::write_pairs(out, cleaned);
  out.close();
  if (!out) throw collab::IoError("write error on " + args.out);

  const auto stats = collab::stats_to_json(cleaned.stats);
  collab::write_text_file(args.out + ".stats.json", stats + "\n");
  std::cerr << stats << "\n";
  return cleaned.pairs.empty() ? kExitEmpty : kExitOk;
}

int run_project(const ProjectArgs& args) {
  const auto parsed = collab::read_link_file(args.pairs);
  const auto bg = collab::build_bipartite(parsed.records);
  collab::ProjectionParams params;
  params.mode = *collab::parse_mode(args.mode);
  params.min_degree = args.min_degree;
  params.min_shared = args.min_shared;
  params.drop_isolated = args.drop_isolated;

  const auto g = collab::project(bg, params, args.threads);
  if (g.empty() && !args.allow_empty) {
    std::cerr << "project: no nodes survive the thresholds\n";
    return kExitEmpty;
  }
  collab::write_text_file(args.out, collab::export_graph(g, collab::blank_layout(g),
                                                         collab::render_attributes(g), params));
  return kExitOk;
}

int run_layout_cmd(LayoutArgs args) {
  auto doc = collab::read_graph_file(args.graph);
  args.params.seed = args.seed;
  args.params.max_iterations = args.iterations;
  doc.layout = collab::run_layout(doc.graph, args.params);
  doc.attrs = collab::render_attributes(doc.graph);
  collab::write_text_file(args.out, collab::export_graph(doc));
  return kExitOk;
}

int run_a2gr(const A2grArgs& args) {
  const auto doc = collab::read_graph_file(args.graph);
  const auto center = doc.graph.find(args.center);
  if (!center) {
    std::cerr << "a2gr: unknown center node: " << args.center << "\n";
    return kExitNotFound;
  }
  const auto ball = collab::neighborhood_nodes(doc.graph, *center, args.depth);
  collab::write_text_file(args.out, collab::export_graph(collab::subgraph_document(doc, ball)));
  return kExitOk;
}

int run_serve(const ServeArgs& args) {
  const auto colon = args.listen.rfind(':');
  int port = -1;
  if (colon != std::string::npos) {
    try {
      port = std::stoi(args.listen.substr(colon + 1));
    } catch (const std::exception&) {
      port = -1;
    }
  }
  if (port < 0 || port > 65535) {
    std::cerr << "serve: --listen expects HOST:PORT, got " << args.listen << "\n";
    return kExitUsage;
  }
  const auto host = args.listen.substr(0, colon);

  auto registry = std::make_shared<collab::GraphRegistry>();
  const auto loaded = collab::load_graph_directory(*registry, args.graphs);
  if (!args.pairs.empty()) {
    const auto parsed = collab::read_link_file(args.pairs);
    registry->set_source(
        std::make_shared<const collab::BipartiteGraph>(collab::build_bipartite(parsed.records)));
  }

  collab::ServiceConfig config;
  config.node_cap = args.node_cap;
  config.static_dir = args.static_dir;
  config.threads = args.threads;

  // Block termination signals in every thread; a dedicated thread waits for
  // them and shuts the server down.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  collab::GraphService service(registry, config);
  const int bound = service.bind(host, port);
  std::cout << "serving " << loaded << " graph(s) on " << host << ":" << bound << std::endl;

  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });
  service.run();
  // run() also returns if the server fails; wake the watcher either way.
  pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collaboration graph pipeline: ingest, project, layout, a2gr, serve"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "clean raw project/author links");
  ingest_cmd->add_option("--links", ingest.links, "project<TAB>author link file")->required();
  ingest_cmd->add_option("--aliases", ingest.aliases, "alias<TAB>canonical author map");
  ingest_cmd->add_option("--min-authors", ingest.min_authors, "minimum distinct authors per project")
      ->check(CLI::PositiveNumber);
  ingest_cmd->add_option("--out", ingest.out, "cleaned pair file")->required();

  ProjectArgs proj;
  auto* project_cmd = app.add_subcommand("project", "build a one-mode weighted projection");
  project_cmd->add_option("--pairs", proj.pairs, "cleaned pair file")->required();
  project_cmd->add_option("--mode", proj.mode, "author|project")
      ->required()
      ->check(CLI::IsMember({"author", "project"}));
  project_cmd->add_option("--min-degree", proj.min_degree, "minimum counterpart count per node")
      ->required()
      ->check(CLI::PositiveNumber);
  project_cmd->add_option("--min-shared", proj.min_shared, "minimum shared counterparts per edge")
      ->required()
      ->check(CLI::PositiveNumber);
  project_cmd->add_flag("--drop-isolated", proj.drop_isolated, "remove nodes left without edges");
  project_cmd->add_flag("--allow-empty", proj.allow_empty, "write an empty graph instead of failing");
  project_cmd->add_option("--threads", proj.threads, "worker threads")->check(CLI::PositiveNumber);
  project_cmd->add_option("--out", proj.out, "output .graph.json")->required();

  LayoutArgs lay;
  auto* layout_cmd = app.add_subcommand("layout", "compute ForceAtlas2 positions");
  layout_cmd->add_option("--graph", lay.graph, "input .graph.json")->required();
  layout_cmd->add_option("--seed", lay.seed, "random seed")->required();
  layout_cmd->add_option("--iterations", lay.iterations, "maximum iterations")
      ->check(CLI::PositiveNumber);
  layout_cmd->add_option("--scaling", lay.params.scaling, "repulsion coefficient")
      ->check(CLI::PositiveNumber);
  layout_cmd->add_option("--gravity", lay.params.gravity, "gravity")->check(CLI::NonNegativeNumber);
  layout_cmd->add_option("--theta", lay.params.theta, "Barnes-Hut threshold")
      ->check(CLI::NonNegativeNumber);
  layout_cmd->add_option("--tolerance", lay.params.tolerance, "jitter tolerance")
      ->check(CLI::PositiveNumber);
  layout_cmd->add_flag("--linlog", lay.params.linlog, "logarithmic attraction");
  layout_cmd->add_option("--threads", lay.params.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  layout_cmd->add_option("--out", lay.out, "output .graph.json")->required();

  A2grArgs a2gr;
  auto* a2gr_cmd = app.add_subcommand("a2gr", "extract the neighborhood of one node");
  a2gr_cmd->add_option("--graph", a2gr.graph, "input .graph.json")->required();
  a2gr_cmd->add_option("--center", a2gr.center, "center node id")->required();
  a2gr_cmd->add_option("--depth", a2gr.depth, "maximum hop distance from the center")->required();
  a2gr_cmd->add_option("--out", a2gr.out, "output .graph.json")->required();

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "serve graphs over HTTP");
  serve_cmd->add_option("--graphs", serve.graphs, "directory of .graph.json files")->required();
  serve_cmd->add_option("--pairs", serve.pairs, "cleaned pair file for re-projection");
  serve_cmd->add_option("--listen", serve.listen, "HOST:PORT")->required();
  serve_cmd->add_option("--node-cap", serve.node_cap, "maximum nodes in a projection")
      ->check(CLI::PositiveNumber);
  serve_cmd->add_option("--static-dir", serve.static_dir, "UI bundle directory served at /");
  serve_cmd->add_option("--threads", serve.threads, "worker threads for projection jobs")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ingest_cmd) return run_ingest(ingest);
    if (*project_cmd) return run_project(proj);
    if (*layout_cmd) return run_layout_cmd(lay);
    if (*a2gr_cmd) return run_a2gr(a2gr);
    if (*serve_cmd) return run_serve(serve);
  } catch (const collab::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const collab::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const collab::UnsupportedVersionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const collab::IntegrityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
