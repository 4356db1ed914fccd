#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "collabgraph/bipartite.hpp"
#include "collabgraph/export.hpp"

namespace collab {

// Immutable graph snapshots keyed by id. Readers take a shared_ptr to the
// whole map, writers install a modified copy; a reader therefore sees either
// the old or the new registry, never a partial one.
class GraphRegistry {
 public:
  using Snapshot = std::map<std::string, std::shared_ptr<const GraphDocument>, std::less<>>;

  GraphRegistry();

  std::shared_ptr<const Snapshot> snapshot() const;
  std::shared_ptr<const GraphDocument> find(std::string_view id) const;

  // Inserts or replaces `id`.
  void put(std::string id, GraphDocument doc);

  void set_source(std::shared_ptr<const BipartiteGraph> source);
  std::shared_ptr<const BipartiteGraph> source() const;

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::shared_ptr<const BipartiteGraph> source_;
};

// Registers every *.graph.json in `dir` under its file name minus the
// extension. Returns the number of graphs loaded.
std::size_t load_graph_directory(GraphRegistry& registry, const std::filesystem::path& dir);

struct ServiceConfig {
  std::size_t node_cap = 50'000;
  std::filesystem::path static_dir;  // served at "/" when non-empty
  unsigned threads = 1;              // for projection and layout jobs
};

// HTTP/JSON front end over a registry:
//   GET  /api/graphs
//   GET  /api/graphs/{id}
//   GET  /api/graphs/{id}/search?q=&limit=
//   GET  /api/graphs/{id}/nodes/{node}/neighborhood?depth=
//   POST /api/projections
class GraphService {
 public:
  GraphService(std::shared_ptr<GraphRegistry> registry, ServiceConfig config);
  ~GraphService();

  GraphService(const GraphService&) = delete;
  GraphService& operator=(const GraphService&) = delete;

  // Binds the listening socket; port 0 picks a free port. Returns the bound
  // port. Throws IoError on failure.
  int bind(const std::string& host, int port);

  // Serves until stop() is called. bind() must have succeeded.
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace collab
