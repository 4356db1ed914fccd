#include "collabgraph/service.hpp"

#include <charconv>
#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <optional>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "collabgraph/errors.hpp"
#include "collabgraph/layout.hpp"
#include "collabgraph/queries.hpp"
#include "json_real.hpp"

namespace collab {

using nlohmann::json;

GraphRegistry::GraphRegistry() : snapshot_(std::make_shared<const Snapshot>()) {}

std::shared_ptr<const GraphRegistry::Snapshot> GraphRegistry::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

std::shared_ptr<const GraphDocument> GraphRegistry::find(std::string_view id) const {
  auto snap = snapshot();
  auto it = snap->find(id);
  return it == snap->end() ? nullptr : it->second;
}

void GraphRegistry::put(std::string id, GraphDocument doc) {
  auto entry = std::make_shared<const GraphDocument>(std::move(doc));
  std::lock_guard lock(mutex_);
  auto next = std::make_shared<Snapshot>(*snapshot_);
  (*next)[std::move(id)] = std::move(entry);
  snapshot_ = std::move(next);
}

void GraphRegistry::set_source(std::shared_ptr<const BipartiteGraph> source) {
  std::lock_guard lock(mutex_);
  source_ = std::move(source);
}

std::shared_ptr<const BipartiteGraph> GraphRegistry::source() const {
  std::lock_guard lock(mutex_);
  return source_;
}

std::size_t load_graph_directory(GraphRegistry& registry, const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > kGraphFileExtension.size() &&
        name.ends_with(kGraphFileExtension)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    auto name = path.filename().string();
    name.resize(name.size() - kGraphFileExtension.size());
    registry.put(std::move(name), read_graph_file(path));
  }
  return files.size();
}

namespace {

// Single worker draining jobs in submission order.
class JobQueue {
 public:
  JobQueue() : worker_([this] { loop(); }) {}
  ~JobQueue() {
    {
      std::lock_guard lock(mutex_);
      stopping_ = true;
    }
    cv_.notify_all();
    worker_.join();
  }

  template <class F>
  auto submit(F&& fn) -> std::future<decltype(fn())> {
    using R = decltype(fn());
    auto task = std::make_shared<std::packaged_task<R()>>(std::forward<F>(fn));
    auto future = task->get_future();
    {
      std::lock_guard lock(mutex_);
      jobs_.emplace_back([task] { (*task)(); });
    }
    cv_.notify_one();
    return future;
  }

 private:
  void loop() {
    while (true) {
      std::function<void()> job;
      {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [this] { return stopping_ || !jobs_.empty(); });
        if (jobs_.empty()) return;
        job = std::move(jobs_.front());
        jobs_.pop_front();
      }
      job();
    }
  }

  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> jobs_;
  bool stopping_ = false;
  std::thread worker_;
};

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view error, std::string detail) {
  send_json(res, status, json{{"error", error}, {"detail", std::move(detail)}});
}

// Strict non-negative integer parse of a query value.
std::optional<std::int64_t> parse_int(const std::string& text) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

json node_json(const GraphDocument& doc, std::uint32_t i) {
  const auto& node = doc.graph.nodes()[i];
  return json{{"id", node.id},
              {"label", node.id},
              {"x", detail::json_real(doc.layout.positions[i].x)},
              {"y", detail::json_real(doc.layout.positions[i].y)},
              {"size", detail::json_real(doc.attrs.size[i])},
              {"color_scalar", detail::json_real(doc.attrs.color_scalar[i])},
              {"counterpart_count", node.counterpart_count},
              {"weighted_degree", doc.graph.weighted_degree(i)}};
}

// Request handlers; a POST holds one while its projection job runs.
constexpr std::size_t kRequestThreads = 16;

struct ProjectionOutcome {
  int status = 201;
  std::string id;
  std::string detail;
};

}  // namespace

struct GraphService::Impl {
  std::shared_ptr<GraphRegistry> registry;
  ServiceConfig config;
  httplib::Server server;
  JobQueue jobs;
  std::uint64_t next_projection = 1;  // only touched on the job thread

  Impl(std::shared_ptr<GraphRegistry> r, ServiceConfig c)
      : registry(std::move(r)), config(std::move(c)) {
    server.new_task_queue = [] { return new httplib::ThreadPool(kRequestThreads); };
    routes();
  }

  std::shared_ptr<const GraphDocument> lookup(const std::string& id, httplib::Response& res) {
    auto doc = registry->find(id);
    if (!doc) send_error(res, 404, "not_found", "unknown graph id: " + id);
    return doc;
  }

  void routes() {
    server.Get("/api/graphs", [this](const httplib::Request&, httplib::Response& res) {
      json list = json::array();
      for (const auto& [id, doc] : *registry->snapshot()) {
        list.push_back({{"id", id},
                        {"mode", to_string(doc->graph.mode())},
                        {"node_count", doc->graph.node_count()},
                        {"edge_count", doc->graph.edge_count()}});
      }
      send_json(res, 200, list);
    });

    server.Get(R"(/api/graphs/([^/]+))", [this](const httplib::Request& req,
                                                 httplib::Response& res) {
      auto doc = lookup(req.matches[1], res);
      if (!doc) return;
      res.status = 200;
      res.set_content(export_graph(*doc), "application/json");
    });

    server.Get(R"(/api/graphs/([^/]+)/search)", [this](const httplib::Request& req,
                                                        httplib::Response& res) {
      auto doc = lookup(req.matches[1], res);
      if (!doc) return;
      if (!req.has_param("q")) {
        send_error(res, 400, "bad_request", "missing query parameter 'q'");
        return;
      }
      std::int64_t limit = 20;
      if (req.has_param("limit")) {
        auto parsed = parse_int(req.get_param_value("limit"));
        if (!parsed || *parsed < 1 || *parsed > 200) {
          send_error(res, 400, "bad_request", "limit must be an integer in [1, 200]");
          return;
        }
        limit = *parsed;
      }
      json hits = json::array();
      for (auto i : search_node_indices(doc->graph, req.get_param_value("q"),
                                        static_cast<std::size_t>(limit))) {
        hits.push_back(node_json(*doc, i));
      }
      send_json(res, 200, hits);
    });

    server.Get(R"(/api/graphs/([^/]+)/nodes/(.+)/neighborhood)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 auto doc = lookup(req.matches[1], res);
                 if (!doc) return;
                 std::int64_t depth = 1;
                 if (req.has_param("depth")) {
                   auto parsed = parse_int(req.get_param_value("depth"));
                   if (!parsed || *parsed < 0 || *parsed > 6) {
                     send_error(res, 400, "bad_request", "depth must be an integer in [0, 6]");
                     return;
                   }
                   depth = *parsed;
                 }
                 const std::string node = req.matches[2];
                 auto center = doc->graph.find(node);
                 if (!center) {
                   send_error(res, 404, "not_found", "unknown node: " + node);
                   return;
                 }
                 const auto ball = neighborhood_nodes(doc->graph, *center,
                                                      static_cast<std::uint32_t>(depth));
                 const auto sub = subgraph_document(*doc, ball);
                 res.status = 200;
                 res.set_content(export_graph(sub), "application/json");
               });

    server.Post("/api/projections", [this](const httplib::Request& req, httplib::Response& res) {
      handle_projection(req, res);
    });

    if (!config.static_dir.empty()) {
      server.set_mount_point("/", config.static_dir.string());
    }
  }

  void handle_projection(const httplib::Request& req, httplib::Response& res) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      send_error(res, 400, "bad_request", "body must be a JSON object");
      return;
    }
    ProjectionParams params;
    bool with_layout = false;
    {
      auto mode_it = body.find("mode");
      std::optional<Mode> mode;
      if (mode_it != body.end() && mode_it->is_string()) {
        mode = parse_mode(mode_it->get<std::string>());
      }
      if (!mode) {
        send_error(res, 400, "bad_request", "mode must be \"author\" or \"project\"");
        return;
      }
      params.mode = *mode;
      for (const char* key : {"min_degree", "min_shared"}) {
        auto it = body.find(key);
        if (it == body.end() || !it->is_number_integer() || it->get<std::int64_t>() < 1 ||
            it->get<std::int64_t>() > UINT32_MAX) {
          send_error(res, 400, "bad_request", std::string(key) + " must be a positive integer");
          return;
        }
        (std::string_view(key) == "min_degree" ? params.min_degree : params.min_shared) =
            static_cast<std::uint32_t>(it->get<std::int64_t>());
      }
      for (const char* key : {"drop_isolated", "layout"}) {
        auto it = body.find(key);
        if (it == body.end()) continue;
        if (!it->is_boolean()) {
          send_error(res, 400, "bad_request", std::string(key) + " must be a boolean");
          return;
        }
        (std::string_view(key) == "layout" ? with_layout : params.drop_isolated) = it->get<bool>();
      }
    }

    auto source = registry->source();
    if (!source) {
      send_error(res, 409, "conflict", "no bipartite source loaded; start serve with --pairs");
      return;
    }

    auto outcome = jobs.submit([this, source, params, with_layout] {
      return run_projection(*source, params, with_layout);
    });
    ProjectionOutcome result;
    try {
      result = outcome.get();
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
      return;
    }
    if (result.status != 201) {
      send_error(res, result.status, "unprocessable", result.detail);
      return;
    }
    send_json(res, 201, json{{"id", result.id}});
  }

  ProjectionOutcome run_projection(const BipartiteGraph& source, const ProjectionParams& params,
                                   bool with_layout) {
    GraphDocument doc;
    doc.graph = project(source, params, config.threads);
    if (doc.graph.node_count() > config.node_cap) {
      return {422, "",
              "projection has " + std::to_string(doc.graph.node_count()) +
                  " nodes, above the cap of " + std::to_string(config.node_cap) +
                  "; raise min_degree or min_shared"};
    }
    if (with_layout) {
      LayoutParams lp;
      lp.threads = config.threads;
      doc.layout = run_layout(doc.graph, lp);
    } else {
      doc.layout = blank_layout(doc.graph);
    }
    doc.attrs = render_attributes(doc.graph);
    doc.params = params;
    std::string id = "projection-" + std::to_string(next_projection++);
    registry->put(id, std::move(doc));
    return {201, std::move(id), ""};
  }
};

GraphService::GraphService(std::shared_ptr<GraphRegistry> registry, ServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(registry), std::move(config))) {}

GraphService::~GraphService() { stop(); }

int GraphService::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound <= 0) throw IoError("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void GraphService::run() { impl_->server.listen_after_bind(); }

void GraphService::stop() {
  if (impl_) impl_->server.stop();
}

void GraphService::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace collab
