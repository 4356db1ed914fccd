#include "collabgraph/export.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "collabgraph/errors.hpp"
#include "collabgraph/queries.hpp"
#include "json_real.hpp"

namespace collab {

using nlohmann::json;

using detail::json_real;

namespace {

const json& member(const json& obj, const char* key) {
  if (!obj.is_object()) throw ParseError(std::string("expected object holding '") + key + "'");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

float read_real(const json& obj, const char* key) {
  const auto& v = member(obj, key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return static_cast<float>(v.get<double>());
}

std::uint64_t read_count(const json& obj, const char* key) {
  const auto& v = member(obj, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ParseError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string read_string(const json& obj, const char* key) {
  const auto& v = member(obj, key);
  if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

std::string export_graph(const ProjectedGraph& g, const LayoutState& layout,
                         const RenderAttributes& attrs,
                         const std::optional<ProjectionParams>& params) {
  const auto n = g.node_count();
  if (layout.positions.size() != n || attrs.size.size() != n || attrs.color_scalar.size() != n) {
    throw ContractViolation("layout and render attributes must cover every node of the graph");
  }

  const auto stats = graph_stats(g);
  json meta = {
      {"mode", to_string(g.mode())},
      {"schema_version", kSchemaVersion},
      {"stats",
       {{"node_count", stats.node_count},
        {"edge_count", stats.edge_count},
        {"total_weight", stats.total_weight},
        {"max_weighted_degree", stats.max_weighted_degree}}},
  };
  if (params) {
    meta["params"] = {{"min_degree", params->min_degree},
                      {"min_shared", params->min_shared},
                      {"drop_isolated", params->drop_isolated}};
  } else {
    meta["params"] = nullptr;
  }

  json nodes = json::array();
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& node = g.nodes()[i];
    nodes.push_back({{"id", node.id},
                     {"label", node.id},
                     {"x", json_real(layout.positions[i].x)},
                     {"y", json_real(layout.positions[i].y)},
                     {"size", json_real(attrs.size[i])},
                     {"color_scalar", json_real(attrs.color_scalar[i])},
                     {"counterpart_count", node.counterpart_count},
                     {"weighted_degree", g.weighted_degree(i)}});
  }
  json edges = json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({{"source", g.nodes()[e.u].id},
                     {"target", g.nodes()[e.v].id},
                     {"weight", e.weight}});
  }

  json doc = {{"meta", std::move(meta)}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
  return doc.dump(-1, ' ', false, json::error_handler_t::strict) + "\n";
}

std::string export_graph(const GraphDocument& doc) {
  return export_graph(doc.graph, doc.layout, doc.attrs, doc.params);
}

GraphDocument import_graph(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed graph document: ") + e.what());
  }

  try {
    const auto& meta = member(doc, "meta");
    const auto& version = member(meta, "schema_version");
    if (!version.is_number_integer()) throw ParseError("schema_version must be an integer");
    if (version.get<std::int64_t>() != kSchemaVersion) {
      throw UnsupportedVersionError("unsupported schema_version " + version.dump());
    }
    const auto mode = parse_mode(read_string(meta, "mode"));
    if (!mode) throw ParseError("meta.mode must be 'author' or 'project'");

    std::optional<ProjectionParams> params;
    if (auto it = meta.find("params"); it != meta.end() && !it->is_null()) {
      ProjectionParams p;
      p.mode = *mode;
      p.min_degree = static_cast<std::uint32_t>(read_count(*it, "min_degree"));
      p.min_shared = static_cast<std::uint32_t>(read_count(*it, "min_shared"));
      const auto& drop = member(*it, "drop_isolated");
      if (!drop.is_boolean()) throw ParseError("params.drop_isolated must be a boolean");
      p.drop_isolated = drop.get<bool>();
      params = p;
    }

    const auto& nodes_json = member(doc, "nodes");
    const auto& edges_json = member(doc, "edges");
    if (!nodes_json.is_array() || !edges_json.is_array()) {
      throw ParseError("nodes and edges must be arrays");
    }

    struct Row {
      ProjectedNode node;
      Point position;
      float size;
      float color;
    };
    std::vector<Row> rows;
    rows.reserve(nodes_json.size());
    for (const auto& nj : nodes_json) {
      rows.push_back({{read_string(nj, "id"),
                       static_cast<std::uint32_t>(read_count(nj, "counterpart_count"))},
                      {read_real(nj, "x"), read_real(nj, "y")},
                      read_real(nj, "size"),
                      read_real(nj, "color_scalar")});
    }
    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.node.id < b.node.id; });

    std::unordered_map<std::string_view, std::uint32_t> index;
    index.reserve(rows.size());
    for (std::uint32_t i = 0; i < rows.size(); ++i) {
      if (!index.emplace(rows[i].node.id, i).second) {
        throw IntegrityError("duplicate node id: " + rows[i].node.id);
      }
    }

    std::vector<WeightedEdge> edges;
    edges.reserve(edges_json.size());
    for (const auto& ej : edges_json) {
      const auto source = read_string(ej, "source");
      const auto target = read_string(ej, "target");
      const auto weight = read_count(ej, "weight");
      auto s = index.find(source);
      auto t = index.find(target);
      if (s == index.end() || t == index.end()) {
        throw IntegrityError("edge references missing node: " +
                             (s == index.end() ? source : target));
      }
      if (weight == 0 || weight > UINT32_MAX) throw IntegrityError("edge weight out of range");
      edges.push_back({s->second, t->second, static_cast<std::uint32_t>(weight)});
    }

    GraphDocument out;
    std::vector<ProjectedNode> nodes;
    nodes.reserve(rows.size());
    out.layout.positions.reserve(rows.size());
    for (auto& r : rows) {
      out.layout.positions.push_back(r.position);
      out.attrs.size.push_back(r.size);
      out.attrs.color_scalar.push_back(r.color);
      nodes.push_back(std::move(r.node));
    }
    out.layout.previous_forces.assign(rows.size(), Vec2{});
    try {
      out.graph = ProjectedGraph(*mode, std::move(nodes), std::move(edges));
    } catch (const ContractViolation& e) {
      throw IntegrityError(e.what());
    }
    out.params = params;
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed graph document: ") + e.what());
  }
}

GraphDocument subgraph_document(const GraphDocument& doc, std::span<const std::uint32_t> nodes) {
  std::vector<std::uint32_t> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  GraphDocument sub;
  sub.graph = induced_subgraph(doc.graph, sorted);
  sub.params = doc.params;
  for (auto i : sorted) {
    sub.layout.positions.push_back(doc.layout.positions[i]);
    sub.attrs.size.push_back(doc.attrs.size[i]);
    sub.attrs.color_scalar.push_back(doc.attrs.color_scalar[i]);
  }
  sub.layout.previous_forces.assign(sorted.size(), Vec2{});
  return sub;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read error on " + path.string());
  return std::move(buf).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write error on " + path.string());
}

GraphDocument read_graph_file(const std::filesystem::path& path) {
  return import_graph(read_text_file(path));
}

}  // namespace collab
