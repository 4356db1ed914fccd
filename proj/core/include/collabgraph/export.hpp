#pragma once

#include <filesystem>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "collabgraph/layout.hpp"
#include "collabgraph/projection.hpp"

namespace collab {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kGraphFileExtension = ".graph.json";

// A projected graph together with its positions and render attributes, as
// stored in a .graph.json file. Only positions of the layout state are
// persisted.
struct GraphDocument {
  ProjectedGraph graph;
  LayoutState layout;
  RenderAttributes attrs;
  std::optional<ProjectionParams> params;

  friend bool operator==(const GraphDocument& a, const GraphDocument& b) {
    return a.graph == b.graph && a.layout.positions == b.layout.positions &&
           a.attrs == b.attrs && a.params == b.params;
  }
};

// Serializes to JSON with nodes sorted by id and edges by (source, target).
// Reals are written with the shortest representation that round-trips the
// stored float (at most 9 significant digits). Throws ContractViolation if
// layout or attrs do not cover exactly the graph's nodes.
std::string export_graph(const ProjectedGraph& g, const LayoutState& layout,
                         const RenderAttributes& attrs,
                         const std::optional<ProjectionParams>& params = std::nullopt);
std::string export_graph(const GraphDocument& doc);

// Throws ParseError, UnsupportedVersionError or IntegrityError.
GraphDocument import_graph(std::string_view bytes);

// Induced subgraph on `nodes` (indices into doc.graph) carrying over each
// node's position, size and colour from `doc`.
GraphDocument subgraph_document(const GraphDocument& doc, std::span<const std::uint32_t> nodes);

GraphDocument read_graph_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace collab
