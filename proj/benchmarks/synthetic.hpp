#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "collabgraph/ingest.hpp"
#include "collabgraph/projection.hpp"

namespace collab::bench {

// Link rows whose project and author are drawn independently from Zipf(1)
// rank distributions; roughly one row in 200 has an invalid author id.
std::vector<LinkRecord> zipf_links(std::size_t rows, std::size_t projects, std::size_t authors,
                                   std::uint64_t seed);

// Erdos-Renyi style projected graph with about `mean_degree` neighbours per node.
ProjectedGraph random_graph(std::size_t nodes, double mean_degree, std::uint64_t seed);

}  // namespace collab::bench
