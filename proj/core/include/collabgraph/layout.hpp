#pragma once

#include <cstdint>
#include <vector>

#include "collabgraph/barnes_hut.hpp"
#include "collabgraph/projection.hpp"

namespace collab {

struct LayoutParams {
  double scaling = 2.0;    // repulsion coefficient
  double gravity = 1.0;
  double theta = 1.2;      // Barnes-Hut opening threshold
  double tolerance = 1.0;  // jitter tolerance for adaptive speed
  bool linlog = false;
  std::uint64_t seed = 1;
  std::uint32_t max_iterations = 1000;
  unsigned threads = 1;
};

struct Point {
  float x = 0.0f;
  float y = 0.0f;

  friend bool operator==(const Point&, const Point&) = default;
};

// Positions are single precision, which is also what the document format
// round-trips exactly. Forces are accumulated in double.
struct LayoutState {
  std::vector<Point> positions;
  std::vector<Vec2> previous_forces;  // for per-node swing / traction
  double speed = 1.0;
  double speed_efficiency = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;
};

// Uniform random positions in a disk of radius sqrt(n); a pure function of
// (node count, seed).
LayoutState init_layout(const ProjectedGraph& g, std::uint64_t seed);

struct StepReport {
  double mean_displacement = 0.0;
};

// One ForceAtlas2 iteration: Barnes-Hut repulsion between all nodes with mass
// degree + 1, weight-linear attraction along edges, gravity towards the
// origin and swing-damped adaptive speed. Coincident nodes are separated by a
// seed-derived 1e-6 jitter first. Throws ContractViolation if the state does
// not match the graph.
StepReport fa2_step(LayoutState& state, const ProjectedGraph& g, const LayoutParams& params);

// Net force each node would feel in the next step (after jitter), exposed for
// diagnostics and tests.
std::vector<Vec2> fa2_forces(LayoutState& state, const ProjectedGraph& g,
                             const LayoutParams& params);

// Iterates until max_iterations or until the mean displacement per node
// drops below 1e-3 of the mean edge length.
LayoutState run_layout(const ProjectedGraph& g, const LayoutParams& params);

// Zero positions, used for documents that have not been laid out.
LayoutState blank_layout(const ProjectedGraph& g);

struct RenderAttributes {
  std::vector<float> size;          // 2..20, linear in weighted degree
  std::vector<float> color_scalar;  // 0..1, linear in counterpart count

  friend bool operator==(const RenderAttributes&, const RenderAttributes&) = default;
};

inline constexpr double kMinNodeSize = 2.0;
inline constexpr double kMaxNodeSize = 20.0;

RenderAttributes render_attributes(const ProjectedGraph& g);

}  // namespace collab
