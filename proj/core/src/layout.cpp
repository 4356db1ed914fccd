#include "collabgraph/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "collabgraph/errors.hpp"

namespace collab {

namespace {

constexpr double kJitter = 1e-6;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// [0, 1) from the top 53 bits; unlike std::uniform_real_distribution this is
// identical across standard libraries.
double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// Moves `v` by `delta`, or by one ulp in that direction when `delta` is
// below the float resolution at `v`.
float nudge(float v, double delta) {
  const auto moved = static_cast<float>(static_cast<double>(v) + delta);
  if (moved != v || delta == 0.0) return moved;
  return std::nextafter(v, delta > 0 ? INFINITY : -INFINITY);
}

void separate_coincident(LayoutState& state) {
  auto& pos = state.positions;
  std::vector<std::uint32_t> order(pos.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (pos[a].x != pos[b].x) return pos[a].x < pos[b].x;
    if (pos[a].y != pos[b].y) return pos[a].y < pos[b].y;
    return a < b;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto prev = order[k - 1];
    const auto cur = order[k];
    if (!(pos[cur] == pos[prev])) continue;
    // Every member of a group after the first moves; the group anchor stays.
    const auto h = splitmix64(state.seed ^ splitmix64(state.iteration * 0x100000001b3ULL + cur));
    const double angle = 2.0 * std::numbers::pi * unit_double(h);
    pos[cur].x = nudge(pos[cur].x, kJitter * std::cos(angle));
    pos[cur].y = nudge(pos[cur].y, kJitter * std::sin(angle));
  }
}

void check_state(const LayoutState& state, const ProjectedGraph& g) {
  if (state.positions.size() != g.node_count()) {
    throw ContractViolation("layout state has " + std::to_string(state.positions.size()) +
                            " positions for a graph of " + std::to_string(g.node_count()) +
                            " nodes");
  }
}

double mean_edge_length(const LayoutState& state, const ProjectedGraph& g) {
  if (g.edge_count() == 0) return 0.0;
  double total = 0.0;
  for (const auto& e : g.edges()) {
    const auto& a = state.positions[e.u];
    const auto& b = state.positions[e.v];
    total += std::hypot(double(a.x) - b.x, double(a.y) - b.y);
  }
  return total / static_cast<double>(g.edge_count());
}

}  // namespace

LayoutState init_layout(const ProjectedGraph& g, std::uint64_t seed) {
  LayoutState state;
  state.seed = seed;
  const auto n = g.node_count();
  state.positions.resize(n);
  state.previous_forces.assign(n, Vec2{});
  std::mt19937_64 rng(seed);
  const double radius = std::sqrt(static_cast<double>(n));
  for (auto& p : state.positions) {
    const double r = radius * std::sqrt(unit_double(rng()));
    const double angle = 2.0 * std::numbers::pi * unit_double(rng());
    p = {static_cast<float>(r * std::cos(angle)), static_cast<float>(r * std::sin(angle))};
  }
  return state;
}

LayoutState blank_layout(const ProjectedGraph& g) {
  LayoutState state;
  state.positions.assign(g.node_count(), Point{});
  state.previous_forces.assign(g.node_count(), Vec2{});
  return state;
}

std::vector<Vec2> fa2_forces(LayoutState& state, const ProjectedGraph& g,
                             const LayoutParams& params) {
  check_state(state, g);
  if (!(params.theta >= 0.0) || !(params.scaling > 0.0)) {
    throw ContractViolation("layout requires scaling > 0 and theta >= 0");
  }
  separate_coincident(state);

  const auto n = g.node_count();
  std::vector<Vec2> points(n);
  std::vector<double> mass(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    points[i] = {state.positions[i].x, state.positions[i].y};
    mass[i] = static_cast<double>(g.degree(i)) + 1.0;
  }

  auto forces = barnes_hut_repulsion(points, mass, params.scaling, params.theta, params.threads);

  if (params.gravity > 0.0) {
    for (std::uint32_t i = 0; i < n; ++i) {
      const double d = std::hypot(points[i].x, points[i].y);
      if (d == 0.0) continue;
      const double f = params.gravity * mass[i] / d;
      forces[i].x -= points[i].x * f;
      forces[i].y -= points[i].y * f;
    }
  }

  for (const auto& e : g.edges()) {
    const double dx = points[e.u].x - points[e.v].x;
    const double dy = points[e.u].y - points[e.v].y;
    double f = -static_cast<double>(e.weight);
    if (params.linlog) {
      const double d = std::hypot(dx, dy);
      if (d == 0.0) continue;
      f *= std::log1p(d) / d;
    }
    forces[e.u].x += dx * f;
    forces[e.u].y += dy * f;
    forces[e.v].x -= dx * f;
    forces[e.v].y -= dy * f;
  }
  return forces;
}

StepReport fa2_step(LayoutState& state, const ProjectedGraph& g, const LayoutParams& params) {
  check_state(state, g);
  const auto n = g.node_count();
  if (n == 0) return {};
  if (state.previous_forces.size() != n) state.previous_forces.assign(n, Vec2{});

  const auto forces = fa2_forces(state, g, params);

  // Adaptive global speed from swing (direction changes) versus traction
  // (consistent movement), both weighted by node mass.
  std::vector<double> swing(n);
  double total_swing = 0.0;
  double total_traction = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const double mass = static_cast<double>(g.degree(i)) + 1.0;
    const auto& prev = state.previous_forces[i];
    const auto& cur = forces[i];
    swing[i] = mass * std::hypot(prev.x - cur.x, prev.y - cur.y);
    total_swing += swing[i];
    total_traction += mass * 0.5 * std::hypot(prev.x + cur.x, prev.y + cur.y);
  }

  if (total_swing > 0.0 && total_traction > 0.0) {
    const double nd = static_cast<double>(n);
    const double estimated_jt = 0.05 * std::sqrt(nd);
    const double min_jt = std::sqrt(estimated_jt);
    const double max_jt = 10.0;
    double jt = params.tolerance *
                std::max(min_jt, std::min(max_jt, estimated_jt * total_traction / (nd * nd)));
    constexpr double min_speed_efficiency = 0.05;

    if (total_swing / total_traction > 2.0) {
      if (state.speed_efficiency > min_speed_efficiency) state.speed_efficiency *= 0.5;
      jt = std::max(jt, params.tolerance);
    }
    const double target_speed = jt * state.speed_efficiency * total_traction / total_swing;
    if (total_swing > jt * total_traction) {
      if (state.speed_efficiency > min_speed_efficiency) state.speed_efficiency *= 0.7;
    } else if (state.speed < 1000.0) {
      state.speed_efficiency *= 1.3;
    }
    constexpr double max_rise = 0.5;
    state.speed += std::min(target_speed - state.speed, max_rise * state.speed);
  }

  double displacement = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const double factor = state.speed / (1.0 + std::sqrt(state.speed * swing[i]));
    auto& p = state.positions[i];
    const Point before = p;
    p.x = static_cast<float>(p.x + forces[i].x * factor);
    p.y = static_cast<float>(p.y + forces[i].y * factor);
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) p = before;
    displacement += std::hypot(double(p.x) - before.x, double(p.y) - before.y);
  }
  state.previous_forces = forces;
  ++state.iteration;
  return {displacement / static_cast<double>(n)};
}

LayoutState run_layout(const ProjectedGraph& g, const LayoutParams& params) {
  LayoutState state = init_layout(g, params.seed);
  if (g.node_count() <= 1) return state;
  for (std::uint32_t it = 0; it < params.max_iterations; ++it) {
    const auto report = fa2_step(state, g, params);
    const double scale = mean_edge_length(state, g);
    if (scale > 0.0 && report.mean_displacement < 1e-3 * scale) break;
  }
  return state;
}

RenderAttributes render_attributes(const ProjectedGraph& g) {
  const auto n = g.node_count();
  RenderAttributes attrs;
  attrs.size.resize(n);
  attrs.color_scalar.resize(n);
  if (n == 0) return attrs;

  std::uint64_t wd_min = UINT64_MAX, wd_max = 0;
  std::uint32_t cc_min = UINT32_MAX, cc_max = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    wd_min = std::min(wd_min, g.weighted_degree(i));
    wd_max = std::max(wd_max, g.weighted_degree(i));
    cc_min = std::min(cc_min, g.nodes()[i].counterpart_count);
    cc_max = std::max(cc_max, g.nodes()[i].counterpart_count);
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    const double size =
        wd_max == wd_min
            ? 0.5 * (kMinNodeSize + kMaxNodeSize)
            : kMinNodeSize + (kMaxNodeSize - kMinNodeSize) *
                                 static_cast<double>(g.weighted_degree(i) - wd_min) /
                                 static_cast<double>(wd_max - wd_min);
    const double color = cc_max == cc_min
                             ? 0.5
                             : static_cast<double>(g.nodes()[i].counterpart_count - cc_min) /
                                   static_cast<double>(cc_max - cc_min);
    attrs.size[i] = static_cast<float>(size);
    attrs.color_scalar[i] = static_cast<float>(color);
  }
  return attrs;
}

}  // namespace collab
