#include "collabgraph/barnes_hut.hpp"

#include <algorithm>
#include <cmath>

#include "collabgraph/errors.hpp"
#include "parallel.hpp"

namespace collab {

namespace {

constexpr int kMaxDepth = 48;
// Distances below this are clamped so near-coincident pairs stay finite.
constexpr double kMinDistanceSq = 1e-12;

int quadrant(const Vec2& p, double cx, double cy) {
  return (p.x >= cx ? 1 : 0) | (p.y >= cy ? 2 : 0);
}

}  // namespace

QuadTree::QuadTree(std::span<const Vec2> points, std::span<const double> masses)
    : points_(points), masses_(masses) {
  if (points.size() != masses.size()) throw ContractViolation("points/masses size mismatch");
  order_.resize(points.size());
  for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
  if (points.empty()) return;

  double min_x = points[0].x, max_x = points[0].x, min_y = points[0].y, max_y = points[0].y;
  for (const auto& p : points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double half = 0.5 * std::max(max_x - min_x, max_y - min_y);
  cells_.reserve(2 * points.size());
  cells_.resize(1);
  scratch_.resize(points.size());
  fill(0, 0, static_cast<std::uint32_t>(points.size()), 0.5 * (min_x + max_x),
       0.5 * (min_y + max_y), half, 0);
  scratch_ = {};

  moments_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) summarize(c);
}

// Mass, centre of mass, radius and moments straight from the cell's bodies.
void QuadTree::summarize(std::size_t index) {
  auto& cell = cells_[index];
  double mass = 0, mx = 0, my = 0;
  for (auto k = cell.begin; k < cell.end; ++k) {
    const auto b = order_[k];
    mass += masses_[b];
    mx += masses_[b] * points_[b].x;
    my += masses_[b] * points_[b].y;
  }
  cell.mass = mass;
  cell.com_x = mass > 0 ? mx / mass : cell.cx;
  cell.com_y = mass > 0 ? my / mass : cell.cy;

  auto& a = moments_[index];
  a.fill(0.0);
  double radius_sq = 0;
  for (auto k = cell.begin; k < cell.end; ++k) {
    const auto b = order_[k];
    const double ox = points_[b].x - cell.com_x;
    const double oy = points_[b].y - cell.com_y;
    radius_sq = std::max(radius_sq, ox * ox + oy * oy);
    double pr = masses_[b], pi = 0.0;  // m_b * offset^k
    for (int t = 0; t < kMultipoleTerms; ++t) {
      a[2 * t] += pr;
      a[2 * t + 1] += pi;
      const double nr = pr * ox - pi * oy;
      pi = pr * oy + pi * ox;
      pr = nr;
    }
  }
  cell.radius_sq = radius_sq;
}

void QuadTree::fill(std::size_t index, std::uint32_t begin, std::uint32_t end, double cx,
                    double cy, double half, int depth) {
  Cell cell;
  cell.cx = cx;
  cell.cy = cy;
  cell.half = half;
  cell.begin = begin;
  cell.end = end;
  cells_[index] = cell;

  bool all_same = true;
  for (auto k = begin + 1; k < end && all_same; ++k) {
    all_same = points_[order_[k]] == points_[order_[begin]];
  }
  if (end - begin <= 1 || all_same || depth >= kMaxDepth || half <= 0.0) return;

  // Stable counting sort of the range by quadrant keeps the tree, and hence
  // the summation order, a pure function of the input.
  std::uint32_t counts[4] = {0, 0, 0, 0};
  for (auto k = begin; k < end; ++k) ++counts[quadrant(points_[order_[k]], cx, cy)];
  std::uint32_t starts[5] = {begin, 0, 0, 0, 0};
  for (int q = 0; q < 4; ++q) starts[q + 1] = starts[q] + counts[q];
  std::uint32_t cursor[4] = {starts[0], starts[1], starts[2], starts[3]};
  for (auto k = begin; k < end; ++k) {
    const auto b = order_[k];
    scratch_[cursor[quadrant(points_[b], cx, cy)]++] = b;
  }
  std::copy(scratch_.begin() + begin, scratch_.begin() + end, order_.begin() + begin);

  const auto first = cells_.size();
  cells_[index].first_child = static_cast<std::int32_t>(first);
  cells_.resize(first + 4);
  const double h = 0.5 * half;
  for (int q = 0; q < 4; ++q) {
    const double qx = (q & 1) ? cx + h : cx - h;
    const double qy = (q & 2) ? cy + h : cy - h;
    fill(first + static_cast<std::size_t>(q), starts[q], starts[q + 1], qx, qy, h, depth + 1);
  }
}

Vec2 QuadTree::repulsion_on(std::uint32_t i, double scaling, double theta) const {
  Vec2 force;
  if (cells_.empty()) return force;
  const Vec2 p = points_[i];
  const double mi = masses_[i];
  const double theta_sq = theta * theta;

  std::int32_t stack[4 * kMaxDepth + 8];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const auto index = static_cast<std::size_t>(stack[--top]);
    const auto& cell = cells_[index];
    if (cell.mass == 0.0) continue;
    if (cell.first_child < 0) {
      for (auto k = cell.begin; k < cell.end; ++k) {
        const auto j = order_[k];
        if (j == i) continue;
        const double dx = p.x - points_[j].x;
        const double dy = p.y - points_[j].y;
        const double d2 = dx * dx + dy * dy;
        if (d2 == 0.0) continue;
        const double f = scaling * mi * masses_[j] / std::max(d2, kMinDistanceSq);
        force.x += dx * f;
        force.y += dy * f;
      }
      continue;
    }
    if (theta > 0.0) {
      const double wx = p.x - cell.com_x;
      const double wy = p.y - cell.com_y;
      const double d2 = wx * wx + wy * wy;
      // (2 r)^2 < theta^2 d^2, and the body lies outside the cell's disc.
      if (d2 > cell.radius_sq && 4.0 * cell.radius_sq < theta_sq * d2) {
        // Horner evaluation of sum_k a_k / w^(k+1), with 1/w = conj(w) / |w|^2.
        const double ir = wx / d2, ii = -wy / d2;
        const auto& a = moments_[index];
        double sr = 0.0, si = 0.0;
        for (int t = kMultipoleTerms - 1; t >= 0; --t) {
          const double xr = sr + a[2 * t], xi = si + a[2 * t + 1];
          sr = xr * ir - xi * ii;
          si = xr * ii + xi * ir;
        }
        // The force is conj(sum) scaled by the body's mass.
        force.x += scaling * mi * sr;
        force.y -= scaling * mi * si;
        continue;
      }
    }
    for (int q = 3; q >= 0; --q) stack[top++] = cell.first_child + q;
  }
  return force;
}

std::vector<Vec2> barnes_hut_repulsion(std::span<const Vec2> points, std::span<const double> masses,
                                       double scaling, double theta, unsigned threads) {
  QuadTree tree(points, masses);
  std::vector<Vec2> forces(points.size());
  const std::size_t chunks = threads <= 1 ? 1 : 8 * static_cast<std::size_t>(threads);
  detail::for_each_chunk(points.size(), chunks, threads,
                         [&](std::size_t, std::size_t begin, std::size_t end) {
                           // Tree order keeps successive traversals on the same cells.
                           for (auto k = begin; k < end; ++k) {
                             const auto i = tree.order()[k];
                             forces[i] = tree.repulsion_on(i, scaling, theta);
                           }
                         });
  return forces;
}

}  // namespace collab
