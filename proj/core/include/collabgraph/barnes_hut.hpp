#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace collab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

// Region quadtree over weighted points. Leaves hold a single body, except
// where points coincide (or the depth cap is hit) and a leaf holds a bucket
// that is always evaluated pairwise.
//
// The repulsion m_i m_j (z_i - z_j) / |z_i - z_j|^2 equals
// m_i conj(m_j / (z_i - z_j)) in complex form, so a cell's far field is the
// Laurent series sum_k a_k / (z - c)^(k+1) with a_k = sum_j m_j (z_j - c)^k
// about its centre of mass c. Cells keep the first kMultipoleTerms terms.
class QuadTree {
 public:
  static constexpr int kMultipoleTerms = 8;

  QuadTree(std::span<const Vec2> points, std::span<const double> masses);

  // ForceAtlas2 repulsion on body i: scaling * m_i * m_j / d pointing away
  // from j, summed over all bodies. A cell of size s (twice the largest
  // distance of its bodies from their centre of mass) is replaced by its
  // expansion when s / d < theta and body i lies outside the cell's bodies'
  // disc; theta = 0 therefore gives the exact pairwise sum.
  Vec2 repulsion_on(std::uint32_t i, double scaling, double theta) const;

  std::size_t cell_count() const { return cells_.size(); }

  // Body indices in leaf order; spatially close bodies are adjacent.
  std::span<const std::uint32_t> order() const { return order_; }

 private:
  struct Cell {
    double cx = 0, cy = 0, half = 0;  // quadrant square
    double mass = 0;
    double com_x = 0, com_y = 0;
    double radius_sq = 0;  // squared largest body distance from com
    std::int32_t first_child = -1;  // four consecutive cells, or -1 for a leaf
    std::uint32_t begin = 0, end = 0;  // bodies in order_
  };

  // a_0 .. a_{P-1} of one cell as (re, im) pairs; kept apart from Cell so the
  // traversal's opening tests touch less memory.
  using Moments = std::array<double, 2 * kMultipoleTerms>;

  void fill(std::size_t index, std::uint32_t begin, std::uint32_t end, double cx, double cy,
            double half, int depth);
  void summarize(std::size_t index);

  std::span<const Vec2> points_;
  std::span<const double> masses_;
  std::vector<std::uint32_t> order_;
  std::vector<Cell> cells_;
  std::vector<Moments> moments_;
  std::vector<std::uint32_t> scratch_;
};

// Repulsion on every body; evaluation is independent per body so the result
// is identical for any thread count.
std::vector<Vec2> barnes_hut_repulsion(std::span<const Vec2> points, std::span<const double> masses,
                                       double scaling, double theta, unsigned threads = 1);

}  // namespace collab
