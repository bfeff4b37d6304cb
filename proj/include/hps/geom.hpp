#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hps/quad.hpp"

namespace hps {

enum class Orientation { horizontal, vertical };

/// Box sides in the fixed block order used by every operator: south, east, north, west.
enum class Side : int { south = 0, east = 1, north = 2, west = 3 };

inline constexpr std::array<Side, 4> kSides = {Side::south, Side::east, Side::north,
                                               Side::west};

inline constexpr int index(Side s) { return static_cast<int>(s); }

/// Orientation of the edges lying on a given side of a box.
inline constexpr Orientation side_orientation(Side s) {
  return (s == Side::south || s == Side::north) ? Orientation::horizontal
                                                : Orientation::vertical;
}

/// +1 where the coordinate-direction flux is the outward normal derivative, -1 otherwise.
inline constexpr double outward_sign(Side s) {
  return (s == Side::east || s == Side::north) ? 1.0 : -1.0;
}

const char* side_name(Side s);

/// Axis-aligned square given by its lower-left corner and side length.
struct Square {
  Point corner;
  double side = 1.0;

  Point center() const { return corner + Point{0.5 * side, 0.5 * side}; }
  bool contains(Point p, double tol = 0.0) const {
    return p.x >= corner.x - tol && p.x <= corner.x + side + tol &&
           p.y >= corner.y - tol && p.y <= corner.y + side + tol;
  }
  bool contains_strictly(Point p) const {
    return p.x > corner.x && p.x < corner.x + side && p.y > corner.y &&
           p.y < corner.y + side;
  }
};

struct EdgeGeom {
  int id = -1;
  Orientation orientation = Orientation::horizontal;
  Point p0;  // lower coordinate end
  Point p1;
  bool is_exterior = false;
  std::vector<Point> nodes;
  // Adjacent leaves: below/left of the edge and above/right of it; -1 on the boundary.
  int lower_leaf = -1;
  int upper_leaf = -1;

  double half_length() const { return 0.5 * (orientation == Orientation::horizontal ? p1.x - p0.x : p1.y - p0.y); }
};

struct BoxNode {
  int id = 0;
  int level = 0;
  int parent = 0;  // 0 for the root
  Square square;
  std::optional<std::array<int, 4>> children;  // child_order: SW, NW, SE, NE
  std::array<std::vector<int>, 4> side_edges;  // indexed by Side

  bool is_leaf() const { return !children.has_value(); }
  const std::vector<int>& side(Side s) const { return side_edges[index(s)]; }
};

/// Uniform quadtree over a square. Box ids start at 1 (root) and run level by level;
/// edge ids are 0-based and cover the leaf edges only.
class QuadTree {
 public:
  QuadTree(Square root, int levels, GaussRule rule);

  const Square& root_square() const { return root_; }
  int levels() const { return levels_; }
  int leaves_per_side() const { return 1 << levels_; }
  const GaussRule& rule() const { return rule_; }
  int nodes_per_edge() const { return rule_.order; }

  int num_boxes() const { return static_cast<int>(boxes_.size()); }
  const BoxNode& box(int id) const { return boxes_.at(static_cast<std::size_t>(id - 1)); }
  const BoxNode& root() const { return boxes_.front(); }
  const std::vector<BoxNode>& boxes() const { return boxes_; }

  int num_edges() const { return static_cast<int>(edges_.size()); }
  const EdgeGeom& edge(int id) const { return edges_.at(static_cast<std::size_t>(id)); }
  const std::vector<EdgeGeom>& edges() const { return edges_; }
  int num_interior_edges() const;
  int num_exterior_edges() const { return num_edges() - num_interior_edges(); }
  int total_nodes() const { return num_edges() * nodes_per_edge(); }

  /// Box ids at a level, in id order.
  std::vector<int> level_boxes(int level) const;
  std::vector<int> leaves() const { return level_boxes(levels_); }
  /// Leaf id covering leaf cell (ix, iy).
  int leaf_at(int ix, int iy) const { return leaf_grid_.at(static_cast<std::size_t>(iy * leaves_per_side() + ix)); }

 private:
  Square root_;
  int levels_;
  GaussRule rule_;
  std::vector<BoxNode> boxes_;
  std::vector<EdgeGeom> edges_;
  std::vector<int> leaf_grid_;
};

/// Full uniform quadtree with 4^levels leaves. Throws std::invalid_argument for
/// levels < 1 or a non-positive side length.
QuadTree build_tree(const Square& root, int levels, const GaussRule& rule);

/// The unique leaf edge shared by two leaves, if they are adjacent.
std::optional<int> shared_edge(const BoxNode& a, const BoxNode& b);

/// Children as (nu1, nu2, nu3, nu4) = (SW, NW, SE, NE), so nu1+nu3 is the bottom half.
std::array<int, 4> child_order(const BoxNode& parent);

/// Per-level census: level, boxes, edges referenced on box boundaries, nodes per box.
void write_tree_summary_csv(const QuadTree& tree, std::ostream& os);

}  // namespace hps
