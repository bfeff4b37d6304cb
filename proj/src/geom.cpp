#include "hps/geom.hpp"

#include <ostream>
#include <stdexcept>

namespace hps {

const char* side_name(Side s) {
  switch (s) {
    case Side::south: return "S";
    case Side::east: return "E";
    case Side::north: return "N";
    case Side::west: return "W";
  }
  return "?";
}

namespace {

struct CellRange {
  int ix0, iy0, width;
};

}  // namespace

QuadTree::QuadTree(Square root, int levels, GaussRule rule)
    : root_(root), levels_(levels), rule_(std::move(rule)) {
  if (levels < 1) throw std::invalid_argument("build_tree: levels must be >= 1");
  if (!(root.side > 0.0)) throw std::invalid_argument("build_tree: side length must be > 0");

  const int n = leaves_per_side();
  const double h = root.side / n;
  auto xcoord = [&](int i) { return root.corner.x + h * i; };
  auto ycoord = [&](int j) { return root.corner.y + h * j; };

  // Horizontal edges: row j (0..n), cell i.  Vertical edges: column i (0..n), cell j.
  const int n_horizontal = n * (n + 1);
  edges_.resize(static_cast<std::size_t>(2 * n * (n + 1)));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i < n; ++i) {
      EdgeGeom& e = edges_[static_cast<std::size_t>(j * n + i)];
      e.id = j * n + i;
      e.orientation = Orientation::horizontal;
      e.p0 = {xcoord(i), ycoord(j)};
      e.p1 = {xcoord(i + 1), ycoord(j)};
      e.is_exterior = (j == 0 || j == n);
      e.nodes = map_to_segment(rule_, e.p0, e.p1);
    }
  }
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int id = n_horizontal + i * n + j;
      EdgeGeom& e = edges_[static_cast<std::size_t>(id)];
      e.id = id;
      e.orientation = Orientation::vertical;
      e.p0 = {xcoord(i), ycoord(j)};
      e.p1 = {xcoord(i), ycoord(j + 1)};
      e.is_exterior = (i == 0 || i == n);
      e.nodes = map_to_segment(rule_, e.p0, e.p1);
    }
  }
  auto hedge = [&](int i, int j) { return j * n + i; };
  auto vedge = [&](int i, int j) { return n_horizontal + i * n + j; };

  // Breadth-first construction so ids run level by level.
  std::vector<CellRange> ranges;
  boxes_.push_back(BoxNode{});
  ranges.push_back({0, 0, n});
  boxes_[0].id = 1;
  boxes_[0].level = 0;
  boxes_[0].square = root;
  leaf_grid_.assign(static_cast<std::size_t>(n * n), 0);

  for (std::size_t k = 0; k < boxes_.size(); ++k) {
    const CellRange r = ranges[k];
    BoxNode& b = boxes_[k];
    for (int c = 0; c < r.width; ++c) {
      b.side_edges[index(Side::south)].push_back(hedge(r.ix0 + c, r.iy0));
      b.side_edges[index(Side::north)].push_back(hedge(r.ix0 + c, r.iy0 + r.width));
      b.side_edges[index(Side::west)].push_back(vedge(r.ix0, r.iy0 + c));
      b.side_edges[index(Side::east)].push_back(vedge(r.ix0 + r.width, r.iy0 + c));
    }
    if (b.level == levels_) {
      leaf_grid_[static_cast<std::size_t>(r.iy0 * n + r.ix0)] = b.id;
      continue;
    }
    const int half = r.width / 2;
    // SW, NW, SE, NE
    const std::array<std::pair<int, int>, 4> offsets = {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    std::array<int, 4> kids{};
    const int parent_id = b.id;
    const int child_level = b.level + 1;
    const Square parent_sq = b.square;
    for (int q = 0; q < 4; ++q) {
      BoxNode child;
      child.id = static_cast<int>(boxes_.size()) + 1;
      child.level = child_level;
      child.parent = parent_id;
      child.square.side = parent_sq.side / 2;
      child.square.corner = parent_sq.corner + Point{offsets[q].first * child.square.side,
                                                     offsets[q].second * child.square.side};
      kids[q] = child.id;
      ranges.push_back({r.ix0 + offsets[q].first * half, r.iy0 + offsets[q].second * half, half});
      boxes_.push_back(std::move(child));
    }
    boxes_[k].children = kids;  // boxes_ may have reallocated; index again
  }

  for (const BoxNode& leaf : boxes_) {
    if (!leaf.is_leaf()) continue;
    edges_[leaf.side(Side::south)[0]].upper_leaf = leaf.id;
    edges_[leaf.side(Side::north)[0]].lower_leaf = leaf.id;
    edges_[leaf.side(Side::west)[0]].upper_leaf = leaf.id;
    edges_[leaf.side(Side::east)[0]].lower_leaf = leaf.id;
  }
}

int QuadTree::num_interior_edges() const {
  int count = 0;
  for (const auto& e : edges_) count += e.is_exterior ? 0 : 1;
  return count;
}

std::vector<int> QuadTree::level_boxes(int level) const {
  std::vector<int> ids;
  for (const auto& b : boxes_)
    if (b.level == level) ids.push_back(b.id);
  return ids;
}

QuadTree build_tree(const Square& root, int levels, const GaussRule& rule) {
  return QuadTree(root, levels, rule);
}

std::optional<int> shared_edge(const BoxNode& a, const BoxNode& b) {
  for (Side sa : kSides) {
    for (int ea : a.side(sa)) {
      for (Side sb : kSides) {
        for (int eb : b.side(sb))
          if (ea == eb) return ea;
      }
    }
  }
  return std::nullopt;
}

std::array<int, 4> child_order(const BoxNode& parent) {
  if (parent.is_leaf()) throw std::invalid_argument("child_order: box " + std::to_string(parent.id) + " is a leaf");
  return *parent.children;
}

void write_tree_summary_csv(const QuadTree& tree, std::ostream& os) {
  os << "level,boxes,edges_per_side,nodes_per_box,leaf_edges_total,leaf_edges_interior,leaf_edges_exterior\n";
  for (int level = 0; level <= tree.levels(); ++level) {
    const auto ids = tree.level_boxes(level);
    const int per_side = 1 << (tree.levels() - level);
    os << level << ',' << ids.size() << ',' << per_side << ','
       << 4 * per_side * tree.nodes_per_edge() << ',' << tree.num_edges() << ','
       << tree.num_interior_edges() << ',' << tree.num_exterior_edges() << '\n';
  }
}

}  // namespace hps
