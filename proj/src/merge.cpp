#include "hps/merge.hpp"

#include <sstream>
#include <stdexcept>

#include "hps/errors.hpp"

namespace hps {

namespace {

constexpr double kMaxCondition = 1e13;

std::vector<int> concat(const std::vector<int>& x, const std::vector<int>& y) {
  std::vector<int> out = x;
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

// Operator index of each node of a side.
std::vector<int> side_indices(const N2DOperator& op, Side s) {
  std::vector<int> idx(static_cast<std::size_t>(op.side_size(s)));
  const int off = op.side_offset(s);
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = off + static_cast<int>(k);
  return idx;
}

}  // namespace

MergeResult merge_two(const N2DOperator& a, const N2DOperator& b, MergeDirection direction,
                      int parent_id, FlopCounter* flops) {
  const bool horiz = direction == MergeDirection::horizontal;
  const Side a_shared = horiz ? Side::east : Side::north;
  const Side b_shared = horiz ? Side::west : Side::south;
  if (a.nodes_per_edge != b.nodes_per_edge)
    throw std::invalid_argument("merge_two: boxes use different edge rules");
  if (a.side_edges[index(a_shared)] != b.side_edges[index(b_shared)]) {
    std::ostringstream msg;
    msg << "merge_two: boxes " << a.box_id << " and " << b.box_id
        << " do not share the expected edges";
    throw std::invalid_argument(msg.str());
  }
  const int g = a.nodes_per_edge;

  // Parent sides as (child, child side) pieces.
  struct Piece {
    int child;
    Side side;
  };
  std::array<std::vector<Piece>, 4> pieces;
  if (horiz) {
    pieces[index(Side::south)] = {{0, Side::south}, {1, Side::south}};
    pieces[index(Side::east)] = {{1, Side::east}};
    pieces[index(Side::north)] = {{0, Side::north}, {1, Side::north}};
    pieces[index(Side::west)] = {{0, Side::west}};
  } else {
    pieces[index(Side::south)] = {{0, Side::south}};
    pieces[index(Side::east)] = {{0, Side::east}, {1, Side::east}};
    pieces[index(Side::north)] = {{1, Side::north}};
    pieces[index(Side::west)] = {{0, Side::west}, {1, Side::west}};
  }
  const std::array<const N2DOperator*, 2> kids = {&a, &b};

  N2DOperator parent;
  parent.box_id = parent_id;
  parent.nodes_per_edge = g;
  std::vector<std::pair<int, int>> ext_map;
  for (Side s : kSides) {
    for (const Piece& pc : pieces[index(s)]) {
      const auto& edges = kids[pc.child]->side_edges[index(pc.side)];
      parent.side_edges[index(s)] = concat(parent.side_edges[index(s)], edges);
      for (int i : side_indices(*kids[pc.child], pc.side)) ext_map.emplace_back(pc.child, i);
    }
  }

  const std::vector<int> sa = side_indices(a, a_shared);
  const std::vector<int> sb = side_indices(b, b_shared);
  const auto k = static_cast<Eigen::Index>(sa.size());
  const auto n = static_cast<Eigen::Index>(ext_map.size());

  Eigen::MatrixXd coupling(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) coupling(i, j) = a.matrix(sa[i], sa[j]) - b.matrix(sb[i], sb[j]);

  // Right-hand side of the shared-edge equation: D vs = -T_a[s, ext_a] v_a + T_b[s, ext_b] v_b.
  Eigen::MatrixXd rhs(k, n);
  Eigen::MatrixXd to_shared(n, k);  // T_child[ext, shared]
  Eigen::MatrixXd merged = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto [child, ci] = ext_map[static_cast<std::size_t>(c)];
    const N2DOperator& op = *kids[child];
    const std::vector<int>& shared = child == 0 ? sa : sb;
    const double sign = child == 0 ? -1.0 : 1.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      rhs(i, c) = sign * op.matrix(shared[i], ci);
      to_shared(c, i) = op.matrix(ci, shared[i]);
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto [rchild, ri] = ext_map[static_cast<std::size_t>(r)];
      if (rchild == child) merged(r, c) = op.matrix(ri, ci);
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(coupling);
  const double rcond = lu.rcond();
  const double cond = rcond > 0.0 ? 1.0 / rcond : INFINITY;
  if (!(cond <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "merge of boxes " << a.box_id << " and " << b.box_id
        << ": coupling matrix is singular (condition estimate " << cond << ")";
    throw MergeSingularityError(msg.str());
  }

  MergeRecord rec;
  rec.parent_id = parent_id;
  rec.child_ids = {a.box_id, b.box_id};
  rec.direction = direction;
  rec.shared_edges = a.side_edges[index(a_shared)];
  rec.exterior_edges = parent.edge_order();
  rec.nodes_per_edge = g;
  rec.solve_map = lu.solve(rhs);
  rec.exterior_index_map = std::move(ext_map);

  merged.noalias() += to_shared * rec.solve_map;
  parent.matrix = std::move(merged);

  const double kd = static_cast<double>(k), nd = static_cast<double>(n);
  add_flops(flops, lu_flops(kd) + lu_solve_flops(kd, nd) + gemm_flops(nd, nd, kd));
  return {std::move(parent), std::move(rec)};
}

MergeFourResult merge_four(const std::array<const N2DOperator*, 4>& children, int parent_id,
                           MergeOrder order, FlopCounter* flops) {
  const auto& [nu1, nu2, nu3, nu4] = children;
  MergeFourResult out;
  if (order == MergeOrder::horizontal_first) {
    auto bottom = merge_two(*nu1, *nu3, MergeDirection::horizontal, 0, flops);
    auto top = merge_two(*nu2, *nu4, MergeDirection::horizontal, 0, flops);
    auto whole = merge_two(bottom.op, top.op, MergeDirection::vertical, parent_id, flops);
    out.records = {std::move(bottom.record), std::move(top.record), std::move(whole.record)};
    out.op = std::move(whole.op);
  } else {
    auto left = merge_two(*nu1, *nu2, MergeDirection::vertical, 0, flops);
    auto right = merge_two(*nu3, *nu4, MergeDirection::vertical, 0, flops);
    auto whole = merge_two(left.op, right.op, MergeDirection::horizontal, parent_id, flops);
    out.records = {std::move(left.record), std::move(right.record), std::move(whole.record)};
    out.op = std::move(whole.op);
  }
  out.records[0].parent_id = 0;
  out.records[1].parent_id = 0;
  return out;
}

}  // namespace hps
