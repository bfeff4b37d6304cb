#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "hps/flops.hpp"
#include "hps/leafop.hpp"

namespace hps {

/// horizontal: boxes side by side, shared edges vertical (left east = right west).
/// vertical:   boxes stacked, shared edges horizontal (bottom north = top south).
enum class MergeDirection { horizontal, vertical };

/// Solve map for one merge: v_shared = solve_map * v_exterior, with v_exterior
/// stacked in the merged box's operator order.
struct MergeRecord {
  int parent_id = 0;                 // 0 for an intermediate (half-box) merge
  std::array<int, 2> child_ids{};    // left/bottom, right/top; 0 for intermediates
  MergeDirection direction = MergeDirection::horizontal;
  std::vector<int> shared_edges;     // increasing coordinate
  std::vector<int> exterior_edges;   // merged box edge order (S, E, N, W)
  int nodes_per_edge = 0;
  Eigen::MatrixXd solve_map;
  // For each exterior index of the merged box: (child 0/1, index in that child's operator).
  std::vector<std::pair<int, int>> exterior_index_map;
};

struct MergeResult {
  N2DOperator op;
  MergeRecord record;
};

/// Eliminates the shared-edge fluxes of two adjacent boxes. The coupling matrix
/// D = T_a[shared, shared] - T_b[shared, shared] is LU-factored; condition estimates above
/// 1e13 throw MergeSingularityError. Mismatched shared sides throw std::invalid_argument.
MergeResult merge_two(const N2DOperator& a, const N2DOperator& b, MergeDirection direction,
                      int parent_id = 0, FlopCounter* flops = nullptr);

enum class MergeOrder { horizontal_first, vertical_first };

struct MergeFourResult {
  N2DOperator op;
  // Records in build order; the last one is the merge producing the parent.
  std::array<MergeRecord, 3> records;
};

/// Merge-four as three merge-twos. Children in child_order (SW, NW, SE, NE).
/// horizontal_first: (nu1,nu3) and (nu2,nu4) side by side, then the halves stacked.
MergeFourResult merge_four(const std::array<const N2DOperator*, 4>& children, int parent_id,
                           MergeOrder order = MergeOrder::horizontal_first,
                           FlopCounter* flops = nullptr);

}  // namespace hps
