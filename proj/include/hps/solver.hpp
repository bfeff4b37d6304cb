#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hps/geom.hpp"
#include "hps/leafop.hpp"
#include "hps/merge.hpp"
#include "hps/problem.hpp"

namespace hps {

struct BuildOptions {
  int threads = 1;
  MergeOrder order = MergeOrder::horizontal_first;
};

/// Everything the upward pass produces. Operators and records are indexed by box id.
struct SolverState {
  std::shared_ptr<const QuadTree> tree;
  ProblemSpec spec;
  std::vector<N2DOperator> ops;                      // [box id]; index 0 unused
  std::vector<std::array<MergeRecord, 3>> records;   // [box id]; leaves hold empty records
  std::uint64_t leaf_flops = 0;
  std::uint64_t merge_flops = 0;

  const N2DOperator& op(int box_id) const { return ops.at(static_cast<std::size_t>(box_id)); }
  const N2DOperator& root_op() const { return op(1); }
  std::uint64_t flop_count() const { return leaf_flops + merge_flops; }
};

/// Builds every leaf operator, then merges level by level up to the root.
/// Leaf or merge failures are rethrown with the failing box id in the message.
SolverState build(const ProblemSpec& spec, std::shared_ptr<const QuadTree> tree,
                  const BuildOptions& options = {});

/// Recomputes every merge above the leaves of `state` (which must hold its leaf operators).
void merge_up(SolverState& state, const BuildOptions& options = {});

/// Copy of `state` whose non-leaf operators are re-merged with `options` (e.g. another order).
SolverState rebuild_merges(const SolverState& state, const BuildOptions& options);

/// Potentials and fluxes on every leaf edge; each edge is stored once.
struct Solution {
  std::vector<Eigen::VectorXd> edge_flux;       // [edge id]
  std::vector<Eigen::VectorXd> edge_potential;  // [edge id]
  std::uint64_t flops = 0;
};

/// Downward pass: exterior fluxes from `data`, then each box's records (last-built
/// first) fill in shared-edge fluxes; leaf potentials from the leaf operators.
Solution solve(const SolverState& state, const NeumannData& data);

/// Same, with exterior fluxes supplied per exterior edge id.
Solution solve(const SolverState& state, const std::map<int, Eigen::VectorXd>& exterior_flux);

/// Re-solves the Neumann problem on the leaf itself with its computed boundary fluxes and
/// evaluates phi at points strictly inside the leaf (std::invalid_argument otherwise).
Eigen::VectorXd evaluate_interior(const SolverState& state, const Solution& solution, int leaf_id,
                                  std::span<const Point> points);

struct RankRow {
  int level = 0;
  int box_id = 0;
  Side rows = Side::south;
  Side cols = Side::east;
  int dim = 0;
  std::vector<int> ranks;  // one per cutoff
};

/// Number of singular values above cutoff * sigma_max.
int epsilon_rank(const Eigen::MatrixXd& m, double cutoff);

/// Ranks of the 12 side-to-side off-diagonal blocks of the root operator and of the
/// lowest-id box on every other non-leaf level.
std::vector<RankRow> rank_probe(const SolverState& state,
                                std::span<const double> cutoffs = std::array{1e-6, 1e-8, 1e-10});

/// Flat equilibrium system over interior leaf edges; one block row per interior edge.
struct EquilibriumSystem {
  int nodes_per_edge = 0;
  std::vector<int> interior_edges;           // unknown block order
  std::map<int, int> block_of_edge;          // edge id -> block index
  std::map<std::pair<int, int>, Eigen::MatrixXd> blocks;  // (row block, col block)
  Eigen::VectorXd rhs;

  int num_blocks() const { return static_cast<int>(interior_edges.size()); }
  int nonzero_blocks_in_row(int row) const;
  Eigen::SparseMatrix<double> assemble() const;
};

EquilibriumSystem assemble_flat(const QuadTree& tree, std::span<const N2DOperator> ops,
                                const NeumannData& data);

struct FlatSolution {
  std::vector<Eigen::VectorXd> interior_flux;  // aligned with interior_edges
  double residual = 0.0;                       // relative residual of the block system
};

/// Sparse LU of the flattened system. Throws DegenerateProblemError if singular.
FlatSolution solve_flat(const EquilibriumSystem& system);

}  // namespace hps
