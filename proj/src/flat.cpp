#include "hps/solver.hpp"

#include <sstream>
#include <stdexcept>

#include <Eigen/SparseLU>

#include "hps/errors.hpp"

namespace hps {

int EquilibriumSystem::nonzero_blocks_in_row(int row) const {
  int count = 0;
  for (auto it = blocks.lower_bound({row, 0}); it != blocks.end() && it->first.first == row; ++it)
    ++count;
  return count;
}

Eigen::SparseMatrix<double> EquilibriumSystem::assemble() const {
  const int g = nodes_per_edge;
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& [key, blk] : blocks)
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j)
        if (blk(i, j) != 0.0) trips.emplace_back(key.first * g + i, key.second * g + j, blk(i, j));
  const int n = num_blocks() * g;
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

EquilibriumSystem assemble_flat(const QuadTree& tree, std::span<const N2DOperator> ops,
                                const NeumannData& data) {
  const int g = tree.nodes_per_edge();
  EquilibriumSystem sys;
  sys.nodes_per_edge = g;
  for (const EdgeGeom& e : tree.edges()) {
    if (e.is_exterior) continue;
    sys.block_of_edge[e.id] = static_cast<int>(sys.interior_edges.size());
    sys.interior_edges.push_back(e.id);
  }
  sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.interior_edges.size()) * g);

  auto exterior_flux = [&](const EdgeGeom& e) {
    Eigen::VectorXd v(g);
    for (int q = 0; q < g; ++q) v[q] = data(e.nodes[static_cast<std::size_t>(q)], e.orientation);
    return v;
  };

  for (int row = 0; row < sys.num_blocks(); ++row) {
    const EdgeGeom& e = tree.edge(sys.interior_edges[static_cast<std::size_t>(row)]);
    const bool vertical = e.orientation == Orientation::vertical;
    // Lower/left box sees the edge as its east (north) side; upper/right box as west (south).
    const std::array<std::tuple<int, double, Side>, 2> terms = {{
        {e.lower_leaf, 1.0, vertical ? Side::east : Side::north},
        {e.upper_leaf, -1.0, vertical ? Side::west : Side::south},
    }};
    for (const auto& [leaf_id, sign, row_side] : terms) {
      const N2DOperator& op = ops[static_cast<std::size_t>(leaf_id)];
      if (op.box_id != leaf_id) throw std::invalid_argument("assemble_flat: missing leaf operator");
      const BoxNode& leaf = tree.box(leaf_id);
      for (Side s : kSides) {
        const EdgeGeom& f = tree.edge(leaf.side(s)[0]);
        const Eigen::MatrixXd blk = sign * op.matrix.block(op.side_offset(row_side), op.side_offset(s), g, g);
        if (f.is_exterior) {
          sys.rhs.segment(row * g, g) -= blk * exterior_flux(f);
        } else {
          auto [it, inserted] = sys.blocks.try_emplace({row, sys.block_of_edge.at(f.id)}, blk);
          if (!inserted) it->second += blk;
        }
      }
    }
  }
  return sys;
}

FlatSolution solve_flat(const EquilibriumSystem& system) {
  const Eigen::SparseMatrix<double> a = system.assemble();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success)
    throw DegenerateProblemError("flat equilibrium system is singular: " + lu.lastErrorMessage());
  const Eigen::VectorXd x = lu.solve(system.rhs);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw DegenerateProblemError("flat equilibrium solve failed");

  FlatSolution out;
  const double bnorm = system.rhs.norm();
  out.residual = (a * x - system.rhs).norm() / (bnorm > 0.0 ? bnorm : 1.0);
  const int g = system.nodes_per_edge;
  for (int k = 0; k < system.num_blocks(); ++k) out.interior_flux.push_back(x.segment(k * g, g));
  return out;
}

}  // namespace hps
