#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hps/oracle.hpp"
#include "hps/solver.hpp"

namespace hps {

/// Largest |u - phi| over every leaf edge node.
double max_edge_error(const QuadTree& tree, const Solution& solution,
                      const std::function<double(Point)>& phi);

/// Largest |u| over every leaf edge node.
double max_edge_magnitude(const QuadTree& tree, const Solution& solution);

struct CrossPathReport {
  double max_relative_difference = 0.0;  // max |v_flat - v_hier| / max |v_hier| over interior edges
  int max_blocks_per_row = 0;
  int interior_edges = 0;
  int exterior_edges = 0;
  double flat_residual = 0.0;
};

/// Assembles and solves the flat equilibrium system from the state's leaf operators and
/// compares its interior fluxes with the hierarchical solution.
CrossPathReport cross_path(const SolverState& state, const Solution& hierarchical,
                           const NeumannData& data);

/// Worst discrete Green's identity residual for a pair of flux fields, on every leaf
/// (fluxes taken from the two solutions) and on the root (exterior fluxes).
struct GreenReport {
  double worst_leaf = 0.0;
  int worst_leaf_id = 0;
  double root = 0.0;
};
GreenReport green_identity(const SolverState& state, const Solution& s1, const Solution& s2);

/// Spectral edge potentials against a two-grid Richardson-extrapolated FD solution, at
/// the FD nodes lying on leaf edges (present in both grids).
struct FdComparison {
  int points = 0;
  double max_difference = 0.0;  // |u_spectral - u_extrapolated|
  double band = 0.0;            // max |u_fine - u_coarse| / 3
};
FdComparison compare_with_fd(const QuadTree& tree, const Solution& solution, const FdSolution& coarse,
                             const FdSolution& fine);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

/// Number of leaf edges for 2^levels leaves per side: 2 m (m - 1) + 4 m.
inline int edge_census(int levels) {
  const int m = 1 << levels;
  return 2 * m * (m - 1) + 4 * m;
}

}  // namespace hps
