#include "hps/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hps {

double max_edge_error(const QuadTree& tree, const Solution& solution,
                      const std::function<double(Point)>& phi) {
  double err = 0.0;
  for (const EdgeGeom& e : tree.edges()) {
    const Eigen::VectorXd& u = solution.edge_potential[static_cast<std::size_t>(e.id)];
    for (std::size_t q = 0; q < e.nodes.size(); ++q)
      err = std::max(err, std::abs(u[static_cast<Eigen::Index>(q)] - phi(e.nodes[q])));
  }
  return err;
}

double max_edge_magnitude(const QuadTree& tree, const Solution& solution) {
  double m = 0.0;
  for (const EdgeGeom& e : tree.edges())
    m = std::max(m, solution.edge_potential[static_cast<std::size_t>(e.id)].cwiseAbs().maxCoeff());
  return m;
}

CrossPathReport cross_path(const SolverState& state, const Solution& hierarchical,
                           const NeumannData& data) {
  const QuadTree& tree = *state.tree;
  const EquilibriumSystem sys = assemble_flat(tree, state.ops, data);
  const FlatSolution flat = solve_flat(sys);
  CrossPathReport rep;
  rep.interior_edges = sys.num_blocks();
  rep.exterior_edges = tree.num_exterior_edges();
  rep.flat_residual = flat.residual;
  double diff = 0.0, scale = 0.0;
  for (int k = 0; k < sys.num_blocks(); ++k) {
    const Eigen::VectorXd& h = hierarchical.edge_flux[static_cast<std::size_t>(sys.interior_edges[static_cast<std::size_t>(k)])];
    diff = std::max(diff, (flat.interior_flux[static_cast<std::size_t>(k)] - h).cwiseAbs().maxCoeff());
    scale = std::max(scale, h.cwiseAbs().maxCoeff());
    rep.max_blocks_per_row = std::max(rep.max_blocks_per_row, sys.nonzero_blocks_in_row(k));
  }
  rep.max_relative_difference = scale > 0.0 ? diff / scale : diff;
  return rep;
}

namespace {

Eigen::VectorXd stack_flux(const N2DOperator& op, const Solution& s) {
  const std::vector<int> edges = op.edge_order();
  const int g = op.nodes_per_edge;
  Eigen::VectorXd v(static_cast<Eigen::Index>(edges.size()) * g);
  for (std::size_t k = 0; k < edges.size(); ++k)
    v.segment(static_cast<Eigen::Index>(k) * g, g) = s.edge_flux[static_cast<std::size_t>(edges[k])];
  return v;
}

}  // namespace

GreenReport green_identity(const SolverState& state, const Solution& s1, const Solution& s2) {
  const QuadTree& tree = *state.tree;
  GreenReport rep;
  for (int id : tree.leaves()) {
    const N2DOperator& op = state.op(id);
    const double r = reciprocity_residual(op, tree, state.spec.a, stack_flux(op, s1), stack_flux(op, s2));
    if (r >= rep.worst_leaf) {
      rep.worst_leaf = r;
      rep.worst_leaf_id = id;
    }
  }
  const N2DOperator& root = state.root_op();
  rep.root = reciprocity_residual(root, tree, state.spec.a, stack_flux(root, s1), stack_flux(root, s2));
  return rep;
}

FdComparison compare_with_fd(const QuadTree& tree, const Solution& solution, const FdSolution& coarse,
                             const FdSolution& fine) {
  if (fine.grid_n != 2 * coarse.grid_n)
    throw std::invalid_argument("compare_with_fd: fine grid must halve the coarse spacing");
  if (coarse.grid_n % tree.leaves_per_side() != 0)
    throw std::invalid_argument("compare_with_fd: coarse grid does not resolve the leaf edges");
  const GaussRule& rule = tree.rule();
  const int per_leaf = coarse.grid_n / tree.leaves_per_side();
  FdComparison out;
  double band = 0.0;
  for (const EdgeGeom& e : tree.edges()) {
    const Point mid = 0.5 * (e.p0 + e.p1);
    const bool horiz = e.orientation == Orientation::horizontal;
    // Coarse node indices along the edge, endpoints included.
    const int i0 = static_cast<int>(std::lround(((horiz ? e.p0.x : e.p0.y) - (horiz ? coarse.domain.corner.x : coarse.domain.corner.y)) / coarse.h()));
    const int fixed = static_cast<int>(std::lround(((horiz ? e.p0.y : e.p0.x) - (horiz ? coarse.domain.corner.y : coarse.domain.corner.x)) / coarse.h()));
    std::vector<double> targets;
    std::vector<std::pair<int, int>> ij;
    for (int k = 0; k <= per_leaf; ++k) {
      const int i = horiz ? i0 + k : fixed;
      const int j = horiz ? fixed : i0 + k;
      const Point p = coarse.node(i, j);
      targets.push_back(horiz ? (p.x - mid.x) / e.half_length() : (p.y - mid.y) / e.half_length());
      ij.emplace_back(i, j);
    }
    const Eigen::VectorXd u = interp_matrix(rule, targets) * solution.edge_potential[static_cast<std::size_t>(e.id)];
    for (std::size_t k = 0; k < ij.size(); ++k) {
      const auto [i, j] = ij[k];
      const double c = coarse.at(i, j);
      const double f = fine.at(2 * i, 2 * j);
      band = std::max(band, std::abs(f - c) / 3.0);
      out.max_difference = std::max(out.max_difference, std::abs(u[static_cast<Eigen::Index>(k)] - richardson(f, c)));
      ++out.points;
    }
  }
  out.band = band;
  return out;
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_slope: need two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace hps
