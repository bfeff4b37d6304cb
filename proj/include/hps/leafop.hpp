#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "hps/flops.hpp"
#include "hps/geom.hpp"
#include "hps/patch.hpp"
#include "hps/problem.hpp"

namespace hps {

/// Dense Neumann-to-Dirichlet matrix of a box: u = T v, where v stacks the
/// coordinate-direction fluxes on the box's boundary edges (sides S, E, N, W, each
/// side's edges by increasing coordinate, each edge's Gauss nodes in increasing order)
/// and u stacks the potentials at the same nodes.
struct N2DOperator {
  int box_id = 0;
  std::array<std::vector<int>, 4> side_edges;
  int nodes_per_edge = 0;
  Eigen::MatrixXd matrix;
  // Leaf fit diagnostics (zero for merged operators).
  double fit_residual = 0.0;
  int sample_rank = 0;

  int size() const { return static_cast<int>(matrix.rows()); }
  std::vector<int> edge_order() const;
  int side_offset(Side s) const;
  int side_size(Side s) const {
    return static_cast<int>(side_edges[index(s)].size()) * nodes_per_edge;
  }
  Eigen::MatrixXd block(Side rows, Side cols) const {
    return matrix.block(side_offset(rows), side_offset(cols), side_size(rows), side_size(cols));
  }
};

struct BoundaryNode {
  Point x;
  Side side;
  int edge;
  double weight;  // Gauss weight scaled to the edge length
};

/// Boundary nodes of a box in operator order.
std::vector<BoundaryNode> boundary_nodes(const QuadTree& tree,
                                         const std::array<std::vector<int>, 4>& sides);

/// Coordinate-direction flux of `data` at the box's boundary nodes.
Eigen::VectorXd tabulate_flux(const QuadTree& tree, const std::array<std::vector<int>, 4>& sides,
                              const NeumannData& data);
/// Values of `phi` at the box's boundary nodes.
Eigen::VectorXd tabulate_values(const QuadTree& tree, const std::array<std::vector<int>, 4>& sides,
                                const std::function<double(Point)>& phi);

enum class PatchShape { disk, square };

/// Concentric patch around a leaf. A disk has radius enlargement * (leaf half-diagonal),
/// i.e. it circumscribes the square of side enlargement * (leaf side).
/// Throws std::invalid_argument for enlargement <= 1.
Patch make_patch(const BoxNode& leaf, double enlargement, PatchShape shape = PatchShape::disk);

/// Fourier mode cos(2 pi k s / P) or sin(2 pi k s / P) in patch arclength s.
struct FourierFlux {
  int k = 0;
  bool sine = false;
  double period = 1.0;
  double operator()(const BoundaryPoint& bp) const;
};

/// First n_samp members of {1, cos k, sin k, cos 2k, ...} on the patch perimeter.
std::vector<BoundaryFlux> sample_boundary_fluxes(const Patch& patch, int n_samp);

/// Fits the leaf N2D matrix from patch sample solutions by truncated-SVD least squares.
/// Throws InsufficientSamplingError when the sampled fluxes have numerical rank below
/// 4 * n_gauss - rank_allowance(n_gauss) at cutoff epsilon, AccuracyError when the relative
/// fit residual exceeds spec.fit_tolerance.
N2DOperator build_leaf_n2d(const ProblemSpec& spec, const BoxNode& leaf, const QuadTree& tree,
                           FlopCounter* flops = nullptr);

/// Patch sample solutions restricted to a box boundary: potentials u and
/// coordinate-direction fluxes v, one column per sampled boundary flux.
struct BoundarySamples {
  Eigen::MatrixXd u;
  Eigen::MatrixXd v;
};
BoundarySamples sample_boundary_data(const ProblemSpec& spec, const BoxNode& box,
                                     const QuadTree& tree, FlopCounter* flops = nullptr);

/// The same fit for any box of the tree, with all of its boundary edges; used to check
/// merged operators against directly sampled ones. The rank test scales with the box's
/// node count, so larger boxes need n_samp of at least their boundary node count.
N2DOperator sample_box_n2d(const ProblemSpec& spec, const BoxNode& box, const QuadTree& tree,
                           FlopCounter* flops = nullptr);

int rank_allowance(int n_gauss);

/// Discrete Green's identity on a box boundary for two flux vectors, using the
/// operator's own potentials:  |sum w a (u1 dn v2 - u2 dn v1)| / sum w a |u1 dn v2|.
double reciprocity_residual(const N2DOperator& op, const QuadTree& tree, const ScalarField& a,
                            const Eigen::VectorXd& v1, const Eigen::VectorXd& v2);

}  // namespace hps
