#include "hps/leafop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hps/errors.hpp"

namespace hps {

std::vector<int> N2DOperator::edge_order() const {
  std::vector<int> out;
  for (Side s : kSides)
    out.insert(out.end(), side_edges[index(s)].begin(), side_edges[index(s)].end());
  return out;
}

int N2DOperator::side_offset(Side s) const {
  int offset = 0;
  for (int k = 0; k < index(s); ++k) offset += static_cast<int>(side_edges[k].size());
  return offset * nodes_per_edge;
}

std::vector<BoundaryNode> boundary_nodes(const QuadTree& tree,
                                         const std::array<std::vector<int>, 4>& sides) {
  std::vector<BoundaryNode> out;
  const auto& w = tree.rule().weights;
  for (Side s : kSides) {
    for (int id : sides[index(s)]) {
      const EdgeGeom& e = tree.edge(id);
      for (std::size_t q = 0; q < e.nodes.size(); ++q)
        out.push_back({e.nodes[q], s, id, w[q] * e.half_length()});
    }
  }
  return out;
}

Eigen::VectorXd tabulate_flux(const QuadTree& tree, const std::array<std::vector<int>, 4>& sides,
                              const NeumannData& data) {
  const auto nodes = boundary_nodes(tree, sides);
  Eigen::VectorXd v(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t k = 0; k < nodes.size(); ++k)
    v[static_cast<Eigen::Index>(k)] = data(nodes[k].x, side_orientation(nodes[k].side));
  return v;
}

Eigen::VectorXd tabulate_values(const QuadTree& tree, const std::array<std::vector<int>, 4>& sides,
                                const std::function<double(Point)>& phi) {
  const auto nodes = boundary_nodes(tree, sides);
  Eigen::VectorXd u(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t k = 0; k < nodes.size(); ++k) u[static_cast<Eigen::Index>(k)] = phi(nodes[k].x);
  return u;
}

Patch make_patch(const BoxNode& leaf, double enlargement, PatchShape shape) {
  if (!(enlargement > 1.0)) throw std::invalid_argument("make_patch: enlargement must be > 1");
  const Point c = leaf.square.center();
  const double side = enlargement * leaf.square.side;
  if (shape == PatchShape::square)
    return SquarePatch{Square{c - Point{0.5 * side, 0.5 * side}, side}};
  return DiskPatch{c, 0.5 * side * std::numbers::sqrt2};
}

double FourierFlux::operator()(const BoundaryPoint& bp) const {
  const double arg = 2.0 * std::numbers::pi * k * bp.arclength / period;
  return sine ? std::sin(arg) : std::cos(arg);
}

std::vector<BoundaryFlux> sample_boundary_fluxes(const Patch& patch, int n_samp) {
  if (n_samp < 1) throw std::invalid_argument("sample_boundary_fluxes: n_samp must be >= 1");
  const double period = perimeter(patch);
  std::vector<BoundaryFlux> out;
  out.reserve(static_cast<std::size_t>(n_samp));
  out.emplace_back(FourierFlux{0, false, period});
  for (int k = 1; static_cast<int>(out.size()) < n_samp; ++k) {
    out.emplace_back(FourierFlux{k, false, period});
    if (static_cast<int>(out.size()) < n_samp) out.emplace_back(FourierFlux{k, true, period});
  }
  return out;
}

namespace {

bool coefficients_constant_on(const ProblemSpec& spec, const Patch& patch) {
  Square box;
  if (const auto* d = std::get_if<DiskPatch>(&patch))
    box = Square{d->center - Point{d->radius, d->radius}, 2.0 * d->radius};
  else
    box = std::get<SquarePatch>(patch).square;
  constexpr int m = 9;
  double a_lo = 1e300, a_hi = -1e300, b_lo = 1e300, b_hi = -1e300;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Point p = box.corner + Point{box.side * i / (m - 1), box.side * j / (m - 1)};
      const double a = spec.a(p), b = spec.b(p);
      a_lo = std::min(a_lo, a);
      a_hi = std::max(a_hi, a);
      b_lo = std::min(b_lo, b);
      b_hi = std::max(b_hi, b);
    }
  return a_hi - a_lo <= 1e-14 * std::abs(a_hi) && b_hi - b_lo <= 1e-14 * std::abs(b_hi);
}

}  // namespace

int rank_allowance(int n_gauss) { return std::max(1, n_gauss / 4); }

N2DOperator build_leaf_n2d(const ProblemSpec& spec, const BoxNode& leaf, const QuadTree& tree,
                           FlopCounter* flops) {
  if (!leaf.is_leaf())
    throw std::invalid_argument("build_leaf_n2d: box " + std::to_string(leaf.id) + " is not a leaf");
  return sample_box_n2d(spec, leaf, tree, flops);
}

BoundarySamples sample_boundary_data(const ProblemSpec& spec, const BoxNode& box,
                                     const QuadTree& tree, FlopCounter* flops) {
  if (spec.n_gauss != tree.nodes_per_edge())
    throw std::invalid_argument("build_leaf_n2d: spec.n_gauss does not match the tree's rule");

  const Patch patch = make_patch(box, spec.enlargement);
  const int n_samp = spec.samples();
  const int order = spec.patch_order();
  // Enough angular points to resolve the highest sampled Fourier mode without aliasing;
  // variable coefficients couple modes, so they get half as many again.
  const int k_max = n_samp / 2;
  const int modes = coefficients_constant_on(spec, patch) ? 2 * k_max : 3 * k_max;
  const int angular = std::max(2 * (order + order % 2), modes + 8);

  PatchSolver solver(spec.a, spec.b, patch, order, angular, flops);
  const auto fluxes = sample_boundary_fluxes(patch, n_samp);
  const Eigen::MatrixXd phi = solver.solve(fluxes, flops);

  const auto bnodes = boundary_nodes(tree, box.side_edges);
  std::vector<Point> pts;
  pts.reserve(bnodes.size());
  for (const auto& bn : bnodes) pts.push_back(bn.x);
  const Eigen::Index nb = static_cast<Eigen::Index>(pts.size());
  const double m = solver.unknowns();

  BoundarySamples out;
  out.u = solver.evaluation_matrix(pts, FieldComponent::value) * phi;
  const Eigen::MatrixXd ux = solver.evaluation_matrix(pts, FieldComponent::dx) * phi;
  const Eigen::MatrixXd uy = solver.evaluation_matrix(pts, FieldComponent::dy) * phi;
  add_flops(flops, 3.0 * gemm_flops(static_cast<double>(nb), n_samp, m));
  out.v.resize(nb, n_samp);
  for (Eigen::Index k = 0; k < nb; ++k)
    out.v.row(k) = side_orientation(bnodes[static_cast<std::size_t>(k)].side) == Orientation::horizontal
                       ? uy.row(k)
                       : ux.row(k);
  return out;
}

N2DOperator sample_box_n2d(const ProblemSpec& spec, const BoxNode& leaf, const QuadTree& tree,
                           FlopCounter* flops) {
  const BoundarySamples samples = sample_boundary_data(spec, leaf, tree, flops);
  const Eigen::MatrixXd& u = samples.u;
  const Eigen::MatrixXd& v = samples.v;
  const Eigen::Index nb = v.rows();
  const int n_samp = static_cast<int>(v.cols());

  Eigen::BDCSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
  add_flops(flops, svd_flops(static_cast<double>(nb), n_samp));
  const Eigen::VectorXd& sigma = svd.singularValues();
  int rank = 0;
  while (rank < sigma.size() && sigma[rank] > spec.epsilon * sigma[0]) ++rank;
  const int required = static_cast<int>(nb) - rank_allowance(spec.n_gauss);
  if (rank < required) {
    std::ostringstream msg;
    msg << "leaf " << leaf.id << ": sampled fluxes have rank " << rank << " at cutoff "
        << spec.epsilon << " but " << required << " are needed; increase n_samp (now " << n_samp
        << ")";
    throw InsufficientSamplingError(msg.str());
  }

  const Eigen::MatrixXd left = u * svd.matrixV().leftCols(rank) *
                               sigma.head(rank).cwiseInverse().asDiagonal();
  N2DOperator op;
  op.box_id = leaf.id;
  op.side_edges = leaf.side_edges;
  op.nodes_per_edge = tree.nodes_per_edge();
  op.matrix = left * svd.matrixU().leftCols(rank).transpose();
  add_flops(flops, gemm_flops(static_cast<double>(nb), rank, n_samp) +
                       gemm_flops(static_cast<double>(nb), static_cast<double>(nb), rank));

  const Eigen::MatrixXd misfit = u - op.matrix * v;
  auto spectral_norm = [](const Eigen::MatrixXd& x) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(x).singularValues()(0);
  };
  op.fit_residual = spectral_norm(misfit) / spectral_norm(u);
  op.sample_rank = rank;
  if (!(op.fit_residual <= spec.fit_tolerance)) {
    std::ostringstream msg;
    msg << "leaf " << leaf.id << ": least-squares fit residual " << op.fit_residual
        << " exceeds tolerance " << spec.fit_tolerance;
    throw AccuracyError(msg.str());
  }
  return op;
}

double reciprocity_residual(const N2DOperator& op, const QuadTree& tree, const ScalarField& a,
                            const Eigen::VectorXd& v1, const Eigen::VectorXd& v2) {
  const auto nodes = boundary_nodes(tree, op.side_edges);
  const Eigen::VectorXd u1 = op.matrix * v1;
  const Eigen::VectorXd u2 = op.matrix * v2;
  double sum = 0.0, ref1 = 0.0, ref2 = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const double wa = nodes[k].weight * a(nodes[k].x);
    const double s = outward_sign(nodes[k].side);
    sum += wa * (u1[i] * s * v2[i] - u2[i] * s * v1[i]);
    ref1 += wa * std::abs(u1[i] * v2[i]);
    ref2 += wa * std::abs(u2[i] * v1[i]);
  }
  const double ref = std::max(ref1, ref2);
  return ref > 0.0 ? std::abs(sum) / ref : std::abs(sum);
}

}  // namespace hps
