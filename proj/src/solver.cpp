#include "hps/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hps/errors.hpp"
#include "hps/parallel.hpp"

namespace hps {

namespace {

Eigen::VectorXd gather(const std::vector<Eigen::VectorXd>& edge_values,
                       const std::vector<int>& edges, int g) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(edges.size()) * g);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& v = edge_values[static_cast<std::size_t>(edges[k])];
    if (v.size() != g) {
      std::ostringstream msg;
      msg << "downward pass reached edge " << edges[k] << " before its flux was known";
      throw InternalError(msg.str());
    }
    out.segment(static_cast<Eigen::Index>(k) * g, g) = v;
  }
  return out;
}

void apply_record(const MergeRecord& rec, std::vector<Eigen::VectorXd>& flux, FlopCounter& flops) {
  const int g = rec.nodes_per_edge;
  const Eigen::VectorXd ext = gather(flux, rec.exterior_edges, g);
  const Eigen::VectorXd shared = rec.solve_map * ext;
  for (std::size_t k = 0; k < rec.shared_edges.size(); ++k)
    flux[static_cast<std::size_t>(rec.shared_edges[k])] = shared.segment(static_cast<Eigen::Index>(k) * g, g);
  flops.add(gemm_flops(static_cast<double>(rec.solve_map.rows()), 1.0,
                       static_cast<double>(rec.solve_map.cols())));
}

// The leaf that stores an edge's potential: the one above/right of it when it exists.
int owner_leaf(const EdgeGeom& e) { return e.upper_leaf > 0 ? e.upper_leaf : e.lower_leaf; }

}  // namespace

SolverState build(const ProblemSpec& spec, std::shared_ptr<const QuadTree> tree,
                  const BuildOptions& options) {
  if (!tree) throw std::invalid_argument("build: null tree");
  if (spec.n_gauss != tree->nodes_per_edge())
    throw std::invalid_argument("build: spec.n_gauss does not match the tree's edge rule");
  const double leaf_side = tree->root_square().side / tree->leaves_per_side();
  spec.validate(tree->root_square(), spec.enlargement * leaf_side);

  SolverState state;
  state.tree = tree;
  state.spec = spec;
  state.ops.resize(static_cast<std::size_t>(tree->num_boxes()) + 1);
  state.records.resize(static_cast<std::size_t>(tree->num_boxes()) + 1);

  FlopCounter leaf_counter;
  const std::vector<int> leaves = tree->leaves();
  parallel_for(static_cast<int>(leaves.size()), options.threads, [&](int i) {
    const BoxNode& leaf = tree->box(leaves[static_cast<std::size_t>(i)]);
    try {
      state.ops[static_cast<std::size_t>(leaf.id)] = build_leaf_n2d(spec, leaf, *tree, &leaf_counter);
    } catch (const DegenerateProblemError& e) {
      throw DegenerateProblemError("leaf " + std::to_string(leaf.id) + ": " + e.what());
    }
  });

  state.leaf_flops = leaf_counter.total();
  merge_up(state, options);
  return state;
}

void merge_up(SolverState& state, const BuildOptions& options) {
  const QuadTree& tree = *state.tree;
  FlopCounter merge_counter;
  for (int level = tree.levels() - 1; level >= 0; --level) {
    const std::vector<int> ids = tree.level_boxes(level);
    parallel_for(static_cast<int>(ids.size()), options.threads, [&](int i) {
      const BoxNode& box = tree.box(ids[static_cast<std::size_t>(i)]);
      const auto kids = child_order(box);
      std::array<const N2DOperator*, 4> children{};
      for (int q = 0; q < 4; ++q) children[q] = &state.ops[static_cast<std::size_t>(kids[q])];
      MergeFourResult merged;
      try {
        merged = merge_four(children, box.id, options.order, &merge_counter);
      } catch (const MergeSingularityError& e) {
        throw MergeSingularityError("box " + std::to_string(box.id) + ": " + e.what());
      }
      if (merged.op.side_edges != box.side_edges)
        throw InternalError("merged operator of box " + std::to_string(box.id) +
                            " does not match the tree's side lists");
      state.ops[static_cast<std::size_t>(box.id)] = std::move(merged.op);
      state.records[static_cast<std::size_t>(box.id)] = std::move(merged.records);
    });
  }
  state.merge_flops = merge_counter.total();
}

SolverState rebuild_merges(const SolverState& state, const BuildOptions& options) {
  SolverState out;
  out.tree = state.tree;
  out.spec = state.spec;
  out.ops.resize(state.ops.size());
  out.records.resize(state.records.size());
  for (int id : state.tree->leaves()) out.ops[static_cast<std::size_t>(id)] = state.op(id);
  out.leaf_flops = state.leaf_flops;
  merge_up(out, options);
  return out;
}

Solution solve(const SolverState& state, const NeumannData& data) {
  const QuadTree& tree = *state.tree;
  std::map<int, Eigen::VectorXd> exterior;
  for (const EdgeGeom& e : tree.edges()) {
    if (!e.is_exterior) continue;
    Eigen::VectorXd v(static_cast<Eigen::Index>(e.nodes.size()));
    for (std::size_t q = 0; q < e.nodes.size(); ++q)
      v[static_cast<Eigen::Index>(q)] = data(e.nodes[q], e.orientation);
    exterior.emplace(e.id, std::move(v));
  }
  return solve(state, exterior);
}

Solution solve(const SolverState& state, const std::map<int, Eigen::VectorXd>& exterior_flux) {
  const QuadTree& tree = *state.tree;
  const int g = tree.nodes_per_edge();
  Solution sol;
  sol.edge_flux.resize(static_cast<std::size_t>(tree.num_edges()));
  sol.edge_potential.resize(static_cast<std::size_t>(tree.num_edges()));
  for (const EdgeGeom& e : tree.edges()) {
    if (!e.is_exterior) continue;
    const auto it = exterior_flux.find(e.id);
    if (it == exterior_flux.end() || it->second.size() != g)
      throw std::invalid_argument("solve: missing flux data for exterior edge " + std::to_string(e.id));
    sol.edge_flux[static_cast<std::size_t>(e.id)] = it->second;
  }

  FlopCounter flops;
  for (int level = 0; level < tree.levels(); ++level) {
    for (int id : tree.level_boxes(level)) {
      const auto& recs = state.records[static_cast<std::size_t>(id)];
      apply_record(recs[2], sol.edge_flux, flops);
      apply_record(recs[0], sol.edge_flux, flops);
      apply_record(recs[1], sol.edge_flux, flops);
    }
  }

  for (int id : tree.leaves()) {
    const N2DOperator& op = state.op(id);
    const std::vector<int> edges = op.edge_order();
    const Eigen::VectorXd u = op.matrix * gather(sol.edge_flux, edges, g);
    flops.add(gemm_flops(op.size(), 1.0, op.size()));
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const EdgeGeom& e = tree.edge(edges[k]);
      if (owner_leaf(e) == id)
        sol.edge_potential[static_cast<std::size_t>(e.id)] = u.segment(static_cast<Eigen::Index>(k) * g, g);
    }
  }
  sol.flops = flops.total();
  return sol;
}

Eigen::VectorXd evaluate_interior(const SolverState& state, const Solution& solution, int leaf_id,
                                  std::span<const Point> points) {
  const QuadTree& tree = *state.tree;
  const BoxNode& leaf = tree.box(leaf_id);
  if (!leaf.is_leaf()) throw std::invalid_argument("evaluate_interior: box is not a leaf");
  for (const Point& p : points)
    if (!leaf.square.contains_strictly(p))
      throw std::invalid_argument("evaluate_interior: point outside leaf " + std::to_string(leaf_id));

  const GaussRule& rule = tree.rule();
  auto flux = [&](const BoundaryPoint& bp) {
    Side s;
    if (bp.normal.y < -0.5) s = Side::south;
    else if (bp.normal.x > 0.5) s = Side::east;
    else if (bp.normal.y > 0.5) s = Side::north;
    else s = Side::west;
    const EdgeGeom& e = tree.edge(leaf.side(s)[0]);
    const Point mid = 0.5 * (e.p0 + e.p1);
    const double t = e.orientation == Orientation::horizontal ? (bp.x.x - mid.x) / e.half_length()
                                                              : (bp.x.y - mid.y) / e.half_length();
    const double target[1] = {t};
    const double v = (interp_matrix(rule, target) * solution.edge_flux[static_cast<std::size_t>(e.id)])(0);
    return outward_sign(s) * v;
  };
  const PatchSolution local =
      solve_patch(state.spec, SquarePatch{leaf.square}, flux, state.spec.patch_order());
  return local.values(points);
}

int epsilon_rank(const Eigen::MatrixXd& m, double cutoff) {
  if (m.size() == 0) return 0;
  const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
  int r = 0;
  while (r < s.size() && s[r] > cutoff * s[0]) ++r;
  return r;
}

std::vector<RankRow> rank_probe(const SolverState& state, std::span<const double> cutoffs) {
  const QuadTree& tree = *state.tree;
  std::vector<RankRow> rows;
  for (int level = 0; level < tree.levels(); ++level) {
    const int id = tree.level_boxes(level).front();
    const N2DOperator& op = state.op(id);
    for (Side r : kSides)
      for (Side c : kSides) {
        if (r == c) continue;
        const Eigen::MatrixXd blk = op.block(r, c);
        const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXd>(blk).singularValues();
        RankRow row{level, id, r, c, static_cast<int>(blk.rows()), {}};
        for (double cut : cutoffs) {
          int k = 0;
          while (k < s.size() && s[k] > cut * s[0]) ++k;
          row.ranks.push_back(k);
        }
        rows.push_back(std::move(row));
      }
  }
  return rows;
}

}  // namespace hps
