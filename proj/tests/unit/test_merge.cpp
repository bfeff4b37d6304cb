#include <stdexcept>

#include "doctest.h"
#include "hps/errors.hpp"
#include "support.hpp"

using namespace hps;

namespace {

struct Fixture {
  std::shared_ptr<const QuadTree> tree;
  ProblemSpec spec;
  SolverState state;
};

Fixture fixture(int levels, int n) {
  Fixture f;
  f.tree = testing::unit_tree(levels, n);
  f.spec = testing::spec_for(cosh_x_solution(1.0), n);
  f.state = build(f.spec, f.tree);
  return f;
}

}  // namespace

TEST_CASE("merge_two of side-by-side leaves maps permissible data correctly") {
  const Fixture f = fixture(1, 8);
  const auto kids = child_order(f.tree->root());
  const MergeResult m = merge_two(f.state.op(kids[0]), f.state.op(kids[2]), MergeDirection::horizontal);
  CHECK(m.op.side_edges[index(Side::south)].size() == 2);
  CHECK(m.op.side_edges[index(Side::east)].size() == 1);
  CHECK(m.record.shared_edges.size() == 1);
  for (const AnalyticSolution& s : {cosh_x_solution(1.0), exp_y_solution(1.0)}) {
    const Eigen::VectorXd v = tabulate_flux(*f.tree, m.op.side_edges, s.data());
    const Eigen::VectorXd u = tabulate_values(*f.tree, m.op.side_edges, s.phi);
    CHECK((u - m.op.matrix * v).norm() / u.norm() <= 1e-8);
    // The record recovers the eliminated shared flux.
    const EdgeGeom& e = f.tree->edge(m.record.shared_edges[0]);
    Eigen::VectorXd exact(8);
    for (int q = 0; q < 8; ++q) exact[q] = s.data()(e.nodes[static_cast<std::size_t>(q)], e.orientation);
    CHECK((m.record.solve_map * v - exact).norm() <= 1e-7 * v.norm());
  }
}

TEST_CASE("merge_two rejects boxes that do not share a side") {
  const Fixture f = fixture(1, 4);
  const auto kids = child_order(f.tree->root());
  CHECK_THROWS_AS(merge_two(f.state.op(kids[0]), f.state.op(kids[3]), MergeDirection::horizontal),
                  std::invalid_argument);
  CHECK_THROWS_AS(merge_two(f.state.op(kids[0]), f.state.op(kids[2]), MergeDirection::vertical),
                  std::invalid_argument);
}

TEST_CASE("merge_four is independent of the pairing order") {
  const Fixture f = fixture(2, 6);
  for (int id : f.tree->level_boxes(1)) {
    const auto kids = child_order(f.tree->box(id));
    std::array<const N2DOperator*, 4> ops{};
    for (int q = 0; q < 4; ++q) ops[q] = &f.state.op(kids[q]);
    const MergeFourResult h = merge_four(ops, id, MergeOrder::horizontal_first);
    const MergeFourResult v = merge_four(ops, id, MergeOrder::vertical_first);
    CHECK(h.op.side_edges == v.op.side_edges);
    CHECK((h.op.matrix - v.op.matrix).norm() <= 1e-10 * h.op.matrix.norm());
    CHECK(h.records[2].parent_id == id);
    CHECK(h.records[0].parent_id == 0);
  }
}

TEST_CASE("merged operator reproduces sample solutions of a patch around the parent") {
  const int n = 8;
  const Fixture f = fixture(1, n);
  ProblemSpec parent = f.spec;
  parent.n_samp = 12 * n;
  parent.p_patch = 4 * n + 8;
  parent.enlargement = 1.5;
  const BoundarySamples s = sample_boundary_data(parent, f.tree->root(), *f.tree);
  CHECK((s.u - f.state.root_op().matrix * s.v).norm() / s.u.norm() <= 1e-7);
}

TEST_CASE("merge flops are counted") {
  const Fixture f = fixture(1, 4);
  CHECK(f.state.merge_flops > 0);
  CHECK(f.state.leaf_flops > f.state.merge_flops);
}
