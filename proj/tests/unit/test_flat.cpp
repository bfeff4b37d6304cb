#include "doctest.h"
#include "hps/errors.hpp"
#include "support.hpp"

using namespace hps;

TEST_CASE("flat system has one block row per interior edge and at most seven blocks") {
  const auto tree = testing::unit_tree(2, 5);
  const SolverState st = build(testing::spec_for(cosh_x_solution(1.0), 5), tree);
  const EquilibriumSystem sys = assemble_flat(*tree, st.ops, cosh_x_solution(1.0).data());
  CHECK(sys.num_blocks() == 24);
  int seven = 0;
  for (int r = 0; r < sys.num_blocks(); ++r) {
    CHECK(sys.nonzero_blocks_in_row(r) <= 7);
    CHECK(sys.nonzero_blocks_in_row(r) >= 1);
    seven += sys.nonzero_blocks_in_row(r) == 7;
  }
  CHECK(seven > 0);
  CHECK(sys.assemble().rows() == 24 * 5);
}

TEST_CASE("flat and hierarchical solves agree") {
  for (int levels : {1, 2}) {
    const auto tree = testing::unit_tree(levels, 6);
    ProblemSpec spec = testing::spec_for(cosh_x_solution(1.0), 6);
    spec.a = bump_field(0.5, 0.3, Point{0.5, 0.5});
    spec.b = oscillatory_field(1.0, 0.5);
    const SolverState st = build(spec, tree);
    const Solution sol = solve(st, spec.data);
    const CrossPathReport rep = cross_path(st, sol, spec.data);
    CHECK(rep.max_relative_difference <= 1e-9);
    CHECK(rep.flat_residual <= 1e-10);
  }
}

TEST_CASE("a corrupted leaf operator breaks cross-path agreement") {
  const auto tree = testing::unit_tree(2, 5);
  SolverState st = build(testing::spec_for(cosh_x_solution(1.0), 5), tree);
  const Solution sol = solve(st, cosh_x_solution(1.0).data());
  st.ops[static_cast<std::size_t>(tree->leaf_at(1, 1))].matrix.diagonal().array() *= 1.01;
  CHECK(cross_path(st, sol, cosh_x_solution(1.0).data()).max_relative_difference > 1e-6);
}
