#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hps/errors.hpp"
#include "support.hpp"

using namespace hps;

TEST_CASE("hierarchical solve recovers analytic edge potentials") {
  for (const AnalyticSolution& s : {cosh_x_solution(1.0), exp_y_solution(2.0), radial_solution(1.0, Point{-1.5, 0.5})}) {
    CAPTURE(s.name);
    const auto tree = testing::unit_tree(2, 8);
    const SolverState st = build(testing::spec_for(s, 8), tree);
    const Solution sol = solve(st, s.data());
    CHECK(max_edge_error(*tree, sol, s.phi) <= 1e-8);
    // Interior fluxes come out of the downward pass and match the analytic gradient.
    double flux_err = 0.0;
    for (const EdgeGeom& e : tree->edges())
      for (std::size_t q = 0; q < e.nodes.size(); ++q) {
        const Point g = s.grad(e.nodes[q]);
        const double exact = e.orientation == Orientation::vertical ? g.x : g.y;
        flux_err = std::max(flux_err, std::abs(sol.edge_flux[static_cast<std::size_t>(e.id)][static_cast<Eigen::Index>(q)] - exact));
      }
    CHECK(flux_err <= 1e-6);
  }
}

TEST_CASE("solve is linear in the data and reuses the build") {
  const auto tree = testing::unit_tree(2, 6);
  const SolverState st = build(testing::spec_for(cosh_x_solution(1.0), 6), tree);
  const NeumannData d1 = cosh_x_solution(1.0).data();
  const NeumannData d2 = exp_y_solution(1.0).data();
  const NeumannData combo{"combo", [&](Point p, Orientation o) { return 2.0 * d1(p, o) - 3.0 * d2(p, o); }};
  const Solution s1 = solve(st, d1), s2 = solve(st, d2), s3 = solve(st, combo);
  double diff = 0.0, scale = 0.0;
  for (const EdgeGeom& e : tree->edges()) {
    const auto k = static_cast<std::size_t>(e.id);
    diff = std::max(diff, (s3.edge_potential[k] - 2.0 * s1.edge_potential[k] + 3.0 * s2.edge_potential[k]).cwiseAbs().maxCoeff());
    scale = std::max(scale, s3.edge_potential[k].cwiseAbs().maxCoeff());
  }
  CHECK(diff <= 1e-10 * scale);
}

TEST_CASE("zero data gives a zero solution") {
  const auto tree = testing::unit_tree(2, 6);
  const SolverState st = build(testing::spec_for(cosh_x_solution(1.0), 6), tree);
  const Solution sol = solve(st, zero_data());
  CHECK(max_edge_magnitude(*tree, sol) <= 1e-10);
}

TEST_CASE("b identically zero is rejected before any work") {
  ProblemSpec spec = testing::spec_for(cosh_x_solution(1.0), 4);
  spec.b = ScalarField{"zero", [](Point) { return 0.0; }};
  CHECK_THROWS_AS(build(spec, testing::unit_tree(1, 4)), DegenerateProblemError);
}

TEST_CASE("build results do not depend on the thread count") {
  const auto tree = testing::unit_tree(2, 5);
  const ProblemSpec spec = testing::spec_for(plane_wave_solution(1.0, 0.5), 5);
  const SolverState a = build(spec, tree, BuildOptions{1});
  const SolverState b = build(spec, tree, BuildOptions{3});
  CHECK(a.root_op().matrix == b.root_op().matrix);
  CHECK(a.flop_count() == b.flop_count());
}

TEST_CASE("downward pass requires every exterior edge") {
  const auto tree = testing::unit_tree(1, 4);
  const SolverState st = build(testing::spec_for(cosh_x_solution(1.0), 4), tree);
  std::map<int, Eigen::VectorXd> partial;
  CHECK_THROWS_AS(solve(st, partial), std::invalid_argument);
}

TEST_CASE("evaluate_interior matches the analytic solution inside a leaf") {
  const AnalyticSolution s = plane_wave_solution(1.0, 0.4);
  const auto tree = testing::unit_tree(2, 10);
  const SolverState st = build(testing::spec_for(s, 10), tree);
  const Solution sol = solve(st, s.data());
  const int leaf = tree->leaf_at(1, 2);
  const Point c = tree->box(leaf).square.center();
  const std::vector<Point> pts = {c, c + Point{0.1, -0.05}, c + Point{-0.11, 0.09}};
  const Eigen::VectorXd phi = evaluate_interior(st, sol, leaf, pts);
  for (std::size_t k = 0; k < pts.size(); ++k) CHECK(std::abs(phi[static_cast<Eigen::Index>(k)] - s.phi(pts[k])) <= 1e-7);
  const std::vector<Point> outside = {Point{0.9, 0.9}};
  CHECK_THROWS_AS(evaluate_interior(st, sol, leaf, outside), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_interior(st, sol, 1, pts), std::invalid_argument);
}

TEST_CASE("solve flops are far below build flops") {
  const auto tree = testing::unit_tree(3, 4);
  const SolverState st = build(testing::spec_for(cosh_x_solution(1.0), 4), tree);
  const Solution sol = solve(st, cosh_x_solution(1.0).data());
  CHECK(sol.flops > 0);
  CHECK(static_cast<double>(sol.flops) <= 0.05 * static_cast<double>(st.merge_flops));
}

TEST_CASE("rank probe ranks are monotone in the cutoff and bounded by the dimension") {
  const auto tree = testing::unit_tree(2, 6);
  const SolverState st = build(testing::spec_for(cosh_x_solution(1.0), 6), tree);
  const auto rows = rank_probe(st);
  CHECK(rows.size() == 12 * 2);
  for (const RankRow& r : rows) {
    REQUIRE(r.ranks.size() == 3);
    CHECK(r.ranks[0] <= r.ranks[1]);
    CHECK(r.ranks[1] <= r.ranks[2]);
    CHECK(r.ranks[2] <= r.dim);
    CHECK(r.rows != r.cols);
  }
  CHECK(epsilon_rank(Eigen::MatrixXd::Identity(5, 5), 1e-8) == 5);
  CHECK(epsilon_rank(Eigen::MatrixXd::Ones(5, 5), 1e-8) == 1);
}
