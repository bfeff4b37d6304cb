#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hps/analysis.hpp"
#include "hps/errors.hpp"

using namespace hps;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kGauss = 10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::shared_ptr<const QuadTree> unit_tree(int levels, int n) {
  return std::make_shared<const QuadTree>(build_tree(Square{Point{0.0, 0.0}, 1.0}, levels, gauss_legendre(n)));
}

ProblemSpec constant_spec(int n) {
  ProblemSpec spec = cosh_x_solution(1.0).problem();
  spec.n_gauss = n;
  spec.epsilon = 1e-10;
  return spec;
}

ProblemSpec variable_spec(int n) {
  ProblemSpec spec;
  spec.a = bump_field(0.5, 0.3, Point{0.5, 0.5});
  spec.b = oscillatory_field(1.0, 0.5);
  spec.data = cosh_x_solution(1.0).data();
  spec.n_gauss = n;
  return spec;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

Outcome spectral_accuracy() {
  const AnalyticSolution exact = cosh_x_solution(1.0);
  std::vector<double> errs;
  std::string detail = "errors";
  for (int n : {4, 6, 8, 10}) {
    const SolverState st = build(constant_spec(n), unit_tree(2, n));
    const Solution sol = solve(st, exact.data());
    errs.push_back(max_edge_error(*st.tree, sol, exact.phi));
    detail += " n" + std::to_string(n) + "=" + sci(errs.back());
  }
  bool pass = errs[3] <= 1e-7;
  for (int k = 0; k < 3; ++k) {
    const double ratio = errs[k] / errs[k + 1];
    detail += " r" + std::to_string(k) + "=" + sci(ratio);
    pass = pass && ratio >= 1e2;
  }
  return {pass, detail + " (need n10<=1e-7, ratios>=1e2)"};
}

Outcome leaf_permissibility() {
  const auto tree = unit_tree(2, kGauss);
  std::map<double, std::vector<N2DOperator>> ops_by_kappa;
  double worst = 0.0;
  std::string worst_name;
  for (const AnalyticSolution& s : analytic_suite()) {
    ProblemSpec spec = s.problem();
    spec.n_gauss = kGauss;
    auto& ops = ops_by_kappa[s.kappa];
    if (ops.empty())
      for (int id : tree->leaves()) ops.push_back(build_leaf_n2d(spec, tree->box(id), *tree));
    for (const N2DOperator& op : ops) {
      const Eigen::VectorXd v = tabulate_flux(*tree, op.side_edges, s.data());
      const Eigen::VectorXd u = tabulate_values(*tree, op.side_edges, s.phi);
      const double r = (u - op.matrix * v).norm() / u.norm();
      if (r > worst) {
        worst = r;
        worst_name = s.name;
      }
    }
  }
  return {worst <= 1e-7, "worst ||u-Tv||/||u|| = " + sci(worst) + " (" + worst_name + ", need <=1e-7)"};
}

Outcome merge_correctness() {
  const auto tree = unit_tree(1, kGauss);
  const ProblemSpec spec = constant_spec(kGauss);
  const SolverState st = build(spec, tree);
  const auto kids = child_order(tree->root());
  std::array<const N2DOperator*, 4> children{};
  for (int q = 0; q < 4; ++q) children[q] = &st.op(kids[q]);
  const MergeFourResult h = merge_four(children, 1, MergeOrder::horizontal_first);
  const MergeFourResult v = merge_four(children, 1, MergeOrder::vertical_first);

  // Directly sampled parent operator; compared on the span of its sampled fluxes, which
  // is where a least-squares fit is determined.
  ProblemSpec parent = spec;
  parent.n_samp = 12 * kGauss;
  parent.p_patch = 4 * kGauss + 8;
  parent.enlargement = 1.5;
  parent.epsilon = 1e-12;
  const N2DOperator direct = sample_box_n2d(parent, tree->root(), *tree);
  const BoundarySamples samples = sample_boundary_data(parent, tree->root(), *tree);
  const double direct_diff = ((h.op.matrix - direct.matrix) * samples.v).norm() / samples.u.norm();
  const double order_diff = (h.op.matrix - v.op.matrix).norm() / h.op.matrix.norm();
  return {direct_diff <= 1e-7 && order_diff <= 1e-8,
          "merged vs sampled parent = " + sci(direct_diff) + " (need <=1e-7), order difference = " +
              sci(order_diff) + " (need <=1e-8)"};
}

Outcome cross_path_agreement() {
  double worst = 0.0;
  int max_blocks = 0;
  int interior = 0, exterior = 0;
  for (int levels : {1, 2, 3}) {
    for (const ProblemSpec& spec : {constant_spec(kGauss), variable_spec(kGauss)}) {
      const SolverState st = build(spec, unit_tree(levels, kGauss));
      const Solution sol = solve(st, spec.data);
      const CrossPathReport rep = cross_path(st, sol, spec.data);
      worst = std::max(worst, rep.max_relative_difference);
      max_blocks = std::max(max_blocks, rep.max_blocks_per_row);
      if (levels == 2) {
        interior = rep.interior_edges;
        exterior = rep.exterior_edges;
      }
    }
  }
  return {worst <= 1e-9 && max_blocks <= 7 && interior == 24 && exterior == 16,
          "max relative flux difference = " + sci(worst) + " (need <=1e-9), blocks/row = " +
              std::to_string(max_blocks) + " (need <=7), L=2 census " + std::to_string(interior) + "/" +
              std::to_string(exterior) + " (need 24/16)"};
}

Outcome fd_oracle() {
  const ProblemSpec spec = variable_spec(kGauss);
  const SolverState st = build(spec, unit_tree(2, kGauss));
  const Solution sol = solve(st, spec.data);
  const FdSolution coarse = fd_solve(spec.a, spec.b, spec.data, st.tree->root_square(), 128);
  const FdSolution fine = fd_solve(spec.a, spec.b, spec.data, st.tree->root_square(), 256);
  const FdComparison cmp = compare_with_fd(*st.tree, sol, coarse, fine);
  return {cmp.max_difference <= 5.0 * cmp.band,
          "|spectral - Richardson FD| = " + sci(cmp.max_difference) + " vs 5 x band " + sci(5.0 * cmp.band) +
              " over " + std::to_string(cmp.points) + " edge points"};
}

Outcome greens_identity() {
  const std::vector<AnalyticSolution> family = {cosh_x_solution(1.0), exp_y_solution(1.0),
                                                plane_wave_solution(1.0, std::numbers::pi / 6.0),
                                                radial_solution(1.0, Point{-1.5, 0.5})};
  ProblemSpec spec = family[0].problem();
  spec.n_gauss = kGauss;
  const SolverState st = build(spec, unit_tree(2, kGauss));
  std::vector<Solution> sols;
  for (const AnalyticSolution& s : family) sols.push_back(solve(st, s.data()));
  double leaf = 0.0, root = 0.0;
  for (std::size_t i = 0; i < sols.size(); ++i)
    for (std::size_t j = i + 1; j < sols.size(); ++j) {
      const GreenReport g = green_identity(st, sols[i], sols[j]);
      leaf = std::max(leaf, g.worst_leaf);
      root = std::max(root, g.root);
    }
  return {leaf <= 1e-8 && root <= 1e-8,
          "worst leaf residual = " + sci(leaf) + ", root residual = " + sci(root) + " (need <=1e-8)"};
}

std::map<int, SolverState> g_states;  // L=3, 4 builds shared with the rank criterion

Outcome flop_scaling() {
  std::vector<double> nodes, build_f, solve_f;
  for (int levels = 2; levels <= 5; ++levels) {
    SolverState st = build(constant_spec(kGauss), unit_tree(levels, kGauss));
    const Solution sol = solve(st, st.spec.data);
    nodes.push_back(st.tree->total_nodes());
    build_f.push_back(static_cast<double>(st.merge_flops));
    solve_f.push_back(static_cast<double>(sol.flops));
    if (levels == 3 || levels == 4) g_states.emplace(levels, std::move(st));
  }
  const double sb = log_log_slope(nodes, build_f);
  const double ss = log_log_slope(nodes, solve_f);
  const double ratio = solve_f.back() / build_f.back();
  return {sb >= 1.2 && sb <= 1.8 && ss >= 0.8 && ss <= 1.2 && ratio <= 0.05,
          "build slope = " + sci(sb) + " (need [1.2,1.8]), solve slope = " + sci(ss) +
              " (need [0.8,1.2]), solve/build at L=5 = " + sci(ratio) + " (need <=0.05)"};
}

Outcome rank_structure() {
  for (int levels : {3, 4})
    if (!g_states.count(levels)) g_states.emplace(levels, build(constant_spec(kGauss), unit_tree(levels, kGauss)));
  const auto r3 = rank_probe(g_states.at(3));
  const auto r4 = rank_probe(g_states.at(4));
  bool pass = true;
  double worst_fraction = 0.0, worst_growth = 0.0;
  for (std::size_t k = 0; k < r4.size(); ++k) {
    if (r4[k].level != 0) continue;
    const RankRow& b4 = r4[k];
    const RankRow& b3 = r3[k];  // same (rows, cols) order at level 0
    const double fraction = static_cast<double>(b4.ranks[1]) / b4.dim;
    const double growth = std::log(static_cast<double>(b4.ranks[1]) / b3.ranks[1]) /
                          std::log(static_cast<double>(b4.dim) / b3.dim);
    worst_fraction = std::max(worst_fraction, fraction);
    worst_growth = std::max(worst_growth, growth);
    pass = pass && fraction <= 0.5 && growth < 1.0;
  }
  return {pass, "max rank@1e-8/dim at L=4 = " + sci(worst_fraction) +
                    " (need <=0.5), max growth exponent L=3->4 = " + sci(worst_growth) + " (need <1)"};
}

Outcome degenerate_handling() {
  bool rejected = false;
  std::string message;
  ProblemSpec bad = constant_spec(kGauss);
  bad.b = ScalarField{"zero", [](Point) { return 0.0; }};
  try {
    build(bad, unit_tree(2, kGauss));
  } catch (const DegenerateProblemError& e) {
    message = e.what();
    rejected = message.find("strictly positive") != std::string::npos;
  }
  double zero_mag = 0.0, linearity = 0.0;
  for (const ProblemSpec& spec : {constant_spec(kGauss), variable_spec(kGauss)}) {
    const SolverState st = build(spec, unit_tree(2, kGauss));
    zero_mag = std::max(zero_mag, max_edge_magnitude(*st.tree, solve(st, zero_data())));
    const NeumannData d1 = cosh_x_solution(1.0).data(), d2 = exp_y_solution(2.0).data();
    const NeumannData combo{"combo", [&](Point p, Orientation o) { return 0.7 * d1(p, o) - 1.3 * d2(p, o); }};
    const Solution s1 = solve(st, d1), s2 = solve(st, d2), s3 = solve(st, combo);
    double diff = 0.0, scale = 0.0;
    for (const EdgeGeom& e : st.tree->edges()) {
      const auto k = static_cast<std::size_t>(e.id);
      diff = std::max(diff, (s3.edge_potential[k] - 0.7 * s1.edge_potential[k] + 1.3 * s2.edge_potential[k]).cwiseAbs().maxCoeff());
      scale = std::max(scale, s3.edge_potential[k].cwiseAbs().maxCoeff());
    }
    linearity = std::max(linearity, diff / scale);
  }
  return {rejected && zero_mag <= 1e-10 && linearity <= 1e-10,
          std::string("b=0 ") + (rejected ? "rejected" : "NOT rejected") + ", zero-data magnitude = " +
              sci(zero_mag) + " (need <=1e-10), linearity defect = " + sci(linearity) + " (need <=1e-10)"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds; 0 for none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "spectral accuracy", 30.0, spectral_accuracy},
      {2, "leaf permissibility", 60.0, leaf_permissibility},
      {3, "merge correctness", 0.0, merge_correctness},
      {4, "cross-path agreement", 0.0, cross_path_agreement},
      {5, "finite-difference oracle", 120.0, fd_oracle},
      {6, "Green's identity", 0.0, greens_identity},
      {7, "flop scaling", 300.0, flop_scaling},
      {8, "rank structure", 0.0, rank_structure},
      {9, "degenerate handling", 0.0, degenerate_handling},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      o.pass = false;
      o.detail += "; runtime over limit";
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, " [%.1f s%s]", secs,
                  c.time_limit > 0.0 ? (" / " + std::to_string(static_cast<int>(c.time_limit)) + " s").c_str() : "");
    std::printf("criterion %d %s: %s - %s%s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), timing);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("acceptance: %d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
