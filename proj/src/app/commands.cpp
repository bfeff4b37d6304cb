#include "hps/app/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "hps/analysis.hpp"
#include "hps/errors.hpp"

namespace hps::app {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

/// CSV file with the config comment line followed by the header row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const RunConfig& cfg, const std::string& command,
            const std::string& header)
      : os_(path) {
    if (!os_) throw std::runtime_error("cannot write " + path.string());
    os_ << "# hps " << command << " config: " << cfg.describe() << '\n' << header << '\n';
  }
  template <class... T>
  void row(const T&... cells) {
    std::size_t k = 0;
    ((os_ << (k++ ? "," : "") << cells), ...);
    os_ << '\n';
  }

 private:
  std::ofstream os_;
};

class RunLog {
 public:
  RunLog(const std::filesystem::path& dir, const std::string& command)
      : os_(dir / "run.log", std::ios::app), command_(command), start_(Clock::now()) {}
  void note(const std::string& what) {
    const double s = std::chrono::duration<double>(Clock::now() - start_).count();
    os_ << command_ << " " << what << " wall_s=" << s << '\n';
  }

 private:
  std::ofstream os_;
  std::string command_;
  Clock::time_point start_;
};

std::shared_ptr<const QuadTree> make_tree(int levels, int n_gauss) {
  return std::make_shared<const QuadTree>(build_tree(Square{Point{0.0, 0.0}, 1.0}, levels, gauss_legendre(n_gauss)));
}

SolverState build_for(const RunConfig& cfg, int levels, int n_gauss, const CommandOptions& options) {
  ProblemSpec spec = cfg.problem();
  spec.n_gauss = n_gauss;
  return build(spec, make_tree(levels, n_gauss), BuildOptions{options.threads, MergeOrder::horizontal_first});
}

const char* orientation_name(Orientation o) { return o == Orientation::horizontal ? "horizontal" : "vertical"; }

void corrupt(SolverState& state, int leaf_id) {
  const QuadTree& tree = *state.tree;
  if (leaf_id > tree.num_boxes() || !tree.box(leaf_id).is_leaf())
    throw ConfigError("config: testing.corrupt_leaf " + std::to_string(leaf_id) + " is not a leaf id");
  auto& m = state.ops[static_cast<std::size_t>(leaf_id)].matrix;
  m.diagonal().array() *= 1.01;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"solve", "converge", "scaling", "rankprobe", "verify"};
  return names;
}

int cmd_solve(const RunConfig& cfg, const CommandOptions& options, std::ostream& out) {
  RunLog log(options.out_dir, "solve");
  const SolverState state = build_for(cfg, cfg.levels, cfg.n_gauss, options);
  log.note("build");
  const Solution sol = solve(state, state.spec.data);
  log.note("solve");
  const QuadTree& tree = *state.tree;

  CsvWriter csv(options.out_dir / "solution.csv", cfg, "solve", "edge_id,orientation,node_x,node_y,u,v");
  for (const EdgeGeom& e : tree.edges())
    for (std::size_t q = 0; q < e.nodes.size(); ++q) {
      const auto k = static_cast<Eigen::Index>(q);
      csv.row(e.id, orientation_name(e.orientation), fmt(e.nodes[q].x), fmt(e.nodes[q].y),
              fmt(sol.edge_potential[static_cast<std::size_t>(e.id)][k]),
              fmt(sol.edge_flux[static_cast<std::size_t>(e.id)][k]));
    }

  double fit = 0.0;
  for (int id : tree.leaves()) fit = std::max(fit, state.op(id).fit_residual);
  CsvWriter summary(options.out_dir / "summary.csv", cfg, "solve", "metric,value");
  summary.row("levels", tree.levels());
  summary.row("n_gauss", tree.nodes_per_edge());
  summary.row("leaves", static_cast<int>(tree.leaves().size()));
  summary.row("edges", tree.num_edges());
  summary.row("interior_edges", tree.num_interior_edges());
  summary.row("nodes", tree.total_nodes());
  summary.row("max_leaf_fit_residual", fmt(fit));
  summary.row("flops_leaf", state.leaf_flops);
  summary.row("flops_merge", state.merge_flops);
  summary.row("flops_solve", sol.flops);
  out << "solve: L=" << tree.levels() << " n_gauss=" << tree.nodes_per_edge() << " nodes=" << tree.total_nodes()
      << " max_leaf_fit_residual=" << fmt_short(fit) << '\n';
  if (const auto exact = cfg.analytic()) {
    const double err = max_edge_error(tree, sol, exact->phi);
    summary.row("max_edge_error", fmt(err));
    out << "solve: max_edge_error=" << fmt_short(err) << " against " << exact->name << '\n';
  }
  return kExitOk;
}

int cmd_converge(const RunConfig& cfg, const CommandOptions& options, std::ostream& out) {
  const auto exact = cfg.analytic();
  if (!exact) throw ConfigError("config: converge needs a preset with a closed-form solution");
  RunLog log(options.out_dir, "converge");
  CsvWriter csv(options.out_dir / "converge.csv", cfg, "converge", "n_gauss,max_error");
  for (int n : cfg.converge_n_gauss) {
    const SolverState state = build_for(cfg, cfg.levels, n, options);
    const Solution sol = solve(state, state.spec.data);
    const double err = max_edge_error(*state.tree, sol, exact->phi);
    log.note("n_gauss=" + std::to_string(n));
    csv.row(n, fmt(err));
    out << "converge: n_gauss=" << n << " max_error=" << fmt_short(err) << '\n';
  }
  return kExitOk;
}

int cmd_scaling(const RunConfig& cfg, const CommandOptions& options, std::ostream& out) {
  RunLog log(options.out_dir, "scaling");
  CsvWriter csv(options.out_dir / "scaling.csv", cfg, "scaling",
                "L,N_nodes,N_edge,flops_leaf,flops_merge,flops_total,flops_build,flops_solve");
  std::vector<double> nodes, edges, build_f, solve_f, total_f;
  for (int level : cfg.scaling_levels) {
    const SolverState state = build_for(cfg, level, cfg.n_gauss, options);
    log.note("build L=" + std::to_string(level));
    const Solution sol = solve(state, state.spec.data);
    log.note("solve L=" + std::to_string(level));
    const QuadTree& tree = *state.tree;
    csv.row(level, tree.total_nodes(), tree.num_edges(), state.leaf_flops, state.merge_flops,
            state.flop_count(), state.merge_flops, sol.flops);
    nodes.push_back(tree.total_nodes());
    edges.push_back(tree.num_edges());
    build_f.push_back(static_cast<double>(state.merge_flops));
    solve_f.push_back(static_cast<double>(sol.flops));
    total_f.push_back(static_cast<double>(state.flop_count()));
    out << "scaling: L=" << level << " N_nodes=" << tree.total_nodes() << " flops_build=" << state.merge_flops
        << " flops_solve=" << sol.flops << '\n';
  }
  if (nodes.size() >= 2) {
    CsvWriter fit(options.out_dir / "scaling_fit.csv", cfg, "scaling", "quantity,against,slope");
    const std::vector<std::tuple<const char*, const char*, const std::vector<double>*, const std::vector<double>*>> rows = {
        {"flops_build", "N_nodes", &nodes, &build_f}, {"flops_build", "N_edge", &edges, &build_f},
        {"flops_solve", "N_nodes", &nodes, &solve_f}, {"flops_solve", "N_edge", &edges, &solve_f},
        {"flops_total", "N_nodes", &nodes, &total_f}};
    for (const auto& [q, x, xs, ys] : rows) {
      const double slope = log_log_slope(*xs, *ys);
      fit.row(q, x, fmt(slope));
      out << "scaling: slope " << q << " vs " << x << " = " << fmt_short(slope) << '\n';
    }
  }
  return kExitOk;
}

int cmd_rankprobe(const RunConfig& cfg, const CommandOptions& options, std::ostream& out) {
  RunLog log(options.out_dir, "rankprobe");
  const SolverState state = build_for(cfg, cfg.levels, cfg.n_gauss, options);
  log.note("build");
  std::string header = "level,block,dim";
  for (double c : cfg.rank_cutoffs) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", c);
    std::string label = buf;
    if (const auto e = label.find("e-0"); e != std::string::npos) label.erase(e + 2, 1);
    header += ",rank@" + label;
  }
  CsvWriter csv(options.out_dir / "ranks.csv", cfg, "rankprobe", header);
  const auto rows = rank_probe(state, cfg.rank_cutoffs);
  for (const RankRow& r : rows) {
    const std::string block = std::string(side_name(r.rows)) + "-" + side_name(r.cols);
    std::ostringstream ranks;
    for (std::size_t k = 0; k < r.ranks.size(); ++k) ranks << (k ? "," : "") << r.ranks[k];
    csv.row(r.level, block, r.dim, ranks.str());
    if (r.level == 0) out << "rankprobe: root " << block << " dim=" << r.dim << " ranks=" << ranks.str() << '\n';
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const CommandOptions& options, std::ostream& out) {
  RunLog log(options.out_dir, "verify");
  SolverState state = build_for(cfg, cfg.levels, cfg.n_gauss, options);
  log.note("build");
  if (cfg.corrupt_leaf > 0) corrupt(state, cfg.corrupt_leaf);
  const QuadTree& tree = *state.tree;
  const Solution sol = solve(state, state.spec.data);

  struct Check {
    std::string name;
    double value;
    double threshold;
    bool pass;
  };
  std::vector<Check> checks;
  auto at_most = [&](const std::string& name, double value, double threshold) {
    checks.push_back({name, value, threshold, value <= threshold});
  };

  if (tree.levels() <= cfg.flat_max_levels) {
    const CrossPathReport cp = cross_path(state, sol, state.spec.data);
    at_most("cross_path_relative_difference", cp.max_relative_difference, cfg.cross_path_tolerance);
    at_most("flat_blocks_per_row", cp.max_blocks_per_row, 7);
    log.note("cross_path");
  } else {
    out << "verify: cross-path check skipped (levels " << tree.levels() << " > flat_max_levels "
        << cfg.flat_max_levels << ")\n";
  }

  const Solution companion = solve(state, cfg.companion_data());
  const GreenReport green = green_identity(state, sol, companion);
  at_most("green_identity_leaf", green.worst_leaf, cfg.green_tolerance);
  at_most("green_identity_root", green.root, cfg.green_tolerance);

  const SolverState other = rebuild_merges(state, BuildOptions{options.threads, MergeOrder::vertical_first});
  const double order_diff = (other.root_op().matrix - state.root_op().matrix).norm() / state.root_op().matrix.norm();
  at_most("merge_order_relative_difference", order_diff, cfg.merge_order_tolerance);
  log.note("merge_order");

  if (cfg.fd_grids[0] % tree.leaves_per_side() != 0)
    throw ConfigError("config: verify.fd_grids must be multiples of the leaves per side");
  const FdSolution coarse = fd_solve(state.spec.a, state.spec.b, state.spec.data, tree.root_square(), cfg.fd_grids[0]);
  const FdSolution fine = fd_solve(state.spec.a, state.spec.b, state.spec.data, tree.root_square(), cfg.fd_grids[1]);
  const FdComparison fd = compare_with_fd(tree, sol, coarse, fine);
  at_most("fd_oracle_difference", fd.max_difference, cfg.fd_band_factor * fd.band);
  log.note("fd_oracle");

  CsvWriter csv(options.out_dir / "verify.csv", cfg, "verify", "check,value,threshold,status");
  int failures = 0;
  for (const Check& c : checks) {
    csv.row(c.name, fmt(c.value), fmt(c.threshold), c.pass ? "pass" : "fail");
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " " << fmt_short(c.value) << " <= " << fmt_short(c.threshold) << '\n';
    failures += c.pass ? 0 : 1;
  }
  if (failures > 0) {
    out << "verify: " << failures << " check(s) failed:";
    for (const Check& c : checks)
      if (!c.pass) out << ' ' << c.name;
    out << '\n';
    return kExitFailure;
  }
  out << "verify: all " << checks.size() << " checks passed\n";
  return kExitOk;
}

int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& options,
                std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    const ProblemSpec spec = cfg.problem();
    spec.validate(Square{Point{0.0, 0.0}, 1.0}, cfg.enlargement / (1 << cfg.levels));
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitConfig;
  } catch (const DegenerateProblemError& e) {
    err << "degenerate problem: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    std::filesystem::create_directories(options.out_dir);
    if (name == "solve") return cmd_solve(cfg, options, out);
    if (name == "converge") return cmd_converge(cfg, options, out);
    if (name == "scaling") return cmd_scaling(cfg, options, out);
    if (name == "rankprobe") return cmd_rankprobe(cfg, options, out);
    if (name == "verify") return cmd_verify(cfg, options, out);
    err << "unknown command '" << name << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace hps::app
