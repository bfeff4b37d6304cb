#include <memory>
#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hps/analysis.hpp"
#include "hps/app/commands.hpp"
#include "hps/errors.hpp"

namespace py = pybind11;
using namespace hps;

namespace {

std::shared_ptr<const QuadTree> make_tree(int levels, int n_gauss, double side) {
  return std::make_shared<const QuadTree>(build_tree(Square{Point{0.0, 0.0}, side}, levels, gauss_legendre(n_gauss)));
}

struct PySolver {
  SolverState state;
};

}  // namespace

PYBIND11_MODULE(_hps, m) {
  m.doc() = "Hierarchical Neumann-to-Dirichlet direct solver";

  py::register_exception<DegenerateProblemError>(m, "DegenerateProblemError", PyExc_ValueError);
  py::register_exception<InsufficientSamplingError>(m, "InsufficientSamplingError", PyExc_RuntimeError);
  py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_RuntimeError);
  py::register_exception<MergeSingularityError>(m, "MergeSingularityError", PyExc_RuntimeError);

  m.def("gauss_legendre", [](int n) {
    const GaussRule r = gauss_legendre(n);
    return py::make_tuple(r.nodes, r.weights);
  }, py::arg("n"), "Gauss-Legendre nodes and weights on [-1, 1].");

  py::class_<ScalarField>(m, "ScalarField")
      .def(py::init([](std::string name, std::function<double(double, double)> f) {
             return ScalarField{std::move(name), [f](Point p) { return f(p.x, p.y); }};
           }), py::arg("name"), py::arg("fn"))
      .def_readonly("name", &ScalarField::name)
      .def("__call__", [](const ScalarField& s, double x, double y) { return s(Point{x, y}); });
  m.def("constant_field", &constant_field, py::arg("value"));
  m.def("bump_field", [](double alpha, double width, double cx, double cy) { return bump_field(alpha, width, Point{cx, cy}); },
        py::arg("alpha"), py::arg("width"), py::arg("cx") = 0.5, py::arg("cy") = 0.5);
  m.def("oscillatory_field", &oscillatory_field, py::arg("kappa"), py::arg("beta"));

  py::class_<NeumannData>(m, "NeumannData")
      .def(py::init([](std::string name, std::function<double(double, double, bool)> f) {
             return NeumannData{std::move(name), [f](Point p, Orientation o) { return f(p.x, p.y, o == Orientation::vertical); }};
           }), py::arg("name"), py::arg("fn"),
           "fn(x, y, vertical) returns d/dx on vertical edges and d/dy on horizontal ones.")
      .def_readonly("name", &NeumannData::name);
  m.def("zero_data", &zero_data);

  py::class_<ProblemSpec>(m, "Problem")
      .def(py::init<>())
      .def_readwrite("a", &ProblemSpec::a)
      .def_readwrite("b", &ProblemSpec::b)
      .def_readwrite("data", &ProblemSpec::data)
      .def_readwrite("epsilon", &ProblemSpec::epsilon)
      .def_readwrite("n_gauss", &ProblemSpec::n_gauss)
      .def_readwrite("n_samp", &ProblemSpec::n_samp)
      .def_readwrite("enlargement", &ProblemSpec::enlargement)
      .def_readwrite("p_patch", &ProblemSpec::p_patch)
      .def_readwrite("fit_tolerance", &ProblemSpec::fit_tolerance);

  py::class_<AnalyticSolution>(m, "AnalyticSolution")
      .def_readonly("name", &AnalyticSolution::name)
      .def_readonly("kappa", &AnalyticSolution::kappa)
      .def("phi", [](const AnalyticSolution& s, double x, double y) { return s.phi(Point{x, y}); })
      .def("grad", [](const AnalyticSolution& s, double x, double y) {
        const Point g = s.grad(Point{x, y});
        return py::make_tuple(g.x, g.y);
      })
      .def("data", &AnalyticSolution::data)
      .def("problem", &AnalyticSolution::problem);
  m.def("analytic_suite", &analytic_suite);
  m.def("cosh_x_solution", &cosh_x_solution, py::arg("kappa") = 1.0);
  m.def("exp_y_solution", &exp_y_solution, py::arg("kappa") = 1.0);
  m.def("plane_wave_solution", &plane_wave_solution, py::arg("kappa"), py::arg("theta"));
  m.def("radial_solution", [](double kappa, double sx, double sy) { return radial_solution(kappa, Point{sx, sy}); },
        py::arg("kappa"), py::arg("sx"), py::arg("sy"));

  py::class_<QuadTree, std::shared_ptr<QuadTree>>(m, "Tree")
      .def(py::init([](int levels, int n_gauss, double side) {
             return std::make_shared<QuadTree>(build_tree(Square{Point{0.0, 0.0}, side}, levels, gauss_legendre(n_gauss)));
           }), py::arg("levels"), py::arg("n_gauss"), py::arg("side") = 1.0)
      .def_property_readonly("levels", &QuadTree::levels)
      .def_property_readonly("num_edges", &QuadTree::num_edges)
      .def_property_readonly("num_interior_edges", &QuadTree::num_interior_edges)
      .def_property_readonly("num_exterior_edges", &QuadTree::num_exterior_edges)
      .def_property_readonly("total_nodes", &QuadTree::total_nodes)
      .def("leaves", &QuadTree::leaves)
      .def("edge_nodes", [](const QuadTree& t, int id) {
        Eigen::MatrixX2d out(static_cast<Eigen::Index>(t.edge(id).nodes.size()), 2);
        for (std::size_t q = 0; q < t.edge(id).nodes.size(); ++q) {
          out(static_cast<Eigen::Index>(q), 0) = t.edge(id).nodes[q].x;
          out(static_cast<Eigen::Index>(q), 1) = t.edge(id).nodes[q].y;
        }
        return out;
      }, py::arg("edge_id"));

  py::class_<Solution>(m, "Solution")
      .def_readonly("edge_potential", &Solution::edge_potential)
      .def_readonly("edge_flux", &Solution::edge_flux)
      .def_readonly("flops", &Solution::flops);

  py::class_<PySolver>(m, "Solver")
      .def(py::init([](const ProblemSpec& spec, int levels, int threads) {
             py::gil_scoped_release release;
             ProblemSpec s = spec;
             return PySolver{build(s, make_tree(levels, s.n_gauss, 1.0), BuildOptions{threads})};
           }), py::arg("problem"), py::arg("levels"), py::arg("threads") = 1,
           "Builds every leaf operator and merges up to the root of the unit square.")
      .def_property_readonly("tree", [](const PySolver& s) { return std::const_pointer_cast<QuadTree>(s.state.tree); })
      .def_property_readonly("leaf_flops", [](const PySolver& s) { return s.state.leaf_flops; })
      .def_property_readonly("merge_flops", [](const PySolver& s) { return s.state.merge_flops; })
      .def("operator", [](const PySolver& s, int box_id) { return s.state.op(box_id).matrix; }, py::arg("box_id"))
      .def("root_operator", [](const PySolver& s) { return s.state.root_op().matrix; })
      .def("solve", [](const PySolver& s, const NeumannData& d) {
        py::gil_scoped_release release;
        return solve(s.state, d);
      }, py::arg("data"))
      .def("max_edge_error", [](const PySolver& s, const Solution& sol, const AnalyticSolution& a) {
        return max_edge_error(*s.state.tree, sol, a.phi);
      })
      .def("evaluate", [](const PySolver& s, const Solution& sol, int leaf, const Eigen::MatrixX2d& pts) {
        std::vector<Point> p;
        for (Eigen::Index k = 0; k < pts.rows(); ++k) p.push_back(Point{pts(k, 0), pts(k, 1)});
        return evaluate_interior(s.state, sol, leaf, p);
      }, py::arg("solution"), py::arg("leaf_id"), py::arg("points"))
      .def("rank_probe", [](const PySolver& s) {
        py::list rows;
        for (const RankRow& r : rank_probe(s.state))
          rows.append(py::dict(py::arg("level") = r.level, py::arg("box_id") = r.box_id,
                               py::arg("block") = std::string(side_name(r.rows)) + "-" + side_name(r.cols),
                               py::arg("dim") = r.dim, py::arg("ranks") = r.ranks));
        return rows;
      });

  m.def("cross_path", [](const PySolver& s, const Solution& sol, const NeumannData& d) {
    const CrossPathReport r = cross_path(s.state, sol, d);
    return py::dict(py::arg("max_relative_difference") = r.max_relative_difference,
                    py::arg("max_blocks_per_row") = r.max_blocks_per_row,
                    py::arg("interior_edges") = r.interior_edges, py::arg("exterior_edges") = r.exterior_edges);
  }, py::arg("solver"), py::arg("solution"), py::arg("data"));

  m.def("fd_solve", [](const ScalarField& a, const ScalarField& b, const NeumannData& d, int grid_n) {
    const FdSolution fd = fd_solve(a, b, d, Square{Point{0.0, 0.0}, 1.0}, grid_n);
    Eigen::MatrixXd grid(grid_n + 1, grid_n + 1);
    for (int j = 0; j <= grid_n; ++j)
      for (int i = 0; i <= grid_n; ++i) grid(j, i) = fd.at(i, j);
    return grid;
  }, py::arg("a"), py::arg("b"), py::arg("data"), py::arg("grid_n"),
     "Finite-difference nodal values on the unit square, indexed [j, i] (y, x).");

  m.def("run_command", [](const std::string& command, const std::string& config_path, const std::string& out_dir, int threads) -> py::tuple {
    app::RunConfig cfg;
    std::ostringstream out, err;
    try {
      if (!config_path.empty()) cfg = app::load_config(config_path);
    } catch (const app::ConfigError& e) {
      return py::make_tuple(app::kExitConfig, std::string(), std::string(e.what()));
    }
    int code = 0;
    {
      py::gil_scoped_release release;
      code = app::run_command(command, cfg, app::CommandOptions{out_dir, threads, 0}, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("command"), py::arg("config_path") = "", py::arg("out_dir") = "out", py::arg("threads") = 1,
     "Runs a CLI subcommand; returns (exit_code, stdout, stderr).");
}
