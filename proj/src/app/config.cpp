#include "hps/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace hps::app {

namespace pt = boost::property_tree;

namespace {

template <class T>
void read(const pt::ptree& tree, const std::string& key, T& field) {
  const auto node = tree.get_optional<std::string>(key);
  if (!node) return;
  std::istringstream is(*node);
  T value{};
  is >> value;
  if (is.fail() || !(is >> std::ws).eof()) throw ConfigError("config: cannot parse " + key + " = '" + *node + "'");
  field = value;
}

template <>
void read(const pt::ptree& tree, const std::string& key, std::string& field) {
  if (const auto node = tree.get_optional<std::string>(key)) field = *node;
}

template <class T>
void read_list(const pt::ptree& tree, const std::string& key, std::vector<T>& field) {
  const auto node = tree.get_optional<std::string>(key);
  if (!node) return;
  std::vector<T> out;
  std::istringstream all(*node);
  std::string item;
  while (std::getline(all, item, ',')) {
    std::istringstream is(item);
    T value{};
    is >> value;
    if (is.fail() || !(is >> std::ws).eof()) throw ConfigError("config: cannot parse " + key + " entry '" + item + "'");
    out.push_back(value);
  }
  if (out.empty()) throw ConfigError("config: " + key + " is empty");
  field = std::move(out);
}

const std::vector<std::string> kSections = {"problem", "discretization", "converge", "scaling",
                                            "rankprobe", "verify", "run", "testing"};

// Shortest text that reads back to the same double.
std::string num(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}
std::string num(int x) { return std::to_string(x); }

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + num(v[k]);
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

const std::vector<std::string>& a_presets() {
  static const std::vector<std::string> p = {"constant", "bump"};
  return p;
}
const std::vector<std::string>& b_presets() {
  static const std::vector<std::string> p = {"constant", "oscillatory", "zero"};
  return p;
}
const std::vector<std::string>& data_presets() {
  static const std::vector<std::string> p = {"cosh_x", "exp_y", "plane_wave", "radial", "zero"};
  return p;
}

RunConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (!contains(kSections, section)) throw ConfigError("config: unknown section [" + section + "]");
    (void)body;
  }
  RunConfig c;
  const std::vector<std::pair<std::string, std::vector<std::string>>> known = {
      {"problem", {"a", "a_value", "bump_alpha", "bump_width", "bump_center_x", "bump_center_y", "b",
                   "kappa", "oscillation_beta", "data", "data_kappa", "data_theta_deg", "source_x",
                   "source_y"}},
      {"discretization", {"levels", "n_gauss", "epsilon", "n_samp", "enlargement", "p_patch", "fit_tolerance"}},
      {"converge", {"n_gauss"}},
      {"scaling", {"levels"}},
      {"rankprobe", {"cutoffs"}},
      {"verify", {"fd_grids", "flat_max_levels", "cross_path_tolerance", "green_tolerance",
                  "merge_order_tolerance", "fd_band_factor"}},
      {"run", {"threads", "out"}},
      {"testing", {"corrupt_leaf"}},
  };
  for (const auto& [section, keys] : known) {
    const auto sub = tree.get_child_optional(section);
    if (!sub) continue;
    for (const auto& [key, value] : *sub)
      if (!contains(keys, key)) throw ConfigError("config: unknown key " + section + "." + key);
  }

  read(tree, "problem.a", c.a_preset);
  read(tree, "problem.a_value", c.a_value);
  read(tree, "problem.bump_alpha", c.bump_alpha);
  read(tree, "problem.bump_width", c.bump_width);
  read(tree, "problem.bump_center_x", c.bump_center_x);
  read(tree, "problem.bump_center_y", c.bump_center_y);
  read(tree, "problem.b", c.b_preset);
  read(tree, "problem.kappa", c.kappa);
  c.data_kappa = c.kappa;
  read(tree, "problem.oscillation_beta", c.oscillation_beta);
  read(tree, "problem.data", c.data_preset);
  read(tree, "problem.data_kappa", c.data_kappa);
  read(tree, "problem.data_theta_deg", c.data_theta_deg);
  read(tree, "problem.source_x", c.source_x);
  read(tree, "problem.source_y", c.source_y);

  read(tree, "discretization.levels", c.levels);
  read(tree, "discretization.n_gauss", c.n_gauss);
  read(tree, "discretization.epsilon", c.epsilon);
  read(tree, "discretization.n_samp", c.n_samp);
  read(tree, "discretization.enlargement", c.enlargement);
  read(tree, "discretization.p_patch", c.p_patch);
  read(tree, "discretization.fit_tolerance", c.fit_tolerance);

  read_list(tree, "converge.n_gauss", c.converge_n_gauss);
  read_list(tree, "scaling.levels", c.scaling_levels);
  read_list(tree, "rankprobe.cutoffs", c.rank_cutoffs);
  read_list(tree, "verify.fd_grids", c.fd_grids);
  read(tree, "verify.flat_max_levels", c.flat_max_levels);
  read(tree, "verify.cross_path_tolerance", c.cross_path_tolerance);
  read(tree, "verify.green_tolerance", c.green_tolerance);
  read(tree, "verify.merge_order_tolerance", c.merge_order_tolerance);
  read(tree, "verify.fd_band_factor", c.fd_band_factor);

  read(tree, "run.threads", c.threads);
  read(tree, "run.out", c.out_dir);
  read(tree, "testing.corrupt_leaf", c.corrupt_leaf);

  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parse_config(in);
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError("config: " + m); };
  if (!contains(a_presets(), c.a_preset)) fail("unknown a preset '" + c.a_preset + "'");
  if (!contains(b_presets(), c.b_preset)) fail("unknown b preset '" + c.b_preset + "'");
  if (!contains(data_presets(), c.data_preset)) fail("unknown data preset '" + c.data_preset + "'");
  auto level_ok = [](int l) { return l >= 1 && l <= 7; };
  auto gauss_ok = [](int n) { return n >= 3 && n <= 24; };
  if (!level_ok(c.levels)) fail("levels must lie in [1, 7]");
  if (!gauss_ok(c.n_gauss)) fail("n_gauss must lie in [3, 24]");
  for (int n : c.converge_n_gauss)
    if (!gauss_ok(n)) fail("converge.n_gauss entries must lie in [3, 24]");
  for (int l : c.scaling_levels)
    if (!level_ok(l)) fail("scaling.levels entries must lie in [1, 7]");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) fail("epsilon must lie in (0, 1)");
  if (c.n_samp < 0 || c.p_patch < 0) fail("n_samp and p_patch must be >= 0");
  if (!(c.enlargement > 1.0)) fail("enlargement must exceed 1");
  if (!(c.fit_tolerance > 0.0)) fail("fit_tolerance must be positive");
  if (!(c.kappa > 0.0) && c.b_preset != "zero") fail("kappa must be positive");
  if (!(c.a_value > 0.0)) fail("a_value must be positive");
  if (!(c.bump_width > 0.0) || !(c.bump_alpha > -1.0)) fail("bump needs width > 0 and alpha > -1");
  if (!(c.oscillation_beta > -1.0)) fail("oscillation_beta must exceed -1");
  for (double cut : c.rank_cutoffs)
    if (!(cut > 0.0 && cut < 1.0)) fail("rank cutoffs must lie in (0, 1)");
  if (c.fd_grids.size() != 2 || c.fd_grids[1] != 2 * c.fd_grids[0] || c.fd_grids[0] < 16)
    fail("verify.fd_grids must be two grids g, 2g with g >= 16");
  if (c.flat_max_levels < 1) fail("verify.flat_max_levels must be >= 1");
  if (c.threads < 1) fail("threads must be >= 1");
  if (c.corrupt_leaf < 0) fail("testing.corrupt_leaf must be >= 0");
}

ProblemSpec RunConfig::problem() const {
  ProblemSpec spec;
  spec.a = a_preset == "bump" ? bump_field(bump_alpha, bump_width, Point{bump_center_x, bump_center_y})
                              : constant_field(a_value);
  if (b_preset == "oscillatory")
    spec.b = oscillatory_field(kappa, oscillation_beta);
  else if (b_preset == "zero")
    spec.b = ScalarField{"zero", [](Point) { return 0.0; }};
  else
    spec.b = constant_field(kappa * kappa);
  if (data_preset == "zero")
    spec.data = zero_data();
  else
    spec.data = analytic_family()->data();
  spec.epsilon = epsilon;
  spec.n_gauss = n_gauss;
  spec.n_samp = n_samp;
  spec.enlargement = enlargement;
  spec.p_patch = p_patch;
  spec.fit_tolerance = fit_tolerance;
  return spec;
}

std::optional<AnalyticSolution> RunConfig::analytic_family() const {
  if (data_preset == "cosh_x") return cosh_x_solution(data_kappa);
  if (data_preset == "exp_y") return exp_y_solution(data_kappa);
  if (data_preset == "plane_wave")
    return plane_wave_solution(data_kappa, data_theta_deg * std::numbers::pi / 180.0);
  if (data_preset == "radial") return radial_solution(data_kappa, Point{source_x, source_y});
  return std::nullopt;
}

std::optional<AnalyticSolution> RunConfig::analytic() const {
  if (data_preset == "zero")
    return AnalyticSolution{"zero", kappa, [](Point) { return 0.0; }, [](Point) { return Point{0.0, 0.0}; }};
  const bool unit_a = a_preset == "constant" && a_value == 1.0;
  const bool matching_b = b_preset == "constant" && data_kappa == kappa;
  if (!unit_a || !matching_b) return std::nullopt;
  return analytic_family();
}

NeumannData RunConfig::companion_data() const {
  const AnalyticSolution other = data_preset == "exp_y" ? cosh_x_solution(kappa) : exp_y_solution(kappa);
  return other.data();
}

std::string RunConfig::describe() const {
  std::ostringstream os;
  os << "a=" << a_preset << " a_value=" << num(a_value) << " bump_alpha=" << num(bump_alpha)
     << " bump_width=" << num(bump_width) << " bump_center=" << num(bump_center_x) << ","
     << num(bump_center_y) << " b=" << b_preset << " kappa=" << num(kappa)
     << " oscillation_beta=" << num(oscillation_beta) << " data=" << data_preset
     << " data_kappa=" << num(data_kappa) << " data_theta_deg=" << num(data_theta_deg)
     << " source=" << num(source_x) << "," << num(source_y) << " levels=" << levels
     << " n_gauss=" << n_gauss << " epsilon=" << num(epsilon) << " n_samp=" << n_samp
     << " enlargement=" << num(enlargement) << " p_patch=" << p_patch
     << " fit_tolerance=" << num(fit_tolerance) << " converge.n_gauss=" << join(converge_n_gauss)
     << " scaling.levels=" << join(scaling_levels) << " rankprobe.cutoffs=" << join(rank_cutoffs)
     << " verify.fd_grids=" << join(fd_grids) << " verify.flat_max_levels=" << flat_max_levels
     << " verify.cross_path_tolerance=" << num(cross_path_tolerance)
     << " verify.green_tolerance=" << num(green_tolerance)
     << " verify.merge_order_tolerance=" << num(merge_order_tolerance)
     << " verify.fd_band_factor=" << num(fd_band_factor) << " testing.corrupt_leaf=" << corrupt_leaf;
  return os.str();
}

}  // namespace hps::app
