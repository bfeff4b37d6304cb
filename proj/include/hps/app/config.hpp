#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hps/oracle.hpp"
#include "hps/problem.hpp"

namespace hps::app {

/// Invalid or unreadable configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a run needs, read from an INI file with sections [problem],
/// [discretization], [converge], [scaling], [rankprobe], [verify], [run], [testing].
struct RunConfig {
  // [problem]
  std::string a_preset = "constant";  // constant | bump
  double a_value = 1.0;
  double bump_alpha = 0.5;
  double bump_width = 0.3;
  double bump_center_x = 0.5;
  double bump_center_y = 0.5;
  std::string b_preset = "constant";  // constant | oscillatory | zero
  double kappa = 1.0;                 // b = kappa^2 (times the oscillation for oscillatory)
  double oscillation_beta = 0.5;
  std::string data_preset = "cosh_x";  // cosh_x | exp_y | plane_wave | radial | zero
  double data_kappa = 1.0;
  double data_theta_deg = 30.0;
  double source_x = -1.5;
  double source_y = 0.5;

  // [discretization]
  int levels = 2;
  int n_gauss = 10;
  double epsilon = 1e-10;
  int n_samp = 0;
  double enlargement = 2.0;
  int p_patch = 0;
  double fit_tolerance = 1e-3;

  // [converge]
  std::vector<int> converge_n_gauss = {4, 6, 8, 10};
  // [scaling]
  std::vector<int> scaling_levels = {2, 3, 4, 5};
  // [rankprobe]
  std::vector<double> rank_cutoffs = {1e-6, 1e-8, 1e-10};
  // [verify]
  std::vector<int> fd_grids = {128, 256};
  int flat_max_levels = 3;
  double cross_path_tolerance = 1e-9;
  double green_tolerance = 1e-8;
  double merge_order_tolerance = 1e-8;
  double fd_band_factor = 5.0;

  // [run]
  int threads = 1;
  std::string out_dir = "out";

  // [testing]
  int corrupt_leaf = 0;  // > 0 perturbs that leaf's operator after the build

  /// Problem with the configured coefficients, data and knobs.
  ProblemSpec problem() const;
  /// Closed-form family behind the data preset (none for zero data).
  std::optional<AnalyticSolution> analytic_family() const;
  /// Closed-form solution when the configured problem has one.
  std::optional<AnalyticSolution> analytic() const;
  /// Second, independent flux field with the same coefficients (for reciprocity checks).
  NeumannData companion_data() const;
  /// Single-line key=value record of every field, in a fixed order.
  std::string describe() const;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Range and registry checks; throws ConfigError.
void validate(const RunConfig& cfg);

const std::vector<std::string>& a_presets();
const std::vector<std::string>& b_presets();
const std::vector<std::string>& data_presets();

}  // namespace hps::app
