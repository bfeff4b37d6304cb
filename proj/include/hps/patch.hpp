#pragma once

#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hps/flops.hpp"
#include "hps/geom.hpp"
#include "hps/problem.hpp"

namespace hps {

/// Circular patch. Collocation is polar: Chebyshev across the diameter, Fourier in angle.
struct DiskPatch {
  Point center;
  double radius = 1.0;
};

/// Square patch. Collocation is a tensor Chebyshev-Lobatto grid.
struct SquarePatch {
  Square square;
};

using Patch = std::variant<DiskPatch, SquarePatch>;

double perimeter(const Patch& patch);
bool patch_contains(const Patch& patch, Point p, double tol = 1e-12);
std::string describe(const Patch& patch);

/// A point on the patch boundary with its outward unit normal and arclength
/// (counter-clockwise; from angle 0 on a disk, from the lower-left corner on a square).
struct BoundaryPoint {
  Point x;
  Point normal;
  double arclength = 0.0;
};

/// Outward normal derivative prescribed on the patch boundary.
using BoundaryFlux = std::function<double(const BoundaryPoint&)>;

enum class FieldComponent { value, dx, dy };

/// Spectral collocation for -div(a grad phi) + b phi = 0 with Neumann data on a patch.
/// The collocation matrix is factored once; any number of flux vectors can then be solved.
class PatchSolver {
 public:
  /// `order` is the number of Chebyshev points across the patch (rounded up to even on
  /// a disk). `angular` sets the Fourier points on a disk (0 selects 2 * order).
  /// Throws DegenerateProblemError when the condition estimate exceeds 1e13.
  PatchSolver(const ScalarField& a, const ScalarField& b, const Patch& patch, int order,
              int angular = 0, FlopCounter* flops = nullptr);
  ~PatchSolver();
  PatchSolver(PatchSolver&&) noexcept;
  PatchSolver& operator=(PatchSolver&&) noexcept;

  const Patch& patch() const;
  int unknowns() const;
  const std::vector<Point>& nodes() const;
  double condition_estimate() const;

  /// Grid values, one column per flux.
  Eigen::MatrixXd solve(std::span<const BoundaryFlux> fluxes, FlopCounter* flops = nullptr) const;

  /// Rows map grid values to the requested component at each point.
  Eigen::MatrixXd evaluation_matrix(std::span<const Point> points, FieldComponent c) const;

  /// max |L phi| over interior collocation nodes, relative to max(|b phi|, |a| |phi|/h^2).
  double interior_residual(const Eigen::VectorXd& grid) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One solved patch problem; evaluates phi and grad phi anywhere in the patch.
class PatchSolution {
 public:
  PatchSolution(std::shared_ptr<const PatchSolver> solver, Eigen::VectorXd grid)
      : solver_(std::move(solver)), grid_(std::move(grid)) {}

  double value(Point p) const;
  Point gradient(Point p) const;
  Eigen::VectorXd values(std::span<const Point> points) const;
  const Eigen::VectorXd& grid_values() const { return grid_; }
  const PatchSolver& solver() const { return *solver_; }

 private:
  std::shared_ptr<const PatchSolver> solver_;
  Eigen::VectorXd grid_;
};

/// Solves one patch problem with the problem's coefficients.
PatchSolution solve_patch(const ProblemSpec& spec, const Patch& patch,
                          const BoundaryFlux& flux, int p_patch);

}  // namespace hps
