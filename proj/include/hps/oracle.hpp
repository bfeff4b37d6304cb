#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hps/geom.hpp"
#include "hps/problem.hpp"

namespace hps {

/// Closed-form solution of -div(a grad phi) + b phi = 0 with a = 1, b = kappa^2.
struct AnalyticSolution {
  std::string name;
  double kappa = 1.0;
  std::function<double(Point)> phi;
  std::function<Point(Point)> grad;

  ScalarField a() const { return constant_field(1.0); }
  ScalarField b() const { return constant_field(kappa * kappa); }
  /// Coordinate-direction flux data: d/dx on vertical edges, d/dy on horizontal ones.
  NeumannData data() const;
  /// Problem with this solution's coefficients and data, default discretization knobs.
  ProblemSpec problem() const;
};

AnalyticSolution cosh_x_solution(double kappa);
AnalyticSolution exp_y_solution(double kappa);
/// cosh(kappa (x cos theta + y sin theta)).
AnalyticSolution plane_wave_solution(double kappa, double theta);
/// K0(kappa |x - source|); the source must lie away from the region of use.
AnalyticSolution radial_solution(double kappa, Point source);

/// cosh(kx), e^{ky} for k in {1, 2}; rotated cosh for theta in {0, pi/6}; a radial
/// K0 kernel centered outside the unit square.
std::vector<AnalyticSolution> analytic_suite();

/// Max of |-lap phi + kappa^2 phi| / max(kappa^2 |phi|) over the points, with the
/// divergence of the closed-form gradient taken by an 8th-order central difference.
double pde_residual(const AnalyticSolution& s, const std::vector<Point>& points, double step = 1e-3);

/// Nodal solution of the second-order finite-difference discretization.
struct FdSolution {
  Square domain;
  int grid_n = 0;               // intervals per side; nodes are (grid_n + 1)^2
  Eigen::VectorXd phi;          // node (i, j) at index j * (grid_n + 1) + i

  double h() const { return domain.side / grid_n; }
  Point node(int i, int j) const { return domain.corner + Point{i * h(), j * h()}; }
  double at(int i, int j) const { return phi[j * (grid_n + 1) + i]; }
  /// Bilinear interpolation; throws std::invalid_argument outside the domain.
  double sample(Point p) const;
};

/// Conservative 5-point scheme with face-centred coefficients and ghost-point Neumann
/// closure, solved by sparse LU. Requires grid_n >= 16; singular systems throw
/// DegenerateProblemError.
FdSolution fd_solve(const ScalarField& a, const ScalarField& b, const NeumannData& data,
                    const Square& domain, int grid_n);

/// Two-grid Richardson extrapolation of a second-order quantity: (4 fine - coarse) / 3.
inline double richardson(double fine, double coarse) { return (4.0 * fine - coarse) / 3.0; }

}  // namespace hps
