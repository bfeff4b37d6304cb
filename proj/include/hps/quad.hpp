#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hps {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point, Point) = default;
};

/// Gauss-Legendre rule on [-1, 1]. Nodes are strictly increasing.
struct GaussRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on P_n from Chebyshev-like starting guesses; nodes to ~1e-15.
/// Throws std::invalid_argument for order < 1.
GaussRule gauss_legendre(int order);

/// Affine image of the rule's nodes on the segment [p0, p1], ordered from p0.
std::vector<Point> map_to_segment(const GaussRule& rule, Point p0, Point p1);

/// Second-kind barycentric weights for arbitrary distinct nodes, scaled to max |w| = 1.
std::vector<double> barycentric_weights(std::span<const double> nodes);

/// Lagrange interpolation matrix (targets x nodes) in barycentric form.
Eigen::MatrixXd interp_matrix(std::span<const double> nodes,
                              std::span<const double> targets);

/// Interpolation from the rule's nodes; targets are expected in [-1, 1].
Eigen::MatrixXd interp_matrix(const GaussRule& rule, std::span<const double> targets);

}  // namespace hps
