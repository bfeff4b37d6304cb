#include "hps/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hps {

namespace {

// Returns P_n(t) and P_n'(t) via the three-term recurrence.
std::pair<double, double> legendre(int n, double t) {
  double p0 = 1.0;
  double p1 = t;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  if (n == 0) return {1.0, 0.0};
  const double dp = n * (t * p1 - p0) / (t * t - 1.0);
  return {p1, dp};
}

}  // namespace

GaussRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");

  GaussRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);

  const int half = (order + 1) / 2;
  for (int k = 0; k < half; ++k) {
    double t = std::cos(std::numbers::pi * (4.0 * k + 3.0) / (4.0 * order + 2.0));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre(order, t);
      dp = d;
      const double step = p / d;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    dp = legendre(order, t).second;
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);
    // k-th largest root; mirror it to keep the rule exactly symmetric.
    rule.nodes[order - 1 - k] = t;
    rule.nodes[k] = -t;
    rule.weights[order - 1 - k] = w;
    rule.weights[k] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

std::vector<Point> map_to_segment(const GaussRule& rule, Point p0, Point p1) {
  if (p0 == p1) throw std::invalid_argument("map_to_segment: coincident endpoints");
  const Point mid = 0.5 * (p0 + p1);
  const Point half = 0.5 * (p1 - p0);
  std::vector<Point> out;
  out.reserve(rule.nodes.size());
  for (double t : rule.nodes) out.push_back(mid + t * half);
  return out;
}

std::vector<double> barycentric_weights(std::span<const double> nodes) {
  const std::size_t n = nodes.size();
  std::vector<double> w(n, 1.0);
  // The factor 2 keeps products of node gaps near unity for nodes in [-1, 1].
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) w[j] /= 2.0 * (nodes[j] - nodes[k]);
  double wmax = 0.0;
  for (double v : w) wmax = std::max(wmax, std::abs(v));
  for (double& v : w) v /= wmax;
  return w;
}

Eigen::MatrixXd interp_matrix(std::span<const double> nodes,
                              std::span<const double> targets) {
  const auto w = barycentric_weights(nodes);
  const Eigen::Index n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(targets.size()), n);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double t = targets[i];
    Eigen::Index exact = -1;
    double denom = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = t - nodes[j];
      if (d == 0.0) {
        exact = j;
        break;
      }
      out(i, j) = w[j] / d;
      denom += out(i, j);
    }
    if (exact >= 0) {
      out.row(i).setZero();
      out(i, exact) = 1.0;
    } else {
      out.row(i) /= denom;
    }
  }
  return out;
}

Eigen::MatrixXd interp_matrix(const GaussRule& rule, std::span<const double> targets) {
  return interp_matrix(std::span<const double>(rule.nodes), targets);
}

}  // namespace hps
