#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "hps/quad.hpp"

using namespace hps;

TEST_CASE("gauss_legendre two-point rule is +-1/sqrt(3) with unit weights") {
  const GaussRule r = gauss_legendre(2);
  CHECK(r.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(1.0));
  CHECK(r.weights[1] == doctest::Approx(1.0));
}

TEST_CASE("gauss_legendre integrates polynomials up to degree 2n-1 exactly") {
  for (int n = 1; n <= 24; ++n) {
    const GaussRule r = gauss_legendre(n);
    REQUIRE(static_cast<int>(r.nodes.size()) == n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k) sum += r.weights[k] * std::pow(r.nodes[k], d);
      const double exact = d % 2 == 1 ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(sum - exact) <= 1e-14);
    }
  }
}

TEST_CASE("gauss_legendre nodes are sorted, symmetric and interior") {
  for (int n : {3, 10, 17}) {
    const GaussRule r = gauss_legendre(n);
    for (int k = 0; k < n; ++k) {
      CHECK(r.nodes[k] > -1.0);
      CHECK(r.nodes[k] < 1.0);
      CHECK(r.nodes[k] == doctest::Approx(-r.nodes[n - 1 - k]).epsilon(1e-15));
      if (k > 0) CHECK(r.nodes[k] > r.nodes[k - 1]);
    }
    CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("map_to_segment scales nodes onto the segment") {
  const GaussRule r = gauss_legendre(4);
  const auto pts = map_to_segment(r, Point{0.0, 1.0}, Point{0.5, 1.0});
  for (std::size_t k = 0; k < pts.size(); ++k) {
    CHECK(pts[k].y == 1.0);
    CHECK(pts[k].x == doctest::Approx(0.25 + 0.25 * r.nodes[k]));
  }
  CHECK_THROWS_AS(map_to_segment(r, Point{0.2, 0.2}, Point{0.2, 0.2}), std::invalid_argument);
}

TEST_CASE("interp_matrix reproduces polynomials of degree below the node count") {
  const GaussRule r = gauss_legendre(8);
  const std::vector<double> targets = {-1.0, -0.3, 0.0, 0.77, 1.0};
  const Eigen::MatrixXd m = interp_matrix(r, targets);
  Eigen::VectorXd f(8);
  for (int k = 0; k < 8; ++k) f[k] = std::pow(r.nodes[k], 7) - 2.0 * r.nodes[k];
  const Eigen::VectorXd g = m * f;
  for (std::size_t k = 0; k < targets.size(); ++k)
    CHECK(g[static_cast<Eigen::Index>(k)] == doctest::Approx(std::pow(targets[k], 7) - 2.0 * targets[k]).epsilon(1e-13));
  // Targets on nodes select the node value.
  const std::vector<double> on = {r.nodes[3]};
  CHECK((interp_matrix(r, on) * f)(0) == doctest::Approx(f[3]));
}
