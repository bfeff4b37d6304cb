#pragma once

#include <memory>

#include "hps/analysis.hpp"
#include "hps/leafop.hpp"
#include "hps/patch.hpp"

namespace hps::testing {

inline std::shared_ptr<const QuadTree> unit_tree(int levels, int n_gauss) {
  return std::make_shared<const QuadTree>(build_tree(Square{Point{0.0, 0.0}, 1.0}, levels, gauss_legendre(n_gauss)));
}

inline ProblemSpec spec_for(const AnalyticSolution& s, int n_gauss) {
  ProblemSpec spec = s.problem();
  spec.n_gauss = n_gauss;
  return spec;
}

/// Outward normal derivative of an analytic solution, for patch boundary data.
inline BoundaryFlux normal_flux(const AnalyticSolution& s) {
  return [g = s.grad](const BoundaryPoint& bp) {
    const Point d = g(bp.x);
    return d.x * bp.normal.x + d.y * bp.normal.y;
  };
}

}  // namespace hps::testing
