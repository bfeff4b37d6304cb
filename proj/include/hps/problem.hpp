#pragma once

#include <functional>
#include <string>

#include "hps/geom.hpp"

namespace hps {

/// Named scalar field defined on the whole plane.
struct ScalarField {
  std::string name;
  std::function<double(Point)> value;

  double operator()(Point p) const { return value(p); }
};

/// Coordinate-direction flux data: d/dy on horizontal edges, d/dx on vertical edges.
/// This is NOT the outward normal derivative; south and west sides of Omega carry
/// the negated outward normal derivative.
struct NeumannData {
  std::string name;
  std::function<double(Point, Orientation)> flux;

  double operator()(Point p, Orientation o) const { return flux(p, o); }
};

ScalarField constant_field(double c);
/// 1 + alpha * exp(-|x - center|^2 / width^2)
ScalarField bump_field(double alpha, double width, Point center);
/// kappa^2 (1 + beta sin(pi x) sin(pi y)); beta > -1 keeps it positive.
ScalarField oscillatory_field(double kappa, double beta);

NeumannData zero_data();

/// Problem  -div(a grad phi) + b phi = 0  with Neumann data, plus discretization knobs.
struct ProblemSpec {
  ScalarField a = constant_field(1.0);
  ScalarField b = constant_field(1.0);
  NeumannData data = zero_data();
  double epsilon = 1e-10;   // relative SVD cutoff for leaf fitting
  int n_gauss = 10;         // nodes per leaf edge
  int n_samp = 0;           // 0 selects 6 * n_gauss
  double enlargement = 2.0; // patch radius / leaf half-diagonal
  int p_patch = 0;          // 0 selects 2 * n_gauss + 8
  double fit_tolerance = 1e-3;

  int samples() const { return n_samp > 0 ? n_samp : 6 * n_gauss; }
  int patch_order() const { return p_patch > 0 ? p_patch : 2 * n_gauss + 8; }

  /// Checks a > 0 and b > 0 by dense sampling over `domain` grown by `margin` on
  /// each side. Throws DegenerateProblemError (b <= 0) or std::invalid_argument.
  void validate(const Square& domain, double margin) const;
};

}  // namespace hps
