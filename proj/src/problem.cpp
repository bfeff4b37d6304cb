#include "hps/problem.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hps/errors.hpp"

namespace hps {

ScalarField constant_field(double c) {
  std::ostringstream name;
  name << "constant(" << c << ")";
  return {name.str(), [c](Point) { return c; }};
}

ScalarField bump_field(double alpha, double width, Point center) {
  if (!(width > 0.0)) throw std::invalid_argument("bump_field: width must be > 0");
  std::ostringstream name;
  name << "bump(alpha=" << alpha << ",width=" << width << ")";
  return {name.str(), [=](Point p) {
            const double dx = p.x - center.x, dy = p.y - center.y;
            return 1.0 + alpha * std::exp(-(dx * dx + dy * dy) / (width * width));
          }};
}

ScalarField oscillatory_field(double kappa, double beta) {
  if (!(beta > -1.0)) throw std::invalid_argument("oscillatory_field: beta must be > -1");
  std::ostringstream name;
  name << "oscillatory(kappa=" << kappa << ",beta=" << beta << ")";
  const double k2 = kappa * kappa;
  return {name.str(), [=](Point p) {
            using std::numbers::pi;
            return k2 * (1.0 + beta * std::sin(pi * p.x) * std::sin(pi * p.y));
          }};
}

NeumannData zero_data() {
  return {"zero", [](Point, Orientation) { return 0.0; }};
}

void ProblemSpec::validate(const Square& domain, double margin) const {
  if (n_gauss < 1) throw std::invalid_argument("n_gauss must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(enlargement > 1.0)) throw std::invalid_argument("patch enlargement must be > 1");
  if (samples() < 1) throw std::invalid_argument("n_samp must be >= 1");
  if (!a.value || !b.value || !data.flux) throw std::invalid_argument("problem fields are not set");

  constexpr int kSamples = 64;
  const double lo_x = domain.corner.x - margin, lo_y = domain.corner.y - margin;
  const double span = domain.side + 2.0 * margin;
  double a_min = INFINITY, b_min = INFINITY;
  for (int i = 0; i <= kSamples; ++i) {
    for (int j = 0; j <= kSamples; ++j) {
      const Point p{lo_x + span * i / kSamples, lo_y + span * j / kSamples};
      a_min = std::min(a_min, a(p));
      b_min = std::min(b_min, b(p));
    }
  }
  if (!(a_min > 0.0)) {
    std::ostringstream msg;
    msg << "coefficient a = " << a.name << " is not positive (min " << a_min << ")";
    throw DegenerateProblemError(msg.str());
  }
  if (!(b_min > 0.0)) {
    std::ostringstream msg;
    msg << "coefficient b = " << b.name << " must be strictly positive (min " << b_min
        << "); the Neumann problem has no unique solution";
    throw DegenerateProblemError(msg.str());
  }
}

}  // namespace hps
