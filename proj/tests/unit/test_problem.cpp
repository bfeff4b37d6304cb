#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hps/errors.hpp"
#include "hps/problem.hpp"

using namespace hps;

TEST_CASE("preset fields") {
  CHECK(constant_field(2.5)(Point{7, -3}) == 2.5);
  const ScalarField bump = bump_field(0.5, 0.3, Point{0.5, 0.5});
  CHECK(bump(Point{0.5, 0.5}) == doctest::Approx(1.5));
  CHECK(bump(Point{5.0, 5.0}) == doctest::Approx(1.0));
  const ScalarField osc = oscillatory_field(2.0, 0.5);
  CHECK(osc(Point{0.5, 0.5}) == doctest::Approx(6.0));
  CHECK(osc(Point{-0.5, 0.5}) == doctest::Approx(2.0));
  CHECK(zero_data()(Point{0.3, 0.1}, Orientation::vertical) == 0.0);
}

TEST_CASE("default knobs derive from n_gauss") {
  ProblemSpec spec;
  spec.n_gauss = 7;
  CHECK(spec.samples() == 42);
  CHECK(spec.patch_order() == 22);
  spec.n_samp = 50;
  CHECK(spec.samples() == 50);
}

TEST_CASE("validation rejects degenerate or invalid problems") {
  const Square unit{Point{0, 0}, 1.0};
  ProblemSpec spec;
  CHECK_NOTHROW(spec.validate(unit, 0.5));
  spec.b = ScalarField{"zero", [](Point) { return 0.0; }};
  CHECK_THROWS_AS(spec.validate(unit, 0.5), DegenerateProblemError);
  try {
    spec.validate(unit, 0.5);
  } catch (const DegenerateProblemError& e) {
    CHECK(std::string(e.what()).find("strictly positive") != std::string::npos);
  }
  spec = ProblemSpec{};
  spec.a = ScalarField{"negative", [](Point p) { return p.x - 0.5; }};
  CHECK_THROWS_AS(spec.validate(unit, 0.0), DegenerateProblemError);
  spec = ProblemSpec{};
  spec.enlargement = 0.9;
  CHECK_THROWS_AS(spec.validate(unit, 0.5), std::invalid_argument);
  spec = ProblemSpec{};
  spec.epsilon = 0.0;
  CHECK_THROWS_AS(spec.validate(unit, 0.5), std::invalid_argument);
}
