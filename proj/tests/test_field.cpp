#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "fringe/field.hpp"
#include "fringe/rng.hpp"

#include "support.hpp"

using fringe::ScalarField;
using testsup::kPi;

TEST_SUITE("field") {

TEST_CASE("field_mean on simple inputs") {
  CHECK(fringe::field_mean(ScalarField(4, 4, 0.5)) == doctest::Approx(0.5));

  ScalarField pm = ScalarField::from_samples(2, 1, {-1.0, 1.0});
  CHECK(fringe::field_mean(pm) == doctest::Approx(0.0));

  std::vector<double> v;
  for (int i = 1; i <= 9; ++i) v.push_back(i);
  CHECK(fringe::field_mean(ScalarField::from_samples(3, 3, std::move(v))) ==
        doctest::Approx(5.0));
}

TEST_CASE("field_mean shifts exactly with a constant") {
  const ScalarField f = testsup::noise_field(37, 23, 42);
  const double m = fringe::field_mean(f);
  for (double c : {0.5, -3.0, 1e4}) {
    const double shifted = fringe::field_mean(fringe::scale_offset(f, 1.0, c));
    CHECK(shifted == doctest::Approx(m + c).epsilon(1e-12));
  }
}

TEST_CASE("field_stats orders min, mean, max") {
  const ScalarField f = testsup::noise_field(31, 17, 7, 2.0, 0.3);
  const fringe::FieldStats s = fringe::field_stats(f);
  CHECK(s.min <= s.mean);
  CHECK(s.mean <= s.max);
  CHECK(s.stddev >= 0.0);
  double mn = f.data()[0], mx = f.data()[0];
  for (std::size_t i = 0; i < f.size(); ++i) {
    mn = std::min(mn, f.data()[i]);
    mx = std::max(mx, f.data()[i]);
  }
  CHECK(s.min == mn);
  CHECK(s.max == mx);
}

TEST_CASE("wrap_to_pi hits the known angles") {
  CHECK(fringe::wrap_to_pi(0.0) == 0.0);
  CHECK(fringe::wrap_to_pi(1.5 * kPi) == doctest::Approx(-0.5 * kPi).epsilon(1e-15));
  CHECK(fringe::wrap_to_pi(-kPi) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(fringe::wrap_to_pi(kPi) == doctest::Approx(kPi).epsilon(1e-15));
}

TEST_CASE("wrap_to_pi is 2-pi periodic and lands in (-pi, pi]") {
  for (int trial = 0; trial < 200; ++trial) {
    const double v = 8.0 * (fringe::rng::uniform_at(5, trial) - 0.5);
    const double base = fringe::wrap_to_pi(v);
    CHECK(base > -kPi);
    CHECK(base <= kPi);
    for (int k = -10; k <= 10; ++k) {
      CHECK(fringe::wrap_to_pi(v + 2.0 * kPi * k) == doctest::Approx(base).epsilon(1e-12));
    }
  }
}

TEST_CASE("construction rejects bad shapes and non-finite samples") {
  CHECK_THROWS_AS(ScalarField(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(ScalarField(4, -1), std::invalid_argument);
  CHECK_THROWS_AS(ScalarField::from_samples(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(
      ScalarField::from_samples(2, 1, {1.0, std::numeric_limits<double>::quiet_NaN()}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      ScalarField::from_samples(2, 1, {std::numeric_limits<double>::infinity(), 0.0}),
      std::invalid_argument);
}

TEST_CASE("row-major layout and element ops") {
  ScalarField f(3, 2);
  f.at(0, 0) = 1.0;
  f.at(0, 2) = 3.0;
  f.at(1, 0) = 4.0;
  CHECK(f.data()[0] == 1.0);
  CHECK(f.data()[2] == 3.0);
  CHECK(f.data()[3] == 4.0);
  CHECK(f.row(1)[0] == 4.0);

  const ScalarField g(3, 2, 10.0);
  const ScalarField s = fringe::add(f, g);
  CHECK(s.at(0, 0) == 11.0);
  const ScalarField d = fringe::sub(g, f);
  CHECK(d.at(1, 0) == 6.0);
  CHECK_THROWS_AS(fringe::add(f, ScalarField(2, 3)), std::invalid_argument);
}

TEST_CASE("complex field magnitude and angle stay finite") {
  fringe::ComplexField z(5, 4);
  for (std::size_t i = 0; i < z.size(); ++i) {
    z.re()[i] = std::cos(0.3 * static_cast<double>(i));
    z.im()[i] = std::sin(0.3 * static_cast<double>(i));
  }
  const ScalarField mag = z.magnitude();
  const ScalarField ang = z.angle();
  for (std::size_t i = 0; i < mag.size(); ++i) {
    CHECK(mag.data()[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ang.data()[i] > -kPi - 1e-15);
    CHECK(ang.data()[i] <= kPi + 1e-15);
  }
}

}  // TEST_SUITE
