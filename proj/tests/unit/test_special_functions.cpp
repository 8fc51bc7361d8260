#include "dicke/errors.hpp"
#include "dicke/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace dicke;

namespace {

using std::numbers::pi;

bool close(Complex a, Complex b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

}  // namespace

TEST_CASE("complex Gamma against high-precision reference values") {
  // Frozen from mpmath at 30 digits.
  CHECK(close(complex_gamma({0.5, 3.7}), {0.00304851177560463, 0.006851209506739624}, 1e-12));
  CHECK(close(complex_gamma({-2.3, 1.1}), {0.01997735376367927, -0.088828834683559923}, 1e-12));
  CHECK(close(complex_gamma({7.25, -12.5}), {-0.24051323955924948, -0.085121242769532347}, 1e-12));
  CHECK(close(complex_gamma({0.5, -40.0}), {9.5295510494311588e-28, -8.7375682018384418e-28}, 1e-11));
  CHECK(close(complex_gamma(0.001), 999.42377248459545, 1e-12));
  CHECK(close(complex_gamma(-0.5), -3.5449077018110321, 1e-12));
  CHECK(close(complex_gamma(1.0), 1.0, 1e-14));
  CHECK(close(complex_gamma(0.5), std::sqrt(pi), 1e-14));
}

TEST_CASE("Gamma recurrence and reflection") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-6.0, 6.0);
  std::uniform_real_distribution<double> im(-50.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const Complex z{re(rng), im(rng)};
    CHECK(std::abs(complex_gamma(z + 1.0) / (z * complex_gamma(z)) - 1.0) <= 1e-10);
    const Complex nu{0.5, 0.1 * im(rng)};
    const Complex r = complex_gamma(nu) * complex_gamma(1.0 - nu) * std::sin(pi * nu) / pi;
    CHECK(std::abs(r - 1.0) <= 1e-10);
    CHECK(std::abs(reciprocal_gamma(z) * complex_gamma(z) - 1.0) <= 1e-10);
  }
  CHECK(reciprocal_gamma(-3.0) == Complex{0.0, 0.0});
  CHECK_THROWS_AS(complex_gamma(0.0), ValidationError);
  CHECK_THROWS_AS(complex_gamma(-4.0), ValidationError);
}

TEST_CASE("Bessel J of complex order against high-precision reference values") {
  // Frozen from mpmath.besselj at 30 digits.
  CHECK(close(bessel_j({0.5, -2.0}, 7.3), {2.0157863492288037, 2.1319997156075465}, 1e-12));
  CHECK(close(bessel_j({-0.5, 2.0}, 7.3), {2.8445412919701974, 2.5786580533032113}, 1e-12));
  CHECK(close(bessel_j({0.5, -5.0}, 0.25), {-51.00482049659171, 51.16355953462724}, 1e-12));
  CHECK(close(bessel_j({-0.5, 1.5}, 30.0), {0.09269357410181592, -0.77535856179141076}, 1e-10));
  CHECK(close(bessel_j({1.5, 0.75}, 12.0), {-0.33327354706118616, 0.14549826941476158}, 1e-11));
  CHECK(close(bessel_j({0.5, -1.0}, 29.5), {-0.33933743038556605, -0.11742158277475016}, 1e-10));
}

TEST_CASE("Bessel J of real order agrees with the standard library") {
  CHECK(std::abs(bessel_j(0.0, 2.404825557695773)) <= 1e-8);
  for (double nu : {0.0, 0.5, 1.0, 2.5, 4.0}) {
    for (double x : {0.1, 1.0, 5.0, 12.0, 25.0}) {
      CHECK(std::abs(bessel_j(nu, x) - std::cyl_bessel_j(nu, x)) <= 1e-11);
    }
  }
  CHECK(close(bessel_j(-3.0, 4.0), -std::cyl_bessel_j(3.0, 4.0), 1e-12));
  for (double x : {0.3, 2.0, 9.0, 30.0}) {
    CHECK(std::abs(bessel_j(0.5, x) - std::sqrt(2.0 / (pi * x)) * std::sin(x)) <= 1e-10);
  }
}

TEST_CASE("Bessel cross-product identity on the Re(nu) = 1/2 line") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> im(-5.0, 5.0);
  std::uniform_real_distribution<double> xs(0.1, 20.0);
  for (int i = 0; i < 200; ++i) {
    const Complex nu{0.5, im(rng)};
    const double x = xs(rng);
    const Complex lhs = bessel_j(nu - 1.0, x) * bessel_j(-nu, x) +
                        bessel_j(nu, x) * bessel_j(1.0 - nu, x);
    const Complex rhs = 2.0 * std::sin(pi * nu) / (pi * x);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("large-argument form approaches the series") {
  const Complex nu{0.5, -0.5};
  double previous = 1e9;
  for (double x : {10.0, 20.0, 40.0}) {
    const double err = std::abs(bessel_j_asymptotic(nu, x) - bessel_j(nu, x));
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 0.01);
}

TEST_CASE("Bessel argument guards") {
  CHECK_THROWS_AS(bessel_j(0.5, 0.0), ValidationError);
  CHECK_THROWS_AS(bessel_j(0.5, -1.0), ValidationError);
  CHECK_THROWS_AS(bessel_j_asymptotic(0.5, -1.0), ValidationError);
}
