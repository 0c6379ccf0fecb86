#include <doctest.h>

#include <cmath>
#include <numbers>

#include "maxperim/special.hpp"
#include "oracles.hpp"

using namespace maxperim;

TEST_CASE("normal density and distribution match Boost") {
  for (double x : {-6.0, -2.5, -1.0, 0.0, 0.3, 1.0, 2.0, 7.5}) {
    CHECK(normal_pdf(x) == doctest::Approx(oracle::normal_pdf(x)).epsilon(1e-14));
    CHECK(normal_cdf(x) == doctest::Approx(oracle::normal_cdf(x)).epsilon(1e-13));
  }
  CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(kSqrt2Pi == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-16));
}

TEST_CASE("unit ball volume agrees with the two-step recursion") {
  for (int n = 1; n <= 60; ++n) {
    CHECK(unit_ball_volume(n) == doctest::Approx(oracle::unit_ball_volume(n)).epsilon(1e-12));
    CHECK(std::exp(log_unit_sphere_area(n)) == doctest::Approx(n * oracle::unit_ball_volume(n)).epsilon(1e-12));
  }
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
  CHECK(unit_ball_volume(5) == doctest::Approx(8.0 * std::numbers::pi * std::numbers::pi / 15.0).epsilon(1e-14));
  // log form stays finite where the volume underflows
  CHECK(std::isfinite(log_unit_ball_volume(2000)));
  CHECK(log_unit_ball_volume(2000) == doctest::Approx(1000.0 * std::log(std::numbers::pi) - std::lgamma(1001.0)));
}

TEST_CASE("regularized gamma P against quadrature of the gamma density") {
  for (double a : {0.5, 1.0, 2.5, 8.0}) {
    for (double x : {0.1, 1.0, 3.0, 10.0}) {
      // t = u^2 removes the endpoint singularity
      double const ref = oracle::integrate(
          [a](double u) { return u > 0.0 ? 2.0 * std::exp((2.0 * a - 1.0) * std::log(u) - u * u - std::lgamma(a)) : 0.0; },
          0.0, std::sqrt(x));
      CHECK(regularized_gamma_p(a, x) == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}
