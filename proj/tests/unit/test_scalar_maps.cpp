#include <doctest.h>

#include <cmath>

#include "kirchhoff/errors.hpp"
#include "kirchhoff/scalar_maps.hpp"

using namespace kirchhoff;

TEST_CASE("rho") {
  CHECK(scalar::rho(0.0) == 0.0);
  CHECK(std::abs(scalar::rho(4.0) + 0.5) <= 1e-16);
  for (double x : {0.1, 1.0, 10.0}) {
    const double r = scalar::rho(x);
    CHECK(r > -1.0);
    CHECK(r <= 0.0);
    CHECK(std::abs((1 - r) / (1 + r) - std::sqrt(1 + 2 * x)) <= 1e-14 * std::sqrt(1 + 2 * x));
  }
  CHECK_THROWS_AS(scalar::rho(-1e-3), DomainError);
  const double h = 1e-6;
  for (double x : {0.05, 0.7, 3.0})
    CHECK(scalar::rho_prime(x) == doctest::Approx((scalar::rho(x + h) - scalar::rho(x - h)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("phi inverse") {
  CHECK(scalar::phi_inverse(0.0) == 0.0);
  CHECK(std::abs(scalar::phi_inverse(std::sqrt(3.0)) - 1.0) <= 1e-15);
  CHECK(std::abs(scalar::phi_inverse(12.0) - 4.0) <= 4e-15);
  for (double y = 1e-12; y < 1e6; y *= 1.7) {
    const double x = scalar::phi_inverse(y);
    CHECK(x >= 0.0);
    CHECK(std::abs(x * std::sqrt(1 + 2 * x) - y) <= 1e-14 * std::max(1.0, y));
    CHECK(x <= y);
  }
  CHECK_THROWS_AS(scalar::phi_inverse(-1.0), DomainError);
  const double h = 1e-6;
  for (double y : {0.05, 0.7, 3.0})
    CHECK(scalar::phi_inverse_prime(y) ==
          doctest::Approx((scalar::phi_inverse(y + h) - scalar::phi_inverse(y - h)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("F factor") {
  CHECK(scalar::f_factor(0.0) == -0.25);
  CHECK(std::abs(scalar::f_factor(4.0) + 1.0 / (4.0 * 13.0 * 3.0)) <= 1e-17);
  CHECK_THROWS_AS(scalar::f_factor(-1.0), DomainError);
}
