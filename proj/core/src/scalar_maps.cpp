#include "kirchhoff/scalar_maps.hpp"

#include <cmath>
#include <string>

#include "kirchhoff/errors.hpp"

namespace kirchhoff::scalar {

double rho(double x) {
  if (!(x >= 0.0)) throw DomainError("rho: argument must be >= 0, got " + std::to_string(x));
  return -x / (1.0 + x + std::sqrt(1.0 + 2.0 * x));
}

double rho_prime(double x) {
  if (!(x >= 0.0)) throw DomainError("rho_prime: argument must be >= 0");
  const double r = std::sqrt(1.0 + 2.0 * x);
  return -1.0 / (r * (1.0 + x + r));
}

double phi_inverse(double y) {
  if (!(y >= 0.0)) throw DomainError("phi_inverse: argument must be >= 0, got " + std::to_string(y));
  if (y == 0.0) return 0.0;
  if (!std::isfinite(y)) throw DomainError("phi_inverse: argument must be finite");

  const double y2 = y * y;
  double x = y;
  for (int it = 0; it < 100; ++it) {
    const double r = (2.0 * x + 1.0) * x * x - y2;
    const double dr = 6.0 * x * x + 2.0 * x;
    const double step = r / dr;
    const double next = x - step;
    // Iterates decrease monotonically; once they stop, rounding has taken over.
    if (!(next < x) || !(next > 0.0)) return x;
    if (step <= 1e-15 * next) return next;
    x = next;
  }
  throw ConvergenceError("phi_inverse: Newton iteration did not converge in 100 steps");
}

double phi_inverse_prime(double y) {
  const double p = phi_inverse(y);
  return std::sqrt(1.0 + 2.0 * p) / (1.0 + 3.0 * p);
}

double f_factor(double p) {
  if (!(p >= 0.0)) throw DomainError("f_factor: P must be >= 0");
  return -1.0 / (4.0 * (1.0 + 3.0 * p) * std::sqrt(1.0 + 2.0 * p));
}

}  // namespace kirchhoff::scalar
