#pragma once

namespace kirchhoff::scalar {

/// rho(x) = -x / (1 + x + sqrt(1 + 2x)) for x >= 0; values in (-1, 0].
/// Satisfies (1 - rho) / (1 + rho) = sqrt(1 + 2x).
double rho(double x);

/// d rho / dx = -1 / (sqrt(1 + 2x) (1 + x + sqrt(1 + 2x))).
double rho_prime(double x);

/// Inverse of x -> x sqrt(1 + 2x) on [0, inf).
///
/// Newton iteration on r(x) = 2x^3 + x^2 - y^2 started at x0 = y. r is
/// increasing and convex on [0, inf) and x0 = y lies to the right of the
/// root, so the iterates decrease monotonically to it.
double phi_inverse(double y);

/// d phi / dy = sqrt(1 + 2 phi(y)) / (1 + 3 phi(y)).
double phi_inverse_prime(double y);

/// F = -1 / (4 (1 + 3P) sqrt(1 + 2P)), the scalar factor of the order-one
/// diagonalization correction operator.
double f_factor(double p);

}  // namespace kirchhoff::scalar
