#pragma once

#include <complex>

#include "kirchhoff/complex_field.hpp"

namespace kexp {

enum class Diagonalizer { phi3, tempting };

/// First component of the pulled back field DT^{-1} X_uv(T(eta, conj eta))
/// fitted to the basis {Lambda eta, Lambda psi, eta, psi} by least squares.
struct PullbackFit {
  std::complex<double> lambda_eta;
  std::complex<double> lambda_psi;
  std::complex<double> eta;  ///< zero order diagonal coefficient
  std::complex<double> psi;
  double residual = 0.0;     ///< max |field - fit|
  kirchhoff::FieldPair field;
};

/// T is either the factor (1 - rho^2)^{-1/2} map with rho = rho(P) or the
/// tempting 1/(1 + rho) map with rho = rho(Q). The Jacobian is C-linear and
/// inverted by a dense solve.
PullbackFit pullback_fit(Diagonalizer which, const kirchhoff::ConjugatePair& eta);

}  // namespace kexp
