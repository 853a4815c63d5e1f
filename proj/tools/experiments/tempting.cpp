#include "tempting.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "kirchhoff/dense.hpp"
#include "kirchhoff/scalar_maps.hpp"
#include "kirchhoff/transforms.hpp"
#include "kirchhoff/vector_fields.hpp"

namespace kexp {

using namespace kirchhoff;

namespace {

struct MapCoeffs {
  double a, b;    // T = [[a, b], [b, a]]
  double da, db;  // derivatives in the scalar argument Q
};

MapCoeffs coeffs(Diagonalizer which, double q) {
  if (which == Diagonalizer::tempting) {
    const double r = scalar::rho(q), rp = scalar::rho_prime(q);
    const double a = 1.0 / (1.0 + r), b = r / (1.0 + r);
    const double dr = 1.0 / ((1.0 + r) * (1.0 + r));
    return {a, b, -dr * rp, dr * rp};
  }
  const double p = scalar::phi_inverse(q);
  const double r = scalar::rho(p);
  const double rp = scalar::rho_prime(p) * scalar::phi_inverse_prime(q);
  const double a = 1.0 / std::sqrt(1.0 - r * r);
  const double da_dr = r * a * a * a;
  return {a, r * a, da_dr * rp, (a + r * da_dr) * rp};
}

}  // namespace

PullbackFit pullback_fit(Diagonalizer which, const ConjugatePair& eta) {
  const FieldPair ep = eta.expanded();
  const double q = q_value(eta);
  const auto c = coeffs(which, q);
  const FieldPair fg{cplx(c.a) * ep.first + cplx(c.b) * ep.second,
                     cplx(c.b) * ep.first + cplx(c.a) * ep.second};
  const FieldPair target = field_syst_uv(fg);

  // DT x = L x + (dT/dQ) dQ[x], dQ[x] = 1/2 <Lambda(eta+psi), x1+x2>
  const ComplexField lam_sum = lambda_power(ep.first + ep.second, 1.0);
  const FieldPair dT{cplx(c.da) * ep.first + cplx(c.db) * ep.second,
                     cplx(c.db) * ep.first + cplx(c.da) * ep.second};
  auto jac = [&](const FieldPair& x) {
    const cplx dq = 0.5 * pairing(lam_sum, x.first + x.second);
    FieldPair out{cplx(c.a) * x.first + cplx(c.b) * x.second, cplx(c.b) * x.first + cplx(c.a) * x.second};
    out += dq * dT;
    return out;
  };
  PullbackFit fit;
  fit.field = dense_solve(jac, target);

  const ComplexField basis[4] = {lambda_power(ep.first, 1.0), lambda_power(ep.second, 1.0), ep.first, ep.second};
  const auto n = static_cast<Eigen::Index>(ep.first.size());
  Eigen::MatrixXcd A(n, 4);
  Eigen::VectorXcd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < 4; ++k) A(i, k) = basis[k][static_cast<std::size_t>(i)];
    y(i) = fit.field.first[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXcd x = A.colPivHouseholderQr().solve(y);
  fit.lambda_eta = x(0);
  fit.lambda_psi = x(1);
  fit.eta = x(2);
  fit.psi = x(3);
  fit.residual = (A * x - y).cwiseAbs().maxCoeff();
  return fit;
}

}  // namespace kexp
