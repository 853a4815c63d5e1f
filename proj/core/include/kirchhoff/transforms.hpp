#pragma once

#include <string>

#include "kirchhoff/complex_field.hpp"
#include "kirchhoff/normal_form_ops.hpp"

namespace kirchhoff {

/// Q(f,g) = 1/4 <Lambda(f+g), f+g> for an arbitrary pair (complex in general).
cplx q_functional(const FieldPair& fg);
/// Q on the real subspace: 1/4 sum |j| |h_j|^2 with h = w + conj(w). Always >= 0.
double q_value(const ConjugatePair& p);
/// P = phi(Q), the value of Q after the diagonalizing map.
double p_value(const ConjugatePair& p);

/// (u, v) = (Lambda^{-1/2} q, Lambda^{1/2} p).
RealPair phi1_forward(const RealPair& qp);
RealPair phi1_inverse(const RealPair& uv);

/// (f, g) -> (q, p) = ((f+g)/sqrt2, (f-g)/(i sqrt2)).
FieldPair phi2_forward(const FieldPair& fg);
/// (q, p) -> (f, g) = ((q+ip)/sqrt2, (q-ip)/sqrt2).
FieldPair phi2_inverse(const FieldPair& qp);
RealPair phi2_forward(const ConjugatePair& f);
ConjugatePair phi2_inverse(const RealPair& qp);

/// (eta, psi) -> (f, g) = (1-rho^2)^{-1/2} (eta + rho psi, rho eta + psi), rho = rho(P(eta,psi)).
ConjugatePair phi3_forward(const ConjugatePair& eta);
/// Closed form inverse with rho = rho(Q(f,g)).
ConjugatePair phi3_inverse(const ConjugatePair& f);

/// script K(eta,psi)(alpha,beta) = (psi,eta) F <Lambda(eta+psi), alpha+beta>.
FieldPair apply_script_K(const ConjugatePair& eta, const FieldPair& ab);
/// (I + script K)^{-1} rhs in closed form:
/// rhs + (psi,eta) <Lambda(eta+psi), rhs_1+rhs_2> / (4 (1+2P)^{3/2}).
FieldPair solve_I_plus_script_K(const ConjugatePair& eta, const FieldPair& rhs);

/// Intermediate stages of the full change of variables.
struct TransformChainState {
  RealPair uv;
  RealPair qp;
  ConjugatePair fg;
  ConjugatePair eta_psi;
  ConjugatePair wz;

  std::string to_json() const;
};

/// Operational radius of the full composition (the analytic one is not explicit).
inline constexpr double kComposeBall = 0.1;

/// w -> (u, v) through Phi4, Phi3, Phi2, Phi1. Requires ||w||_{m0} <= ball.
RealPair compose_forward(const NormalFormCoefficients& nf, const ConjugatePair& w,
                         TransformChainState* chain = nullptr, double ball = kComposeBall);
/// (u, v) -> w. Requires ||u||_{m0+1/2} + ||v||_{m0-1/2} <= ball.
ConjugatePair compose_inverse(const NormalFormCoefficients& nf, const RealPair& uv,
                              TransformChainState* chain = nullptr, double ball = kComposeBall);

/// ||u||_{s+1/2} + ||v||_{s-1/2}.
double physical_norm(const RealPair& uv, double s);

}  // namespace kirchhoff
