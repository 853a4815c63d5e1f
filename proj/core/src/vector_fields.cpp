#include "kirchhoff/vector_fields.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "kirchhoff/errors.hpp"
#include "kirchhoff/transforms.hpp"

namespace kirchhoff {

namespace {

const cplx kI(0.0, 1.0);

// S = <Lambda psi, Lambda psi> - <Lambda eta, Lambda eta> on the real subspace.
// The two pairings are conjugate, so S = -2i Im<Lambda eta, Lambda eta>; the
// real part is dropped exactly instead of being left as rounding noise.
cplx offdiag_scalar(const ConjugatePair& eta) {
  const auto& g = eta.w.grid();
  cplx a = 0.0;
  for (std::size_t i = 0; i < eta.w.size(); ++i) a += double(g.norm2(i)) * eta.w[i] * eta.w[g.negated(i)];
  return cplx(0.0, -2.0 * a.imag());
}

// Per class sums r * sum_{j in c} u_j u_{-j}.
std::vector<cplx> weighted_class_sums(const ComplexField& u) {
  const auto& g = u.grid();
  std::vector<cplx> out(g.classes().size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto& rc = g.classes()[c];
    cplx acc = 0.0;
    for (std::size_t i = rc.begin; i < rc.end; ++i) acc += u[i] * u[g.negated(i)];
    out[c] = double(rc.norm2) * acc;
  }
  return out;
}

}  // namespace

FieldPair field_syst_uv(const FieldPair& fg) {
  const cplx q = q_functional(fg);
  const ComplexField lh = lambda_power(fg.first + fg.second, 1.0);
  FieldPair out{lambda_power(fg.first, 1.0), lambda_power(fg.second, 1.0)};
  out.first *= -kI;
  out.first.axpy(-kI * q, lh);
  out.second *= kI;
  out.second.axpy(kI * q, lh);
  return out;
}

FieldPair d1(const FieldPair& ab) {
  return {(-kI) * lambda_power(ab.first, 1.0), kI * lambda_power(ab.second, 1.0)};
}

FieldPair b3(const ConjugatePair& eta) {
  const cplx c = 0.25 * kI * offdiag_scalar(eta);
  return {c * eta.z(), c * eta.w};
}

FieldPair b3(const FieldPair& ab) {
  const ComplexField la = lambda_power(ab.first, 1.0);
  const ComplexField lb = lambda_power(ab.second, 1.0);
  const cplx c = 0.25 * kI * (pairing(lb, lb) - pairing(la, la));
  return {c * ab.second, c * ab.first};
}

FieldDecomposition decompose(const ConjugatePair& eta) {
  const double p = p_value(eta);
  const cplx s = offdiag_scalar(eta);
  const FieldPair ep = eta.expanded();
  FieldDecomposition out;
  out.D1 = d1(ep);
  out.D_ge3 = cplx(std::sqrt(1.0 + 2.0 * p) - 1.0) * out.D1;
  const cplx cb = 0.25 * kI * s;
  out.B3 = {cb * ep.second, cb * ep.first};
  const cplx cr = -kI * p / (2.0 * (1.0 + 2.0 * p)) * s;
  out.R_ge5 = {cr * ep.second, cr * ep.first};
  return out;
}

FieldPair field_syst6dic(const ConjugatePair& eta) {
  const double p = p_value(eta);
  const double root = std::sqrt(1.0 + 2.0 * p);
  const cplx c = kI * offdiag_scalar(eta) / (4.0 * (1.0 + 2.0 * p));
  const FieldPair ep = eta.expanded();
  FieldPair out = cplx(root) * d1(ep);
  out.first.axpy(c, ep.second);
  out.second.axpy(c, ep.first);
  return out;
}

FieldPair x3_plus(const FieldPair& wz) {
  require_same_grid(wz.first, wz.second, "x3_plus");
  const auto& g = wz.first.grid();
  const auto sw = weighted_class_sums(wz.first);
  const auto sz = weighted_class_sums(wz.second);
  FieldPair out = zero_pair(wz.first.grid_ptr());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t c = g.class_of(i);
    out.first[i] = -0.25 * kI * sw[c] * wz.second[i];
    out.second[i] = 0.25 * kI * sz[c] * wz.first[i];
  }
  return out;
}

XPlusOutput x_plus(const NormalFormCoefficients& nf, const ConjugatePair& w, XPlusMethod method,
                   SolveMethod solve) {
  const double n = sobolev_norm(w.w, nf.grid().m0());
  if (!(n < kXPlusBall))
    throw DomainError("x_plus: ||w||_{m0} = " + std::to_string(n) + " outside the ball of radius 1/2");

  const FieldPair wz = w.expanded();
  const CubicOperator op(nf, wz);
  const ConjugatePair eta{wz.first + op.self_image().first};

  XPlusOutput out;
  out.scriptP = std::sqrt(1.0 + 2.0 * p_value(eta)) - 1.0;
  out.linear_part = cplx(1.0 + out.scriptP) * d1(wz);
  out.cubic_part = x3_plus(wz);

  if (method == XPlusMethod::direct) {
    out.total = op.solve_I_plus_K(field_syst6dic(eta), solve);
    out.quintic_part = out.total - out.linear_part - out.cubic_part;
    return out;
  }

  const FieldPair b3w = b3(w);
  const FieldPair y = op.solve_I_plus_K(b3w - out.cubic_part, solve);
  const FieldDecomposition at_eta = decompose(eta);
  // R5+ = (I+K)^{-1} R(eta) + [B3(eta) - B3(w)] + ((I+K)^{-1} - I) B3(eta)
  // both inverse terms share one solve
  FieldPair r5 = op.solve_I_plus_K(at_eta.R_ge5 + at_eta.B3, solve);
  r5 -= b3w;
  out.quintic_part = op.apply_K(y) + r5 - cplx(out.scriptP) * y;
  out.total = out.linear_part + out.cubic_part + out.quintic_part;
  return out;
}

double energy_derivative(const ConjugatePair& w, const FieldPair& field, double s) {
  require_same_grid(w.w, field.first, "energy_derivative");
  const auto& g = w.w.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.w.size(); ++i)
    acc += std::pow(double(g.norm2(i)), s) * (field.first[i] * std::conj(w.w[i])).real();
  return 2.0 * acc;
}

}  // namespace kirchhoff
