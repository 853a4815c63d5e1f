#include "kirchhoff/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "kirchhoff/errors.hpp"
#include "kirchhoff/scalar_maps.hpp"

namespace kirchhoff {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const cplx kI(0.0, 1.0);

nlohmann::json coeffs_json(const ComplexField& f) {
  auto arr = nlohmann::json::array();
  if (!f.grid_ptr()) return arr;
  const auto& g = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto row = nlohmann::json::array();
    for (int c : g.mode(i)) row.push_back(c);
    row.push_back(f[i].real());
    row.push_back(f[i].imag());
    arr.push_back(std::move(row));
  }
  return arr;
}

}  // namespace

cplx q_functional(const FieldPair& fg) {
  require_same_grid(fg.first, fg.second, "q_functional");
  const ComplexField h = fg.first + fg.second;
  return 0.25 * pairing(lambda_power(h, 1.0), h);
}

double q_value(const ConjugatePair& p) {
  const ComplexField h = p.w + p.z();
  const auto& g = h.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) acc += g.abs(i) * std::norm(h[i]);
  return 0.25 * acc;
}

double p_value(const ConjugatePair& p) { return scalar::phi_inverse(q_value(p)); }

RealPair phi1_forward(const RealPair& qp) {
  return {lambda_power(qp.u, -0.5), lambda_power(qp.v, 0.5)};
}

RealPair phi1_inverse(const RealPair& uv) {
  return {lambda_power(uv.u, 0.5), lambda_power(uv.v, -0.5)};
}

FieldPair phi2_forward(const FieldPair& fg) {
  require_same_grid(fg.first, fg.second, "phi2_forward");
  return {kInvSqrt2 * (fg.first + fg.second), (-kI * kInvSqrt2) * (fg.first - fg.second)};
}

FieldPair phi2_inverse(const FieldPair& qp) {
  require_same_grid(qp.first, qp.second, "phi2_inverse");
  const ComplexField ip = kI * qp.second;
  return {kInvSqrt2 * (qp.first + ip), kInvSqrt2 * (qp.first - ip)};
}

RealPair phi2_forward(const ConjugatePair& f) {
  FieldPair qp = phi2_forward(f.expanded());
  return {std::move(qp.first), std::move(qp.second)};
}

ConjugatePair phi2_inverse(const RealPair& qp) {
  require_same_grid(qp.u, qp.v, "phi2_inverse");
  return {kInvSqrt2 * (qp.u + kI * qp.v)};
}

ConjugatePair phi3_forward(const ConjugatePair& eta) {
  const double r = scalar::rho(p_value(eta));
  const double scale = 1.0 / std::sqrt(1.0 - r * r);
  ComplexField f = eta.w;
  f.axpy(r, eta.z());
  f *= scale;
  return {std::move(f)};
}

ConjugatePair phi3_inverse(const ConjugatePair& f) {
  const double r = scalar::rho(q_value(f));
  const double scale = 1.0 / std::sqrt(1.0 - r * r);
  ComplexField eta = f.w;
  eta.axpy(-r, f.z());
  eta *= scale;
  return {std::move(eta)};
}

FieldPair apply_script_K(const ConjugatePair& eta, const FieldPair& ab) {
  const FieldPair ep = eta.expanded();
  const double factor = scalar::f_factor(p_value(eta));
  const cplx s = pairing(lambda_power(ep.first + ep.second, 1.0), ab.first + ab.second);
  return {(factor * s) * ep.second, (factor * s) * ep.first};
}

FieldPair solve_I_plus_script_K(const ConjugatePair& eta, const FieldPair& rhs) {
  const FieldPair ep = eta.expanded();
  const double p = p_value(eta);
  const double c = 1.0 / (4.0 * std::pow(1.0 + 2.0 * p, 1.5));
  const cplx s = pairing(lambda_power(ep.first + ep.second, 1.0), rhs.first + rhs.second);
  FieldPair out = rhs;
  out.first.axpy(c * s, ep.second);
  out.second.axpy(c * s, ep.first);
  return out;
}

std::string TransformChainState::to_json() const {
  nlohmann::json j;
  j["u"] = coeffs_json(uv.u);
  j["v"] = coeffs_json(uv.v);
  j["q"] = coeffs_json(qp.u);
  j["p"] = coeffs_json(qp.v);
  j["f"] = coeffs_json(fg.w);
  j["eta"] = coeffs_json(eta_psi.w);
  j["w"] = coeffs_json(wz.w);
  if (wz.w.grid_ptr()) {
    j["d"] = wz.w.grid().dim();
    j["N"] = wz.w.grid().cutoff();
  }
  return j.dump();
}

double physical_norm(const RealPair& uv, double s) {
  return sobolev_norm(uv.u, s + 0.5) + sobolev_norm(uv.v, std::max(0.0, s - 0.5));
}

RealPair compose_forward(const NormalFormCoefficients& nf, const ConjugatePair& w,
                         TransformChainState* chain, double ball) {
  const double m0 = nf.grid().m0();
  const double n = sobolev_norm(w.w, m0);
  if (!(n <= ball))
    throw DomainError("compose_forward: ||w||_{m0} = " + std::to_string(n) + " exceeds ball " +
                      std::to_string(ball));
  ConjugatePair eta = phi4_forward(nf, w);
  ConjugatePair f = phi3_forward(eta);
  RealPair qp = phi2_forward(f);
  RealPair uv = phi1_forward(qp);
  if (chain) *chain = {uv, qp, f, eta, w};
  return uv;
}

ConjugatePair compose_inverse(const NormalFormCoefficients& nf, const RealPair& uv,
                              TransformChainState* chain, double ball) {
  const double m0 = nf.grid().m0();
  const double n = physical_norm(uv, m0);
  if (!(n <= ball))
    throw DomainError("compose_inverse: ||u||_{m0+1/2} + ||v||_{m0-1/2} = " + std::to_string(n) +
                      " exceeds ball " + std::to_string(ball));
  RealPair qp = phi1_inverse(uv);
  ConjugatePair f = phi2_inverse(qp);
  ConjugatePair eta = phi3_inverse(f);
  ConjugatePair w = phi4_inverse(nf, eta);
  if (chain) *chain = {uv, qp, f, eta, w};
  return w;
}

}  // namespace kirchhoff
