#include "kirchhoff/kirchhoff_equation.hpp"

#include <algorithm>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

namespace {

double gradient_energy(const ComplexField& u) {
  const auto& g = u.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += g.norm2(i) * std::norm(u[i]);
  return acc;
}

std::size_t mode_index(const ComplexField& f, std::span<const int> j) {
  const auto idx = f.grid().find(j);
  if (!idx) throw ParameterError("momentum_j: mode is zero or outside the grid");
  return *idx;
}

}  // namespace

KirchhoffRhsOutput kirchhoff_rhs(const RealPair& state) {
  require_same_grid(state.u, state.v, "kirchhoff_rhs");
  const auto& g = state.u.grid();
  const double a = 1.0 + gradient_energy(state.u);
  ComplexField dv(state.u.grid_ptr());
  for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = -a * g.norm2(i) * state.u[i];
  return {state.v, std::move(dv), a};
}

RealPair kirchhoff_field(const RealPair& state) {
  auto out = kirchhoff_rhs(state);
  return {std::move(out.du), std::move(out.dv)};
}

double hamiltonian(const RealPair& state) {
  const double vv = pairing(state.v, state.v).real();
  const double lu = pairing(lambda_power(state.u, 1.0), lambda_power(state.u, 1.0)).real();
  return 0.5 * vv + 0.5 * lu + 0.25 * lu * lu;
}

std::vector<double> momentum_j(const RealPair& state, std::span<const int> j) {
  const std::size_t i = mode_index(state.u, j);
  const double im = std::imag(state.u[i] * std::conj(state.v[i]));
  std::vector<double> out(j.size());
  for (std::size_t c = 0; c < j.size(); ++c) out[c] = -j[c] * im;
  return out;
}

std::vector<cplx> momentum_j_complex(const RealPair& state, std::span<const int> j) {
  const std::size_t i = mode_index(state.u, j);
  const std::size_t n = state.u.grid().negated(i);
  const cplx bracket = state.u[i] * state.v[n] - state.u[n] * state.v[i];
  std::vector<cplx> out(j.size());
  for (std::size_t c = 0; c < j.size(); ++c) out[c] = 0.5 * cplx(0.0, 1.0) * double(j[c]) * bracket;
  return out;
}

std::vector<double> total_momentum(const RealPair& state) {
  const auto& g = state.u.grid();
  std::vector<double> out(static_cast<std::size_t>(g.dim()));
  for (int c = 0; c < g.dim(); ++c) {
    ComplexField du(state.u.grid_ptr());
    for (std::size_t i = 0; i < du.size(); ++i)
      du[i] = cplx(0.0, g.mode(i)[c]) * state.u[i];
    out[c] = pairing(state.v, du).real();
  }
  return out;
}

double reversibility_defect(const RealPair& state) {
  const RealPair flipped{state.u, -state.v};
  const RealPair x_of_s = kirchhoff_field(flipped);
  const RealPair x = kirchhoff_field(state);
  const RealPair s_of_x{x.u, -x.v};
  const double du = sobolev_norm(x_of_s.u + s_of_x.u, 0.0);
  const double dv = sobolev_norm(x_of_s.v + s_of_x.v, 0.0);
  return std::max(du, dv);
}

}  // namespace kirchhoff
