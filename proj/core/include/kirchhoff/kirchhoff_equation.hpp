#pragma once

#include <span>
#include <vector>

#include "kirchhoff/complex_field.hpp"

namespace kirchhoff {

struct KirchhoffRhsOutput {
  ComplexField du;
  ComplexField dv;
  /// 1 + <Lambda u, Lambda u>, the squared wave speed.
  double a_coeff;
};

/// du = v, dv_j = -(1 + sum_k |k|^2 |u_k|^2) |j|^2 u_j.
KirchhoffRhsOutput kirchhoff_rhs(const RealPair& state);

/// The same field packed as a RealPair, for the integrator.
RealPair kirchhoff_field(const RealPair& state);

/// 1/2 <v,v> + 1/2 <Lambda u, Lambda u> + 1/4 <Lambda u, Lambda u>^2.
double hamiltonian(const RealPair& state);

/// Prime integral attached to mode j:
/// (1/2) i j (u_j v_{-j} - u_{-j} v_j) = -j Im(u_j conj(v_j)).
/// Throws ParameterError when j is zero or not on the grid.
std::vector<double> momentum_j(const RealPair& state, std::span<const int> j);

/// The complex form (1/2) i j (u_j v_{-j} - u_{-j} v_j) evaluated literally,
/// one complex number per spatial direction.
std::vector<cplx> momentum_j_complex(const RealPair& state, std::span<const int> j);

/// Total momentum int (du/dt) grad u dx, computed as the pairing of v with
/// the gradient of u.
std::vector<double> total_momentum(const RealPair& state);

/// max over components of the L2 norm of (X o S + S o X)(state), with
/// S(u, v) = (u, -v).
double reversibility_defect(const RealPair& state);

}  // namespace kirchhoff
