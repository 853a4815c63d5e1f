#pragma once

#include "kirchhoff/complex_field.hpp"
#include "kirchhoff/normal_form_ops.hpp"

namespace kirchhoff {

/// df = -i Lambda f - i Q Lambda(f+g), dg = i Lambda g + i Q Lambda(f+g), Q = Q(f,g).
FieldPair field_syst_uv(const FieldPair& fg);

/// d eta = -i sqrt(1+2P) Lambda eta + i S/(4(1+2P)) psi,
/// d psi =  i sqrt(1+2P) Lambda psi + i S/(4(1+2P)) eta,
/// with S = <Lambda psi, Lambda psi> - <Lambda eta, Lambda eta>.
FieldPair field_syst6dic(const ConjugatePair& eta);

/// (-i Lambda a, i Lambda b); linear, defined on any pair.
FieldPair d1(const FieldPair& ab);

struct FieldDecomposition {
  FieldPair D1;
  FieldPair D_ge3;
  FieldPair B3;
  FieldPair R_ge5;

  FieldPair sum() const { return D1 + D_ge3 + B3 + R_ge5; }
};

FieldDecomposition decompose(const ConjugatePair& eta);
/// (i/4) S (psi, eta).
FieldPair b3(const ConjugatePair& eta);
/// Same formula on an arbitrary pair, S = <Lambda b, Lambda b> - <Lambda a, Lambda a>.
FieldPair b3(const FieldPair& ab);

/// Resonant cubic remainder. First component
/// -(i/4) sum_{|j|=|k|} w_j w_{-j} |j|^2 z_k, second component
/// (i/4) sum_{|j|=|k|} z_j z_{-j} |j|^2 w_k. Works on any pair.
FieldPair x3_plus(const FieldPair& wz);

enum class XPlusMethod { direct, structured };

struct XPlusOutput {
  FieldPair total;
  FieldPair linear_part;   ///< (1 + scriptP) D1(w,z)
  FieldPair cubic_part;    ///< X3+
  FieldPair quintic_part;  ///< X+_{>=5}
  double scriptP = 0.0;    ///< sqrt(1 + 2 P(Phi4(w,z))) - 1
};

/// Admissible radius for X+ (Neumann validity of (I+K)^{-1}).
inline constexpr double kXPlusBall = 0.5;

/// direct: (I+K)^{-1} X(Phi4(w,z)); the parts are filled from the structured
/// formulas for linear and cubic, and the quintic part as the remainder.
/// structured: (1+scriptP) D1 + X3+ + X+_{>=5}, each term computed separately.
/// Throws DomainError when ||w||_{m0} >= 1/2.
XPlusOutput x_plus(const NormalFormCoefficients& nf, const ConjugatePair& w,
                   XPlusMethod method = XPlusMethod::structured,
                   SolveMethod solve = SolveMethod::neumann);

/// 2 Re <Lambda^s field_1, Lambda^s conj(w)> = d/dt ||w||_s^2 along the field.
double energy_derivative(const ConjugatePair& w, const FieldPair& field, double s);

}  // namespace kirchhoff
