#pragma once

#include <functional>

#include "kirchhoff/complex_field.hpp"

namespace kirchhoff {

using PairOperator = std::function<FieldPair(const FieldPair&)>;

/// Solves op(x) = rhs for a C-linear operator on pairs by assembling its
/// (2n x 2n) matrix column by column and running a pivoted LU.
/// Throws NumericalError when the matrix is numerically singular.
FieldPair dense_solve(const PairOperator& op, const FieldPair& rhs);

}  // namespace kirchhoff
