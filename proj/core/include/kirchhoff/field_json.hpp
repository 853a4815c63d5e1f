#pragma once

#include <string>
#include <string_view>

#include "kirchhoff/complex_field.hpp"

namespace kirchhoff {

/// {"d":..,"N":..,"coeffs":[[j1,..,jd,re,im],...]} in canonical mode order.
/// Doubles are written in shortest round-trip form, so parsing the output
/// reproduces the field bit for bit.
std::string field_to_json(const ComplexField& f);

/// Parses the format above. The grid is rebuilt from d and N unless a
/// compatible grid is supplied. Unknown modes throw ParameterError.
ComplexField field_from_json(std::string_view text, GridPtr grid = nullptr);

}  // namespace kirchhoff
