#include "kirchhoff/field_json.hpp"

#include <json.hpp>
#include <vector>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

using nlohmann::json;

std::string field_to_json(const ComplexField& f) {
  const auto& g = f.grid();
  json coeffs = json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    json row = json::array();
    for (int c : g.mode(i)) row.push_back(c);
    row.push_back(f[i].real());
    row.push_back(f[i].imag());
    coeffs.push_back(std::move(row));
  }
  json doc = {{"d", g.dim()}, {"N", g.cutoff()}, {"coeffs", std::move(coeffs)}};
  return doc.dump();
}

ComplexField field_from_json(std::string_view text, GridPtr grid) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("field_from_json: ") + e.what());
  }
  if (!doc.contains("d") || !doc.contains("N") || !doc.contains("coeffs"))
    throw ParameterError("field_from_json: expected keys d, N, coeffs");
  const int d = doc.at("d").get<int>();
  const int n = doc.at("N").get<int>();
  if (!grid) grid = SpectralGrid::make(d, n);
  if (grid->dim() != d || grid->cutoff() != n)
    throw StructuralError("field_from_json: supplied grid does not match d/N");

  ComplexField f(grid);
  std::vector<int> j(static_cast<std::size_t>(d));
  for (const auto& row : doc.at("coeffs")) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(d) + 2)
      throw ParameterError("field_from_json: each coefficient row needs d+2 entries");
    for (int c = 0; c < d; ++c) j[c] = row[c].get<int>();
    f.at(j) = cplx(row[d].get<double>(), row[d + 1].get<double>());
  }
  return f;
}

}  // namespace kirchhoff
