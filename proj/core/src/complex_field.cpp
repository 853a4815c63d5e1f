#include "kirchhoff/complex_field.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

ComplexField::ComplexField(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw StructuralError("ComplexField: null grid");
  coeffs_.assign(grid_->size(), cplx(0.0));
}

ComplexField::ComplexField(GridPtr grid, std::vector<cplx> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (!grid_) throw StructuralError("ComplexField: null grid");
  if (coeffs_.size() != grid_->size())
    throw StructuralError("ComplexField: coefficient count " + std::to_string(coeffs_.size()) +
                          " does not match grid size " + std::to_string(grid_->size()));
}

ComplexField ComplexField::delta(GridPtr grid, std::span<const int> j, cplx value) {
  ComplexField f(std::move(grid));
  f.at(j) = value;
  return f;
}

cplx& ComplexField::at(std::span<const int> j) {
  const auto idx = grid_->find(j);
  if (!idx) throw ParameterError("ComplexField::at: mode not on grid");
  return coeffs_[*idx];
}

const cplx& ComplexField::at(std::span<const int> j) const {
  const auto idx = grid_->find(j);
  if (!idx) throw ParameterError("ComplexField::at: mode not on grid");
  return coeffs_[*idx];
}

void require_same_grid(const ComplexField& a, const ComplexField& b, const char* where) {
  if (!a.grid_ptr() || !b.grid_ptr())
    throw StructuralError(std::string(where) + ": uninitialized field");
  if (a.grid_ptr() != b.grid_ptr() && !a.grid().same_as(b.grid()))
    throw StructuralError(std::string(where) + ": fields live on different grids");
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
  require_same_grid(*this, o, "operator+=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
  require_same_grid(*this, o, "operator-=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

ComplexField& ComplexField::operator*=(cplx a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

ComplexField& ComplexField::axpy(cplx a, const ComplexField& x) {
  require_same_grid(*this, x, "axpy");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * x.coeffs_[i];
  return *this;
}

bool ComplexField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const cplx& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

FieldPair zero_pair(const GridPtr& grid) {
  return {ComplexField(grid), ComplexField(grid)};
}

ComplexField ConjugatePair::z() const { return conj_mirror(w); }

FieldPair ConjugatePair::expanded() const { return {w, conj_mirror(w)}; }

ComplexField conj_mirror(const ComplexField& f) {
  ComplexField out(f.grid_ptr());
  const auto& g = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::conj(f[g.negated(i)]);
  return out;
}

double hermitian_defect(const ComplexField& f) {
  const auto& g = f.grid();
  double d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    d = std::max(d, std::abs(f[i] - std::conj(f[g.negated(i)])));
  return d;
}

ComplexField hermitian_part(const ComplexField& f) {
  ComplexField out(f.grid_ptr());
  const auto& g = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = 0.5 * (f[i] + std::conj(f[g.negated(i)]));
  return out;
}

double conjugate_defect(const FieldPair& p) {
  require_same_grid(p.first, p.second, "conjugate_defect");
  const auto& g = p.first.grid();
  double d = 0.0;
  for (std::size_t i = 0; i < p.first.size(); ++i)
    d = std::max(d, std::abs(p.second[i] - std::conj(p.first[g.negated(i)])));
  return d;
}

double sobolev_norm(const ComplexField& f, double s) {
  if (!(s >= 0.0)) throw ParameterError("sobolev_norm: order s must be >= 0");
  const auto& g = f.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = s == 0.0 ? 1.0 : std::pow(static_cast<double>(g.norm2(i)), s);
    acc += std::norm(f[i]) * w;
  }
  return std::sqrt(acc);
}

double sobolev_norm(const FieldPair& p, double s) {
  return std::max(sobolev_norm(p.first, s), sobolev_norm(p.second, s));
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const auto& c : f.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

double max_abs(const FieldPair& p) { return std::max(max_abs(p.first), max_abs(p.second)); }

ComplexField lambda_power(const ComplexField& f, double sigma) {
  ComplexField out(f);
  if (sigma == 0.0) return out;
  const auto& g = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] *= std::pow(static_cast<double>(g.norm2(i)), 0.5 * sigma);
  return out;
}

FieldPair lambda_power(const FieldPair& p, double sigma) {
  return {lambda_power(p.first, sigma), lambda_power(p.second, sigma)};
}

cplx pairing(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f, g, "pairing");
  const auto& grid = f.grid();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * g[grid.negated(i)];
  return acc;
}

ComplexField random_field(const GridPtr& grid, std::uint64_t seed, double target_norm,
                          double s, Symmetry symmetry) {
  if (!(target_norm >= 0.0)) throw ParameterError("random_field: target_norm must be >= 0");
  if (!(s >= 0.0)) throw ParameterError("random_field: order s must be >= 0");
  ComplexField f(grid);
  if (target_norm == 0.0) return f;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto& g = *grid;
  std::vector<bool> assigned(g.size(), false);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (assigned[i]) continue;
    const double damp = std::pow(g.abs(i), -(s + 1.0));
    const double re = normal(rng);
    const double im = normal(rng);
    f[i] = damp * cplx(re, im);
    assigned[i] = true;
    if (symmetry == Symmetry::hermitian) {
      const std::size_t n = g.negated(i);
      f[n] = std::conj(f[i]);
      assigned[n] = true;
    }
  }
  const double nrm = sobolev_norm(f, s);
  f *= target_norm / nrm;
  return f;
}

}  // namespace kirchhoff
