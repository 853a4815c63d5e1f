#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "kirchhoff/spectral_grid.hpp"

namespace kirchhoff {

using cplx = std::complex<double>;

/// Complex Fourier coefficients of a zero-mean function, stored densely in the
/// grid's canonical mode order.
class ComplexField {
 public:
  ComplexField() = default;
  explicit ComplexField(GridPtr grid);
  ComplexField(GridPtr grid, std::vector<cplx> coeffs);

  static ComplexField zeros(GridPtr grid) { return ComplexField(std::move(grid)); }
  /// Coefficient 1 at mode j and its value, everything else zero.
  static ComplexField delta(GridPtr grid, std::span<const int> j, cplx value = 1.0);

  const GridPtr& grid_ptr() const { return grid_; }
  const SpectralGrid& grid() const { return *grid_; }
  std::size_t size() const { return coeffs_.size(); }

  cplx& operator[](std::size_t i) { return coeffs_[i]; }
  const cplx& operator[](std::size_t i) const { return coeffs_[i]; }
  /// Coefficient at lattice point j; throws ParameterError when j is not on the grid.
  cplx& at(std::span<const int> j);
  const cplx& at(std::span<const int> j) const;

  std::span<cplx> coeffs() { return coeffs_; }
  std::span<const cplx> coeffs() const { return coeffs_; }

  ComplexField& operator+=(const ComplexField& o);
  ComplexField& operator-=(const ComplexField& o);
  ComplexField& operator*=(cplx a);
  /// this += a * x
  ComplexField& axpy(cplx a, const ComplexField& x);

  friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
  friend ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
  friend ComplexField operator*(cplx s, ComplexField a) { return a *= s; }
  friend ComplexField operator*(ComplexField a, cplx s) { return a *= s; }
  ComplexField operator-() const { return cplx(-1.0) * *this; }

  bool all_finite() const;

 private:
  GridPtr grid_;
  std::vector<cplx> coeffs_;
};

/// Throws StructuralError when the fields live on different grids.
void require_same_grid(const ComplexField& a, const ComplexField& b, const char* where);

/// Two-component vector (first, second): (f, g), (eta, psi), (w, z), (alpha, beta).
struct FieldPair {
  ComplexField first;
  ComplexField second;

  FieldPair& operator+=(const FieldPair& o) {
    first += o.first;
    second += o.second;
    return *this;
  }
  FieldPair& operator-=(const FieldPair& o) {
    first -= o.first;
    second -= o.second;
    return *this;
  }
  FieldPair& operator*=(cplx a) {
    first *= a;
    second *= a;
    return *this;
  }
  friend FieldPair operator+(FieldPair a, const FieldPair& b) { return a += b; }
  friend FieldPair operator-(FieldPair a, const FieldPair& b) { return a -= b; }
  friend FieldPair operator*(cplx s, FieldPair a) { return a *= s; }
};

FieldPair zero_pair(const GridPtr& grid);

/// Physical state (u, v = du/dt); both components Hermitian symmetric:
/// c_{-j} = conj(c_j).
struct RealPair {
  ComplexField u;
  ComplexField v;
};

/// State on the real subspace {(w, z) : z = conj(w)}. Only w is stored; in
/// coefficients z_j = conj(w_{-j}).
struct ConjugatePair {
  ComplexField w;

  ComplexField z() const;
  FieldPair expanded() const;
  /// Keeps the first component; the second is discarded.
  static ConjugatePair from_first(const FieldPair& p) { return {p.first}; }
};

/// Coefficients of the complex conjugate function: out_j = conj(f_{-j}).
ComplexField conj_mirror(const ComplexField& f);

/// max_j |f_j - conj(f_{-j})|, zero exactly for real-valued functions.
double hermitian_defect(const ComplexField& f);
/// Orthogonal projection onto real-valued functions: (f + conj_mirror(f)) / 2.
ComplexField hermitian_part(const ComplexField& f);

/// max_j |second_j - conj(first_{-j})|, zero on the real subspace.
double conjugate_defect(const FieldPair& p);

/// sqrt(sum_j |f_j|^2 |j|^{2s}); s must be nonnegative.
double sobolev_norm(const ComplexField& f, double s);
/// Pair norm: max of the two component norms (equal on the real subspace).
double sobolev_norm(const FieldPair& p, double s);
double max_abs(const ComplexField& f);
double max_abs(const FieldPair& p);

/// Fourier multiplier |j|^sigma.
ComplexField lambda_power(const ComplexField& f, double sigma);
FieldPair lambda_power(const FieldPair& p, double sigma);

/// <f, g> = sum_j f_j g_{-j}, the integral of the product of the two functions
/// (no conjugation).
cplx pairing(const ComplexField& f, const ComplexField& g);

enum class Symmetry { hermitian, free };

/// Deterministic random field rescaled to sobolev_norm(out, s) == target_norm.
/// Raw coefficients are complex Gaussians damped by |j|^{-(s+1)}.
ComplexField random_field(const GridPtr& grid, std::uint64_t seed, double target_norm,
                          double s, Symmetry symmetry);

}  // namespace kirchhoff
