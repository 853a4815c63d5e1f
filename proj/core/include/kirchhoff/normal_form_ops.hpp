#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kirchhoff/complex_field.hpp"

namespace kirchhoff {

/// The four bilinear maps of the normal form step. A21 shares the C12
/// coefficients and C21 shares the A12 coefficients.
enum class BilinearKind { A12, C12, A21, C21 };

/// a12(j,k) = |j|^2 / (8(|j| - |k|)) for |j| != |k| and 0 on resonant pairs;
/// c12(j,k) = |j|^2 / (8(|j| + |k|)). For A21/C21 the C12/A12 value is
/// returned. Throws ParameterError on a zero mode or mismatched dimensions.
double coefficient(BilinearKind kind, std::span<const int> j, std::span<const int> k);

/// Static coefficient tables for one grid, indexed by resonance class.
///
/// Coefficients depend on j and k only through |j|^2 and |k|^2, so every
/// bilinear map reduces to class sums S_c = sum_{j in c} u_j v_{-j} followed
/// by a (classes x classes) contraction. The divisor |j| - |k| is evaluated
/// as (|j|^2 - |k|^2) / (|j| + |k|) with an exact integer numerator.
class NormalFormCoefficients {
 public:
  /// corrupt_a12_sign flips every a12 entry; negative control for the
  /// verification harness only.
  explicit NormalFormCoefficients(GridPtr grid, bool corrupt_a12_sign = false);

  const GridPtr& grid_ptr() const { return grid_; }
  const SpectralGrid& grid() const { return *grid_; }
  std::size_t num_classes() const { return nc_; }

  double a12(std::size_t class_j, std::size_t class_k) const { return a_[class_j * nc_ + class_k]; }
  double c12(std::size_t class_j, std::size_t class_k) const { return c_[class_j * nc_ + class_k]; }
  double table(BilinearKind kind, std::size_t class_j, std::size_t class_k) const;

  /// S_c = sum_{j in class c} u_j v_{-j}.
  std::vector<cplx> class_sums(const ComplexField& u, const ComplexField& v) const;
  /// out[c_k] = sum_c table(kind, c, c_k) * sums[c].
  std::vector<cplx> contract(BilinearKind kind, std::span<const cplx> sums) const;

 private:
  GridPtr grid_;
  std::size_t nc_;
  std::vector<double> a_;
  std::vector<double> c_;
};

/// kind[u, v] h = sum_{j,k} u_j v_{-j} coeff(j, k) h_k e^{ik.x}.
ComplexField apply_bilinear(const NormalFormCoefficients& nf, BilinearKind kind,
                            const ComplexField& u, const ComplexField& v, const ComplexField& h);

enum class SolveMethod { neumann, dense };

struct SolveStats {
  int terms = 0;
  double residual = 0.0;  ///< ||(I+K)x - rhs|| / ||rhs||, L2 over both components
};

/// M(w,z) and K(w,z) frozen at one base point (w, z).
///
/// M(w,z) = [[0, A12[w,w] + C12[z,z]], [A21[w,w] + C21[z,z], 0]] is an
/// off-diagonal pair of per-class multipliers; K(w,z) = M(w,z) + E(w,z) is
/// the derivative of (w,z) -> M(w,z)(w,z).
class CubicOperator {
 public:
  CubicOperator(const NormalFormCoefficients& nf, FieldPair base);

  const FieldPair& base() const { return base_; }

  FieldPair apply_M(const FieldPair& x) const;
  FieldPair apply_K(const FieldPair& x) const;
  /// M(w,z)(w,z).
  FieldPair self_image() const { return apply_M(base_); }

  /// Solves (I + K)x = rhs.
  ///
  /// neumann sums (-K)^n rhs until a term falls below 1e-15 relative to the
  /// partial sum; five consecutive non-decreasing term norms raise
  /// ConvergenceError. dense assembles the full matrix; a singular matrix
  /// raises NumericalError. Both paths verify the residual.
  FieldPair solve_I_plus_K(const FieldPair& rhs, SolveMethod method = SolveMethod::neumann,
                           SolveStats* stats = nullptr) const;

 private:
  const NormalFormCoefficients* nf_;
  FieldPair base_;
  std::vector<cplx> m12_;  // per class multiplier of A12[w,w] + C12[z,z]
  std::vector<cplx> m21_;  // per class multiplier of A21[w,w] + C21[z,z]
};

FieldPair apply_M(const NormalFormCoefficients& nf, const FieldPair& wz, const FieldPair& x);
FieldPair apply_K(const NormalFormCoefficients& nf, const FieldPair& wz, const FieldPair& x);
FieldPair solve_I_plus_K(const NormalFormCoefficients& nf, const FieldPair& wz, const FieldPair& rhs,
                         SolveMethod method = SolveMethod::neumann, SolveStats* stats = nullptr);

/// (eta, psi) = (I + M(w,z))(w,z).
FieldPair phi4_forward(const NormalFormCoefficients& nf, const FieldPair& wz);
ConjugatePair phi4_forward(const NormalFormCoefficients& nf, const ConjugatePair& w);

struct Phi4InverseOptions {
  double ball_radius = 0.25;  ///< admissible ||eta||_{m0}
  double rel_tol = 1e-13;     ///< stop when ||w_{n+1} - w_n||_{m0} <= rel_tol ||eta||_{m0}
  int max_iterations = 200;
};

/// Fixed point w = eta - [M(w, conj w)(w, conj w)]_1 started from w = 0.
/// Throws DomainError outside the ball and ConvergenceError when the
/// iteration stops contracting or hits the iteration cap.
ConjugatePair phi4_inverse(const NormalFormCoefficients& nf, const ConjugatePair& eta,
                           const Phi4InverseOptions& options = {}, int* iterations = nullptr);

}  // namespace kirchhoff
