#include "kirchhoff/normal_form_ops.hpp"

#include <cmath>
#include <string>

#include "kirchhoff/dense.hpp"
#include "kirchhoff/errors.hpp"

namespace kirchhoff {

namespace {

double a12_from_norms(int r, int rk) {
  if (r == rk) return 0.0;
  const double sj = std::sqrt(static_cast<double>(r));
  const double sk = std::sqrt(static_cast<double>(rk));
  // |j| - |k| = (|j|^2 - |k|^2) / (|j| + |k|)
  return r * (sj + sk) / (8.0 * static_cast<double>(r - rk));
}

double c12_from_norms(int r, int rk) {
  return r / (8.0 * (std::sqrt(static_cast<double>(r)) + std::sqrt(static_cast<double>(rk))));
}

int squared_norm(std::span<const int> j) {
  int n2 = 0;
  for (int c : j) n2 += c * c;
  return n2;
}

double pair_l2(const FieldPair& p) {
  const double a = sobolev_norm(p.first, 0.0);
  const double b = sobolev_norm(p.second, 0.0);
  return std::sqrt(a * a + b * b);
}

void require_grid(const NormalFormCoefficients& nf, const ComplexField& f, const char* where) {
  if (!f.grid_ptr() || !f.grid().same_as(nf.grid()))
    throw StructuralError(std::string(where) + ": field grid differs from coefficient grid");
}

}  // namespace

double coefficient(BilinearKind kind, std::span<const int> j, std::span<const int> k) {
  if (j.size() != k.size()) throw ParameterError("coefficient: modes of different dimension");
  const int r = squared_norm(j);
  const int rk = squared_norm(k);
  if (r == 0 || rk == 0) throw ParameterError("coefficient: zero mode");
  switch (kind) {
    case BilinearKind::A12:
    case BilinearKind::C21:
      return a12_from_norms(r, rk);
    case BilinearKind::C12:
    case BilinearKind::A21:
      return c12_from_norms(r, rk);
  }
  return 0.0;
}

NormalFormCoefficients::NormalFormCoefficients(GridPtr grid, bool corrupt_a12_sign)
    : grid_(std::move(grid)), nc_(grid_->classes().size()) {
  a_.resize(nc_ * nc_);
  c_.resize(nc_ * nc_);
  const auto& cls = grid_->classes();
  const double sign = corrupt_a12_sign ? -1.0 : 1.0;
  for (std::size_t cj = 0; cj < nc_; ++cj)
    for (std::size_t ck = 0; ck < nc_; ++ck) {
      a_[cj * nc_ + ck] = sign * a12_from_norms(cls[cj].norm2, cls[ck].norm2);
      c_[cj * nc_ + ck] = c12_from_norms(cls[cj].norm2, cls[ck].norm2);
    }
}

double NormalFormCoefficients::table(BilinearKind kind, std::size_t class_j, std::size_t class_k) const {
  switch (kind) {
    case BilinearKind::A12:
    case BilinearKind::C21:
      return a12(class_j, class_k);
    case BilinearKind::C12:
    case BilinearKind::A21:
      return c12(class_j, class_k);
  }
  return 0.0;
}

std::vector<cplx> NormalFormCoefficients::class_sums(const ComplexField& u, const ComplexField& v) const {
  require_grid(*this, u, "class_sums");
  require_grid(*this, v, "class_sums");
  const auto& g = *grid_;
  std::vector<cplx> sums(nc_, cplx(0.0));
  for (std::size_t c = 0; c < nc_; ++c) {
    const auto& rc = g.classes()[c];
    cplx acc = 0.0;
    for (std::size_t i = rc.begin; i < rc.end; ++i) acc += u[i] * v[g.negated(i)];
    sums[c] = acc;
  }
  return sums;
}

std::vector<cplx> NormalFormCoefficients::contract(BilinearKind kind, std::span<const cplx> sums) const {
  const bool use_a = kind == BilinearKind::A12 || kind == BilinearKind::C21;
  const auto& t = use_a ? a_ : c_;
  std::vector<cplx> out(nc_, cplx(0.0));
  for (std::size_t cj = 0; cj < nc_; ++cj) {
    const cplx s = sums[cj];
    if (s == cplx(0.0)) continue;
    const double* row = t.data() + cj * nc_;
    for (std::size_t ck = 0; ck < nc_; ++ck) out[ck] += row[ck] * s;
  }
  return out;
}

ComplexField apply_bilinear(const NormalFormCoefficients& nf, BilinearKind kind,
                            const ComplexField& u, const ComplexField& v, const ComplexField& h) {
  require_grid(nf, h, "apply_bilinear");
  const auto mult = nf.contract(kind, nf.class_sums(u, v));
  ComplexField out(h.grid_ptr());
  const auto& g = h.grid();
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = mult[g.class_of(i)] * h[i];
  return out;
}

CubicOperator::CubicOperator(const NormalFormCoefficients& nf, FieldPair base)
    : nf_(&nf), base_(std::move(base)) {
  const auto sww = nf.class_sums(base_.first, base_.first);
  const auto szz = nf.class_sums(base_.second, base_.second);
  m12_ = nf.contract(BilinearKind::A12, sww);
  m21_ = nf.contract(BilinearKind::A21, sww);
  const auto c12zz = nf.contract(BilinearKind::C12, szz);
  const auto c21zz = nf.contract(BilinearKind::C21, szz);
  for (std::size_t c = 0; c < m12_.size(); ++c) {
    m12_[c] += c12zz[c];
    m21_[c] += c21zz[c];
  }
}

FieldPair CubicOperator::apply_M(const FieldPair& x) const {
  require_grid(*nf_, x.first, "apply_M");
  require_grid(*nf_, x.second, "apply_M");
  const auto& g = nf_->grid();
  FieldPair out = zero_pair(x.first.grid_ptr());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t c = g.class_of(i);
    out.first[i] = m12_[c] * x.second[i];
    out.second[i] = m21_[c] * x.first[i];
  }
  return out;
}

FieldPair CubicOperator::apply_K(const FieldPair& x) const {
  FieldPair out = apply_M(x);
  const auto swa = nf_->class_sums(base_.first, x.first);
  const auto szb = nf_->class_sums(base_.second, x.second);
  const auto a12 = nf_->contract(BilinearKind::A12, swa);
  const auto c12 = nf_->contract(BilinearKind::C12, szb);
  const auto a21 = nf_->contract(BilinearKind::A21, swa);
  const auto c21 = nf_->contract(BilinearKind::C21, szb);
  const auto& g = nf_->grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t c = g.class_of(i);
    out.first[i] += 2.0 * (a12[c] + c12[c]) * base_.second[i];
    out.second[i] += 2.0 * (a21[c] + c21[c]) * base_.first[i];
  }
  return out;
}

FieldPair CubicOperator::solve_I_plus_K(const FieldPair& rhs, SolveMethod method, SolveStats* stats) const {
  const double rhs_norm = pair_l2(rhs);
  SolveStats local;
  FieldPair x = rhs;
  if (rhs_norm == 0.0) {
    if (stats) *stats = local;
    return x;
  }

  if (method == SolveMethod::dense) {
    x = dense_solve([this](const FieldPair& v) { return v + apply_K(v); }, rhs);
  } else {
    FieldPair term = rhs;
    double prev = rhs_norm;
    int non_decreasing = 0;
    constexpr int kMaxTerms = 2000;
    for (int n = 1;; ++n) {
      if (n > kMaxTerms)
        throw ConvergenceError("solve_I_plus_K: Neumann series did not converge in 2000 terms");
      term = apply_K(term);
      term *= -1.0;
      x += term;
      local.terms = n;
      const double tn = pair_l2(term);
      if (tn <= 1e-15 * pair_l2(x)) break;
      if (!std::isfinite(tn) || tn >= prev) {
        if (++non_decreasing >= 5 || !std::isfinite(tn))
          throw ConvergenceError("solve_I_plus_K: Neumann series diverges (term norms not decreasing)");
      } else {
        non_decreasing = 0;
      }
      prev = tn;
    }
  }

  local.residual = pair_l2(x + apply_K(x) - rhs) / rhs_norm;
  if (!(local.residual <= 1e-10))
    throw ConvergenceError("solve_I_plus_K: residual " + std::to_string(local.residual) +
                           " exceeds 1e-10");
  if (stats) *stats = local;
  return x;
}

FieldPair apply_M(const NormalFormCoefficients& nf, const FieldPair& wz, const FieldPair& x) {
  return CubicOperator(nf, wz).apply_M(x);
}

FieldPair apply_K(const NormalFormCoefficients& nf, const FieldPair& wz, const FieldPair& x) {
  return CubicOperator(nf, wz).apply_K(x);
}

FieldPair solve_I_plus_K(const NormalFormCoefficients& nf, const FieldPair& wz, const FieldPair& rhs,
                         SolveMethod method, SolveStats* stats) {
  return CubicOperator(nf, wz).solve_I_plus_K(rhs, method, stats);
}

FieldPair phi4_forward(const NormalFormCoefficients& nf, const FieldPair& wz) {
  return wz + CubicOperator(nf, wz).self_image();
}

ConjugatePair phi4_forward(const NormalFormCoefficients& nf, const ConjugatePair& w) {
  const FieldPair wz = w.expanded();
  return {w.w + CubicOperator(nf, wz).self_image().first};
}

ConjugatePair phi4_inverse(const NormalFormCoefficients& nf, const ConjugatePair& eta,
                           const Phi4InverseOptions& options, int* iterations) {
  const double m0 = nf.grid().m0();
  const double eta_norm = sobolev_norm(eta.w, m0);
  if (!(eta_norm <= options.ball_radius))
    throw DomainError("phi4_inverse: ||eta||_{m0} = " + std::to_string(eta_norm) +
                      " exceeds the inversion ball radius " + std::to_string(options.ball_radius));
  ConjugatePair w{ComplexField(eta.w.grid_ptr())};
  if (iterations) *iterations = 0;
  if (eta_norm == 0.0) return w;

  double prev_diff = 0.0;
  int growth = 0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    ConjugatePair next{eta.w - CubicOperator(nf, w.expanded()).self_image().first};
    const double diff = sobolev_norm(next.w - w.w, m0);
    w = std::move(next);
    if (iterations) *iterations = it;
    if (diff <= options.rel_tol * eta_norm) return w;
    if (!std::isfinite(diff))
      throw ConvergenceError("phi4_inverse: fixed point iteration produced non-finite values");
    if (it > 1 && diff >= prev_diff) {
      if (++growth >= 3)
        throw ConvergenceError("phi4_inverse: fixed point map is not contracting");
    } else {
      growth = 0;
    }
    prev_diff = diff;
  }
  throw ConvergenceError("phi4_inverse: no convergence within " +
                         std::to_string(options.max_iterations) + " iterations");
}

}  // namespace kirchhoff
