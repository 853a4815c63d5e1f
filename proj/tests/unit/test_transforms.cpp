#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "kirchhoff/dense.hpp"
#include "kirchhoff/errors.hpp"
#include "kirchhoff/transforms.hpp"
#include "kirchhoff/vector_fields.hpp"

using namespace kt;

namespace {

std::vector<GridPtr> grids() {
  return {SpectralGrid::make(1, 4), SpectralGrid::make(1, 8), SpectralGrid::make(2, 4),
          SpectralGrid::make(2, 8)};
}

using V = std::vector<int>;

}  // namespace

TEST_CASE("coefficient examples") {
  CHECK(coefficient(BilinearKind::A12, V{1}, V{2}) == -0.125);
  CHECK(coefficient(BilinearKind::A12, V{3, 4}, V{5, 0}) == 0.0);
  CHECK(coefficient(BilinearKind::C12, V{1}, V{1}) == 0.0625);
  CHECK(coefficient(BilinearKind::A21, V{2}, V{3}) == coefficient(BilinearKind::C12, V{2}, V{3}));
  CHECK(coefficient(BilinearKind::C21, V{2}, V{3}) == coefficient(BilinearKind::A12, V{2}, V{3}));
  // near resonance in the plane: |j|^2 = 50, |k|^2 = 49
  const double expected = 50.0 / (8.0 * (std::sqrt(50.0) - 7.0));
  CHECK(coefficient(BilinearKind::A12, V{5, 5}, V{7, 0}) == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(coefficient(BilinearKind::A12, V{0}, V{1}), ParameterError);
  CHECK_THROWS_AS(coefficient(BilinearKind::C12, V{1, 0}, V{1}), ParameterError);
}

TEST_CASE("class tables match the pointwise coefficients") {
  auto g = SpectralGrid::make(2, 6);
  NormalFormCoefficients nf(g);
  for (std::size_t i = 0; i < g->size(); i += 5)
    for (std::size_t k = 0; k < g->size(); k += 3)
      for (auto kind : {BilinearKind::A12, BilinearKind::C12, BilinearKind::A21, BilinearKind::C21})
        CHECK(nf.table(kind, g->class_of(i), g->class_of(k)) == coefficient(kind, g->mode(i), g->mode(k)));
}

TEST_CASE("apply_bilinear examples") {
  auto g = SpectralGrid::make(1, 4);
  NormalFormCoefficients nf(g);
  auto h = random_field(g, 1, 1.0, 0.0, Symmetry::free);
  CHECK(max_abs(apply_bilinear(nf, BilinearKind::A12, ComplexField(g), h, h)) == 0.0);
  ComplexField u = ComplexField::delta(g, V{1});
  ComplexField v = ComplexField::delta(g, V{-1});
  ComplexField e = ComplexField::delta(g, V{2});
  auto out = apply_bilinear(nf, BilinearKind::A12, u, v, e);
  CHECK(out.at(V{2}) == cplx(-0.125));
  CHECK(max_abs(out) == 0.125);

  // brute force double sum on a 2d grid
  auto g2 = SpectralGrid::make(2, 4);
  NormalFormCoefficients nf2(g2);
  auto a = random_field(g2, 2, 1.0, 1.0, Symmetry::free);
  auto b = random_field(g2, 3, 1.0, 1.0, Symmetry::free);
  auto y = random_field(g2, 4, 1.0, 1.0, Symmetry::free);
  for (auto kind : {BilinearKind::A12, BilinearKind::C12}) {
    ComplexField brute(g2);
    for (std::size_t k = 0; k < g2->size(); ++k)
      for (std::size_t j = 0; j < g2->size(); ++j)
        brute[k] += a[j] * b[g2->negated(j)] * coefficient(kind, g2->mode(j), g2->mode(k)) * y[k];
    CHECK(max_abs(apply_bilinear(nf2, kind, a, b, y) - brute) <= 1e-14);
    CHECK(max_abs(apply_bilinear(nf2, kind, a, b, y) - apply_bilinear(nf2, kind, b, a, y)) <= 1e-15);
  }
}

TEST_CASE("operator identities of the bilinear maps") {
  for (const auto& g : grids()) {
    NormalFormCoefficients nf(g);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto u = random_field(g, seed, 1.0, 1.0, Symmetry::free);
      auto v = random_field(g, seed + 50, 1.0, 1.0, Symmetry::free);
      auto y = random_field(g, seed + 100, 1.0, 0.0, Symmetry::free);
      auto h = random_field(g, seed + 150, 1.0, 0.0, Symmetry::free);
      for (auto kind : {BilinearKind::A12, BilinearKind::C12}) {
        const cplx l = pairing(apply_bilinear(nf, kind, u, v, y), h);
        const cplx r = pairing(y, apply_bilinear(nf, kind, u, v, h));
        CHECK(std::abs(l - r) <= 1e-13 * std::max(1.0, std::abs(l)));
        CHECK(max_abs(conj_mirror(apply_bilinear(nf, kind, u, v, y)) -
                      apply_bilinear(nf, kind, conj_mirror(u), conj_mirror(v), conj_mirror(y))) <= 1e-15);
        for (double s : {0.5, 2.5})
          CHECK(max_abs(apply_bilinear(nf, kind, u, v, lambda_power(y, s)) -
                        lambda_power(apply_bilinear(nf, kind, u, v, y), s)) <= 1e-13);
      }
      // M12(w,z) = M21(z,w)
      const FieldPair wz{u, v}, zw{v, u};
      const ComplexField zero(g);
      const auto m12 = CubicOperator(nf, wz).apply_M({zero, h}).first;
      const auto m21 = CubicOperator(nf, zw).apply_M({h, zero}).second;
      CHECK(max_abs(m12 - m21) == 0.0);
    }
  }
}

TEST_CASE("M block structure and commutation") {
  auto g = SpectralGrid::make(2, 6);
  NormalFormCoefficients nf(g);
  CubicOperator zero_op(nf, zero_pair(g));
  auto x = random_free_pair(g, 1, 1.0, 0.0);
  CHECK(max_abs(zero_op.apply_M(x)) == 0.0);
  CHECK(max_abs(zero_op.apply_K(x)) == 0.0);
  CubicOperator op(nf, random_pair(g, 2, 0.3).expanded());
  auto only_first = op.apply_M({x.first, ComplexField(g)});
  CHECK(max_abs(only_first.first) == 0.0);
  for (double s : {1.0, 2.5})
    CHECK(max_abs(op.apply_M(lambda_power(x, s)) - lambda_power(op.apply_M(x), s)) <= 1e-13);
}

TEST_CASE("K is the derivative of the cubic map") {
  // (w,z) -> M(w,z)(w,z) is cubic, so the four point stencil is exact up to rounding
  for (const auto& g : grids()) {
    NormalFormCoefficients nf(g);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto wz = random_free_pair(g, seed, 0.3, g->m0());
      auto ab = random_free_pair(g, seed + 9, 0.3, g->m0());
      auto cube = [&](double t) { return CubicOperator(nf, wz + cplx(t) * ab).self_image(); };
      const double h = 0.25;
      FieldPair fd = cplx(1.0 / (12.0 * h)) * (cplx(8.0) * (cube(h) - cube(-h)) - (cube(2 * h) - cube(-2 * h)));
      const auto k = CubicOperator(nf, wz).apply_K(ab);
      CHECK(diff(fd, k) <= 1e-13 * std::max(1.0, max_abs(k)));
    }
  }
}

TEST_CASE("norm bounds of the normal form operators") {
  for (const auto& g : grids()) {
    NormalFormCoefficients nf(g);
    const double m0 = g->m0();
    double worst_a = 0, worst_c = 0, worst_m = 0, worst_k = 0;
    for (std::uint64_t seed = 1; seed <= 250; ++seed) {
      // damping s varies so both smooth and rough samples appear
      const double su = 0.25 * double(seed % 9);
      auto u = random_field(g, seed, 1.0, su, Symmetry::free);
      auto v = random_field(g, seed + 1, 1.0, su, Symmetry::free);
      auto h = random_field(g, seed + 2, 1.0, 0.5 * double(seed % 5), Symmetry::free);
      for (double s : {0.0, 1.0, 2.5}) {
        worst_a = std::max(worst_a, sobolev_norm(apply_bilinear(nf, BilinearKind::A12, u, v, h), s) /
                                        (sobolev_norm(u, m0) * sobolev_norm(v, m0) * sobolev_norm(h, s)));
        worst_c = std::max(worst_c, sobolev_norm(apply_bilinear(nf, BilinearKind::C12, u, v, h), s) /
                                        (sobolev_norm(u, 1.0) * sobolev_norm(v, 1.0) * sobolev_norm(h, s)));
      }
      auto w = ConjugatePair{random_field(g, seed + 3, 0.45, su, Symmetry::free)};
      auto a = ConjugatePair{random_field(g, seed + 4, 1.0, su, Symmetry::free)};
      CubicOperator op(nf, w.expanded());
      const double wm0 = sobolev_norm(w.w, m0);
      for (double s : {0.0, m0, 2.5}) {
        worst_m = std::max(worst_m, sobolev_norm(op.apply_M(a.expanded()), s) /
                                        (7.0 / 16.0 * wm0 * wm0 * sobolev_norm(a.w, s)));
        const double kb = 7.0 / 16.0 * wm0 * wm0 * sobolev_norm(a.w, s) +
                          7.0 / 8.0 * wm0 * sobolev_norm(w.w, s) * sobolev_norm(a.w, m0);
        worst_k = std::max(worst_k, sobolev_norm(op.apply_K(a.expanded()), s) / kb);
      }
    }
    MESSAGE("d=" << g->dim() << " N=" << g->cutoff() << " A12 ratio " << worst_a << " C12 ratio " << worst_c
                 << " M " << worst_m << " K " << worst_k);
    CHECK(worst_a <= 3.0 / 8.0);
    CHECK(worst_c <= 1.0 / 16.0);
    CHECK(worst_m <= 1.0);
    CHECK(worst_k <= 1.0);
  }
}

TEST_CASE("small divisor bound over all squared norms up to 2500") {
  for (int d : {2, 3}) {
    std::set<int> norms;
    for (int a = 0; a <= 50; ++a)
      for (int b = 0; b <= 50; ++b)
        for (int c = 0; c <= (d == 3 ? 50 : 0); ++c) {
          const int n2 = a * a + b * b + c * c;
          if (n2 >= 1 && n2 <= 2500) norms.insert(n2);
        }
    const std::vector<int> list(norms.begin(), norms.end());
    long violations = 0, pairs = 0;
    for (int r : list)
      for (int rk : list) {
        if (r == rk) continue;
        ++pairs;
        const double sj = std::sqrt(double(r)), sk = std::sqrt(double(rk));
        // 1/||j|-|k|| = (|j|+|k|)/||j|^2-|k|^2|
        if ((sj + sk) / std::abs(double(r - rk)) > 3.0 * sj) ++violations;
      }
    CHECK(pairs > 500000);
    CHECK(violations == 0);
  }
}

TEST_CASE("solving I + K") {
  for (const auto& g : grids()) {
    NormalFormCoefficients nf(g);
    auto rhs = random_free_pair(g, 3, 1.0, 0.0);
    CubicOperator zero_op(nf, zero_pair(g));
    CHECK(diff(zero_op.solve_I_plus_K(rhs), rhs) == 0.0);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      for (double r : {0.3, 0.4}) {
        CubicOperator op(nf, random_pair(g, seed, r).expanded());
        SolveStats st;
        auto x = op.solve_I_plus_K(rhs, SolveMethod::neumann, &st);
        CHECK(diff(x + op.apply_K(x), rhs) <= 1e-12 * max_abs(rhs));
        CHECK(st.residual <= 1e-12);
        auto xd = op.solve_I_plus_K(rhs, SolveMethod::dense);
        CHECK(diff(x, xd) <= 1e-10 * max_abs(x));
      }
    }
  }
}

TEST_CASE("Neumann divergence is reported") {
  auto g = SpectralGrid::make(2, 6);
  NormalFormCoefficients nf(g);
  CubicOperator op(nf, random_pair(g, 1, 20.0).expanded());
  CHECK_THROWS_AS(op.solve_I_plus_K(random_free_pair(g, 2, 1.0, 0.0)), ConvergenceError);
}

TEST_CASE("Q and P") {
  auto g = SpectralGrid::make(1, 4);
  ConjugatePair zero{ComplexField(g)};
  CHECK(q_value(zero) == 0.0);
  CHECK(p_value(zero) == 0.0);
  ComplexField f(g);
  f.at(V{1}) = 0.5;
  f.at(V{-1}) = 0.5;
  CHECK(q_functional({f, f}) == cplx(0.5));
  CHECK(q_value(ConjugatePair{f}) == 0.5);
  // Q = sqrt3 gives P = 1
  ConjugatePair s{cplx(std::sqrt(std::sqrt(3.0) / 0.5)) * f};
  CHECK(std::abs(q_value(s) - std::sqrt(3.0)) <= 1e-15);
  CHECK(std::abs(p_value(s) - 1.0) <= 1e-15);

  auto g2 = SpectralGrid::make(2, 6);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto p = random_pair(g2, seed, 0.01 * double(seed % 100));
    const double q = q_value(p);
    CHECK(q >= 0.0);
    CHECK(std::abs(q_functional(p.expanded()) - cplx(q)) <= 1e-14 * std::max(1.0, q));
    const double pp = p_value(p);
    CHECK(pp <= q);
    CHECK(std::abs(pp * std::sqrt(1 + 2 * pp) - q) <= 1e-13 * std::max(1.0, q));
  }
}

TEST_CASE("Phi1 and Phi2") {
  auto g = SpectralGrid::make(1, 5);
  ComplexField q = ComplexField::delta(g, V{4});
  RealPair uv = phi1_forward({q, ComplexField(g)});
  CHECK(uv.u.at(V{4}) == cplx(0.5));
  CHECK(max_abs(uv.v) == 0.0);
  auto g2 = SpectralGrid::make(2, 6);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto r = random_real(g2, seed, 1.0, 1.0);
    CHECK(diff(phi1_forward(phi1_inverse(r)), r) <= 1e-15);
    CHECK(diff(phi1_inverse(phi1_forward(r)), r) <= 1e-15);
    auto f = phi2_inverse(r);
    const auto fg = f.expanded();
    const auto fg_direct = phi2_inverse(FieldPair{r.u, r.v});
    CHECK(diff(fg_direct, fg) <= 1e-15);
    CHECK(conjugate_defect(fg_direct) <= 1e-15);
    CHECK(diff(phi2_forward(f), r) <= 1e-15);
    auto back = phi2_forward(f);
    CHECK(hermitian_defect(back.u) <= 1e-16);
    auto free = random_free_pair(g2, seed, 1.0, 0.0);
    CHECK(diff(phi2_forward(phi2_inverse(free)), free) <= 1e-15);
  }
  RealPair qonly{random_field(g2, 3, 1.0, 0.0, Symmetry::hermitian), ComplexField(g2)};
  auto f = phi2_inverse(qonly).expanded();
  CHECK(diff(f.first, cplx(1.0 / std::sqrt(2.0)) * qonly.u) <= 1e-16);
  CHECK(diff(f.second, f.first) <= 1e-16);
}

TEST_CASE("Phi3") {
  auto g = SpectralGrid::make(2, 6);
  ConjugatePair zero{ComplexField(g)};
  CHECK(max_abs(phi3_forward(zero).w) == 0.0);
  CHECK(max_abs(phi3_inverse(zero).w) == 0.0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    ConjugatePair eta{random_field(g, seed, 0.005 * double(seed % 200 + 1), 1.0, Symmetry::free)};
    auto f = phi3_forward(eta);
    CHECK(diff(phi3_inverse(f).w, eta.w) <= 1e-12 * std::max(1.0, max_abs(eta.w)));
    const double qf = q_value(f);
    CHECK(std::abs(qf * std::sqrt(1 + 2 * qf) - q_value(eta)) <= 1e-12 * std::max(1.0, q_value(eta)));
    CHECK(std::abs(qf - p_value(eta)) <= 1e-13 * std::max(1.0, qf));
  }
}

TEST_CASE("script K closed form against a dense solve") {
  for (const auto& g : grids()) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto eta = random_pair(g, seed, 0.6);
      auto rhs = random_free_pair(g, seed + 3, 1.0, 0.0);
      const auto closed = solve_I_plus_script_K(eta, rhs);
      const auto dense = dense_solve([&](const FieldPair& x) { return x + apply_script_K(eta, x); }, rhs);
      CHECK(diff(closed, dense) <= 1e-11 * max_abs(dense));
      CHECK(diff(closed + apply_script_K(eta, closed), rhs) <= 1e-13 * max_abs(rhs));
    }
  }
}

TEST_CASE("Phi4") {
  for (const auto& g : grids()) {
    NormalFormCoefficients nf(g);
    ConjugatePair zero{ComplexField(g)};
    CHECK(max_abs(phi4_forward(nf, zero).w) == 0.0);
    CHECK(max_abs(phi4_inverse(nf, zero).w) == 0.0);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      auto w = random_pair(g, seed, 0.2 * double(seed % 10 + 1) / 10.0);
      auto eta = phi4_forward(nf, w);
      CHECK(max_abs(phi4_inverse(nf, eta).w - w.w) <= 1e-12 * std::max(1.0, max_abs(w.w)));

      ConjugatePair e2{random_field(g, seed + 500, 0.249 * double(seed % 10 + 1) / 10.0, g->m0(), Symmetry::free)};
      auto back = phi4_inverse(nf, e2);
      for (double s : {g->m0(), g->m0() + 1.0, 3.0})
        CHECK(sobolev_norm(back.w, s) <= 2.0 * sobolev_norm(e2.w, s));
    }
    ConjugatePair big{random_field(g, 1, 0.26, g->m0(), Symmetry::free)};
    CHECK_THROWS_AS(phi4_inverse(nf, big), DomainError);
  }
}

TEST_CASE("full composition") {
  for (const auto& g : grids()) {
    NormalFormCoefficients nf(g);
    ConjugatePair zero{ComplexField(g)};
    auto uz = compose_forward(nf, zero);
    CHECK(max_abs(uz.u) == 0.0);
    CHECK(max_abs(uz.v) == 0.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto uv = random_real(g, seed, 0.03, 0.03);
      TransformChainState chain;
      auto w = compose_inverse(nf, uv, &chain);
      CHECK(conjugate_defect(chain.fg.expanded()) == 0.0);
      CHECK(hermitian_defect(chain.qp.u) == 0.0);
      auto again = compose_forward(nf, w);
      CHECK(diff(again, uv) <= 1e-11);
      CHECK(hermitian_defect(again.u) <= 1e-17);

      auto w0 = random_pair(g, seed, 0.04);
      auto uv0 = compose_forward(nf, w0);
      CHECK(diff(compose_inverse(nf, uv0).w, w0.w) <= 1e-11);
    }
    CHECK_THROWS_AS(compose_forward(nf, random_pair(g, 1, 0.11)), DomainError);
    CHECK_THROWS_AS(compose_inverse(nf, random_real(g, 1, 0.06, 0.06)), DomainError);
  }
  auto g = SpectralGrid::make(1, 4);
  NormalFormCoefficients nf(g);
  TransformChainState chain;
  compose_forward(nf, random_pair(g, 2, 0.05), &chain);
  const auto js = chain.to_json();
  CHECK(js.find("\"eta\"") != std::string::npos);
  CHECK(js.find("\"u\"") != std::string::npos);
}
