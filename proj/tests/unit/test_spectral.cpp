#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "kirchhoff/errors.hpp"
#include "kirchhoff/field_json.hpp"

using namespace kt;

TEST_CASE("grid construction invariants") {
  for (int d = 1; d <= 3; ++d) {
    for (int n = 1; n <= 12; ++n) {
      const auto g = SpectralGrid::make(d, n);
      std::size_t counted = 0;
      int prev_norm = 0;
      for (std::size_t c = 0; c < g->classes().size(); ++c) {
        const auto& rc = g->classes()[c];
        CHECK(rc.norm2 > prev_norm);
        prev_norm = rc.norm2;
        for (std::size_t i = rc.begin; i < rc.end; ++i) {
          REQUIRE(g->norm2(i) == rc.norm2);
          REQUIRE(g->class_of(i) == c);
        }
        counted += rc.size();
      }
      CHECK(counted == g->size());
      for (std::size_t i = 0; i < g->size(); ++i) {
        const auto j = g->mode(i);
        int n2 = 0;
        bool zero = true;
        for (int c : j) {
          n2 += c * c;
          zero = zero && c == 0;
        }
        REQUIRE_FALSE(zero);
        REQUIRE(n2 <= n * n);
        const auto neg = g->mode(g->negated(i));
        for (int c = 0; c < d; ++c) REQUIRE(neg[c] == -j[c]);
        REQUIRE(g->find(j) == i);
      }
    }
  }
}

TEST_CASE("grid counts and ordering") {
  CHECK(SpectralGrid::make(1, 8)->size() == 16);
  // lattice points with 1 <= |j|^2 <= 4 in the plane: 4 + 4 + 4
  CHECK(SpectralGrid::make(2, 2)->size() == 12);
  const auto g = SpectralGrid::make(2, 5);
  for (std::size_t i = 1; i < g->size(); ++i) {
    const auto a = g->mode(i - 1);
    const auto b = g->mode(i);
    const bool ordered = g->norm2(i - 1) < g->norm2(i) ||
                         (g->norm2(i - 1) == g->norm2(i) && std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
    REQUIRE(ordered);
  }
  // (3,4), (5,0) and friends share a class
  const auto c = g->class_of(*g->find(std::vector<int>{3, 4}));
  CHECK(g->class_of(*g->find(std::vector<int>{5, 0})) == c);
  CHECK(g->classes()[c].size() == 12);
  CHECK(g->m0() == 1.5);
  CHECK(SpectralGrid::make(1, 3)->m0() == 1.0);
  CHECK_THROWS_AS(SpectralGrid(0, 3), ParameterError);
  CHECK_THROWS_AS(SpectralGrid(4, 3), ParameterError);
  CHECK_THROWS_AS(SpectralGrid(2, 0), ParameterError);
}

TEST_CASE("sobolev norm examples") {
  const auto g = SpectralGrid::make(1, 4);
  CHECK(sobolev_norm(ComplexField(g), 2.0) == 0.0);
  ComplexField f(g);
  f.at(std::vector<int>{1}) = 1.0;
  f.at(std::vector<int>{-1}) = 1.0;
  for (double s : {0.0, 0.7, 3.0}) CHECK(sobolev_norm(f, s) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  ComplexField h(g);
  h.at(std::vector<int>{2}) = 1.0;
  h.at(std::vector<int>{-2}) = 1.0;
  CHECK(std::abs(sobolev_norm(h, 1.5) - 4.0) <= 1e-14);
  CHECK_THROWS_AS(sobolev_norm(h, -0.1), ParameterError);
}

TEST_CASE("norm monotonicity in s") {
  const auto g = SpectralGrid::make(2, 6);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto f = random_field(g, seed, 1.0, 1.0, Symmetry::free);
    double prev = 0.0;
    for (double s : {0.0, 0.5, 1.0, 1.5, 2.5, 4.0}) {
      const double n = sobolev_norm(f, s);
      CHECK(n >= prev);
      prev = n;
    }
  }
}

TEST_CASE("lambda power") {
  const auto g = SpectralGrid::make(1, 4);
  auto f = random_field(g, 3, 1.0, 0.0, Symmetry::free);
  CHECK(max_abs(lambda_power(f, 0.0) - f) == 0.0);
  ComplexField d = ComplexField::delta(g, std::vector<int>{2});
  CHECK(std::abs(lambda_power(d, 0.5).at(std::vector<int>{2}) - std::sqrt(2.0)) <= 1e-15);
  const auto g2 = SpectralGrid::make(3, 4);
  auto r = random_field(g2, 11, 1.0, 0.0, Symmetry::free);
  CHECK(max_abs(lambda_power(lambda_power(r, 0.5), -0.5) - r) <= 1e-15);
}

TEST_CASE("pairing examples and properties") {
  const auto g = SpectralGrid::make(1, 4);
  CHECK(pairing(ComplexField(g), ComplexField(g)) == cplx(0.0));
  ComplexField f(g);
  f.at(std::vector<int>{1}) = 1.0;
  f.at(std::vector<int>{-1}) = 1.0;
  CHECK(pairing(f, f) == cplx(2.0));
  ComplexField s(g);
  s.at(std::vector<int>{1}) = cplx(0, 1);
  s.at(std::vector<int>{-1}) = cplx(0, -1);
  CHECK(pairing(s, s) == cplx(2.0));

  const auto g2 = SpectralGrid::make(2, 6);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto a = random_field(g2, seed, 1.0, 0.0, Symmetry::free);
    auto b = random_field(g2, seed + 1000, 1.0, 0.0, Symmetry::free);
    CHECK(std::abs(pairing(a, b) - pairing(b, a)) <= 1e-15);
    for (double sig : {0.5, 1.0, 2.5}) {
      const cplx l = pairing(lambda_power(a, sig), b);
      const cplx r = pairing(a, lambda_power(b, sig));
      CHECK(std::abs(l - r) <= 1e-13 * std::abs(l));
    }
    auto h = random_field(g2, seed, 1.0, 0.0, Symmetry::hermitian);
    const cplx hh = pairing(h, conj_mirror(h));
    CHECK(std::abs(hh - cplx(std::pow(sobolev_norm(h, 0.0), 2))) <= 1e-14);
  }
  CHECK_THROWS_AS(pairing(ComplexField(g), ComplexField(g2)), StructuralError);
}

TEST_CASE("random field contract") {
  const auto g = SpectralGrid::make(2, 5);
  CHECK(max_abs(random_field(g, 1, 0.0, 1.0, Symmetry::free)) == 0.0);
  CHECK(max_abs(random_field(g, 9, 1.0, 1.5, Symmetry::free) - random_field(g, 9, 1.0, 1.5, Symmetry::free)) == 0.0);
  auto f = random_field(g, 1, 0.3, g->m0(), Symmetry::hermitian);
  CHECK(std::abs(sobolev_norm(f, g->m0()) - 0.3) <= 0.3e-12);
  CHECK(hermitian_defect(f) == 0.0);
  CHECK(hermitian_defect(random_field(g, 1, 0.3, 1.0, Symmetry::free)) > 0.0);
  CHECK_THROWS_AS(random_field(g, 1, -1.0, 1.0, Symmetry::free), ParameterError);
}

TEST_CASE("conjugate pair reconstruction") {
  const auto g = SpectralGrid::make(2, 4);
  ConjugatePair p{random_field(g, 2, 1.0, 1.0, Symmetry::free)};
  const auto e = p.expanded();
  CHECK(conjugate_defect(e) == 0.0);
  for (std::size_t i = 0; i < g->size(); ++i) CHECK(e.second[i] == std::conj(e.first[g->negated(i)]));
}

TEST_CASE("json round trip is bit exact") {
  for (int d = 1; d <= 3; ++d) {
    const auto g = SpectralGrid::make(d, 4);
    auto f = random_field(g, 77, 0.123456789, 1.0, Symmetry::free);
    auto back = field_from_json(field_to_json(f));
    REQUIRE(back.size() == f.size());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]);
  }
  CHECK_THROWS_AS(field_from_json("{\"d\":1}"), ParameterError);
  CHECK_THROWS_AS(field_from_json("not json"), ParameterError);
  CHECK_THROWS_AS(field_from_json("{\"d\":1,\"N\":2,\"coeffs\":[[5,1.0,0.0]]}"), ParameterError);
}

TEST_CASE("field arithmetic rejects mixed grids") {
  ComplexField a(SpectralGrid::make(1, 4));
  ComplexField b(SpectralGrid::make(1, 5));
  CHECK_THROWS_AS(a += b, StructuralError);
}
