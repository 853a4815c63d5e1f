#include <doctest.h>

#include <boost/math/special_functions/jacobi_elliptic.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "kirchhoff/integrator.hpp"
#include "kirchhoff/kirchhoff_equation.hpp"
#include "kirchhoff/vector_fields.hpp"

using namespace kt;

namespace {

const cplx I(0.0, 1.0);

FieldFn<ConjugatePair> linear_field() {
  return [](const ConjugatePair& w) { return ConjugatePair{d1(w.expanded()).first}; };
}

FieldFn<RealPair> kirchhoff_fn() {
  return [](const RealPair& s) { return kirchhoff_field(s); };
}

RealPair single_mode(const GridPtr& g, int j, cplx u, cplx v) {
  RealPair s{ComplexField(g), ComplexField(g)};
  s.u.at(std::vector<int>{j}) = u;
  s.u.at(std::vector<int>{-j}) = std::conj(u);
  s.v.at(std::vector<int>{j}) = v;
  s.v.at(std::vector<int>{-j}) = std::conj(v);
  return s;
}

}  // namespace

TEST_CASE("zero state stays zero") {
  auto g = SpectralGrid::make(2, 4);
  ConjugatePair z{ComplexField(g)};
  CHECK(max_abs(rk4_step(linear_field(), z, 0.1).w) == 0.0);
  RealPair rz{ComplexField(g), ComplexField(g)};
  auto out = rk4_step(kirchhoff_fn(), rz, 0.1);
  CHECK(max_abs(out.u) == 0.0);
  CHECK(max_abs(out.v) == 0.0);
}

TEST_CASE("rk4 local error on the linear flow is fifth order") {
  auto g = SpectralGrid::make(1, 4);
  const std::vector<int> j{3};
  ConjugatePair w{ComplexField::delta(g, j, cplx(0.3, 0.1))};
  auto err = [&](double dt) {
    const cplx exact = w.w.at(j) * std::exp(-I * 3.0 * dt);
    return std::abs(rk4_step(linear_field(), w, dt).w.at(j) - exact);
  };
  const double ratio = err(0.02) / err(0.01);
  CHECK(ratio == doctest::Approx(32.0).epsilon(0.02));
}

TEST_CASE("rk4 global error on the Kirchhoff field is fourth order") {
  auto g = SpectralGrid::make(1, 4);
  auto s0 = random_real(g, 3, 0.3, 0.3);
  auto run = [&](double dt) {
    IntegratorConfig cfg;
    cfg.scheme = Scheme::rk4;
    cfg.dt = dt;
    cfg.t_end = 2.0;
    cfg.store_states = false;
    return integrate(kirchhoff_fn(), s0, cfg).final_state;
  };
  const auto a = run(0.01), b = run(0.005), c = run(0.0025);
  const double ratio = diff(a, b) / diff(b, c);
  CHECK(ratio == doctest::Approx(16.0).epsilon(0.05));
}

TEST_CASE("t_end = 0 gives one snapshot") {
  auto g = SpectralGrid::make(1, 4);
  auto s0 = random_real(g, 3, 0.3, 0.3);
  IntegratorConfig cfg;
  cfg.t_end = 0.0;
  auto rec = integrate(kirchhoff_fn(), s0, cfg);
  REQUIRE(rec.times.size() == 1);
  CHECK(rec.times[0] == 0.0);
  CHECK(diff(rec.states[0], s0) == 0.0);
  CHECK(rec.exit_reason == ExitReason::completed);
}

TEST_CASE("single real mode follows the exact Duffing solution") {
  // x'' + a x + b x^3 = 0 with a = |j|^2, b = 2|j|^4, x(0) = A, x'(0) = 0:
  // x = A cn(Omega t, k), Omega^2 = a + b A^2, k^2 = b A^2 / (2 Omega^2)
  auto g = SpectralGrid::make(1, 4);
  for (int j : {1, 2}) {
    const double A = 0.3;
    const double a = j * j, b = 2.0 * j * j * j * j;
    const double omega = std::sqrt(a + b * A * A);
    const double k = std::sqrt(b * A * A / (2.0 * omega * omega));
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    cfg.t_end = 10.0;
    cfg.sample_interval = 0.5;
    auto rec = integrate(kirchhoff_fn(), single_mode(g, j, A, 0.0), cfg);
    REQUIRE(rec.exit_reason == ExitReason::completed);
    REQUIRE(rec.times.back() == 10.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
      const double t = rec.times[i];
      double cn, dn;
      const double sn = boost::math::jacobi_elliptic(k, omega * t, &cn, &dn);
      const double x = A * cn;
      const double xd = -A * omega * sn * dn;
      const auto& s = rec.states[i];
      worst = std::max(worst, std::abs(s.u.at(std::vector<int>{j}) - x));
      worst = std::max(worst, std::abs(s.v.at(std::vector<int>{j}) - xd));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("single complex mode matches an independent scalar integration") {
  using state_t = std::array<double, 4>;  // Re c, Im c, Re c', Im c'
  auto g = SpectralGrid::make(1, 4);
  const int j = 2;
  const cplx c0(0.2, 0.1), cd0(0.1, -0.3);
  auto rhs = [&](const state_t& x, state_t& dx, double) {
    const double n2 = x[0] * x[0] + x[1] * x[1];
    const double a = j * j * (1.0 + 2.0 * j * j * n2);
    dx = {x[2], x[3], -a * x[0], -a * x[1]};
  };
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  cfg.t_end = 10.0;
  cfg.sample_interval = 1.0;
  auto rec = integrate(kirchhoff_fn(), single_mode(g, j, c0, cd0), cfg);
  REQUIRE(rec.exit_reason == ExitReason::completed);
  double worst = 0.0;
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    state_t x{c0.real(), c0.imag(), cd0.real(), cd0.imag()};
    namespace ode = boost::numeric::odeint;
    if (rec.times[i] > 0.0)
      ode::integrate_adaptive(ode::make_controlled(1e-15, 1e-15, ode::runge_kutta_fehlberg78<state_t>()), rhs, x,
                              0.0, rec.times[i], 1e-3);
    worst = std::max(worst, std::abs(rec.states[i].u.at(std::vector<int>{j}) - cplx(x[0], x[1])));
    worst = std::max(worst, std::abs(rec.states[i].v.at(std::vector<int>{j}) - cplx(x[2], x[3])));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("hamiltonian drift and determinism") {
  auto g = SpectralGrid::make(1, 8);
  auto s0 = random_real(g, 11, 0.05, 0.05);
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  cfg.t_end = 100.0;
  cfg.sample_interval = 1.0;
  std::vector<Monitor<RealPair>> mons{{"H", [](double, const RealPair& s) { return hamiltonian(s); }}};
  auto rec = integrate(kirchhoff_fn(), s0, cfg, mons);
  REQUIRE(rec.exit_reason == ExitReason::completed);
  const auto& h = rec.channel("H");
  double drift = 0.0;
  for (double v : h) drift = std::max(drift, std::abs(v - h[0]) / std::max(1.0, std::abs(h[0])));
  CHECK(drift <= 1e-10);
  CHECK(rec.max_symmetry_defect <= 1e-13);

  auto again = integrate(kirchhoff_fn(), s0, cfg, mons);
  CHECK(again.accepted_steps == rec.accepted_steps);
  CHECK(again.channel("H") == h);
  CHECK(diff(again.final_state, rec.final_state) == 0.0);
}

TEST_CASE("sampling on exact times and by stride") {
  auto g = SpectralGrid::make(1, 4);
  ConjugatePair w{random_field(g, 1, 0.1, 1.0, Symmetry::free)};
  IntegratorConfig cfg;
  cfg.t_end = 1.0;
  cfg.sample_interval = 0.25;
  auto rec = integrate(linear_field(), w, cfg);
  REQUIRE(rec.times.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(rec.times[i] == 0.25 * i);

  cfg.sample_interval = 0.0;
  cfg.scheme = Scheme::rk4;
  cfg.dt = 0.01;
  cfg.monitor_stride = 10;
  auto r2 = integrate(linear_field(), w, cfg);
  CHECK(r2.times.size() == 11);
  CHECK(r2.times.back() == 1.0);
}

TEST_CASE("exit reasons") {
  auto g = SpectralGrid::make(1, 2);
  ConjugatePair w{ComplexField::delta(g, std::vector<int>{1}, 1.0)};
  IntegratorConfig cfg;
  cfg.t_end = 5.0;

  // w' = w^3 blows up at t = 1/2
  FieldFn<ConjugatePair> cubic = [](const ConjugatePair& x) {
    ConjugatePair out{x.w};
    for (std::size_t i = 0; i < out.w.size(); ++i) out.w[i] = x.w[i] * x.w[i] * x.w[i];
    return out;
  };
  auto r1 = integrate(cubic, w, cfg);
  CHECK((r1.exit_reason == ExitReason::dt_underflow || r1.exit_reason == ExitReason::blowup));
  CHECK(r1.final_time < 0.5);
  CHECK(r1.final_time > 0.49);

  FieldFn<ConjugatePair> nan_field = [](const ConjugatePair& x) {
    ConjugatePair out{x.w};
    out.w[0] = std::nan("");
    return out;
  };
  cfg.scheme = Scheme::rk4;
  auto r2 = integrate(nan_field, w, cfg);
  CHECK(r2.exit_reason == ExitReason::blowup);
  CHECK_THROWS_AS(rk4_step(nan_field, w, 0.1, 2.0), BlowupError);
  try {
    rk4_step(nan_field, w, 0.1, 2.0);
  } catch (const BlowupError& e) {
    CHECK(e.time() == doctest::Approx(2.1));
  }

  cfg.scheme = Scheme::rk45_adaptive;
  StopCondition<ConjugatePair> stop = [](double t, const ConjugatePair&) -> std::optional<std::string> {
    if (t > 1.0) return "left the ball";
    return std::nullopt;
  };
  auto r3 = integrate(linear_field(), w, cfg, {}, stop);
  CHECK(r3.exit_reason == ExitReason::ball_exit);
  CHECK(r3.final_time > 1.0);
  CHECK(r3.final_time < 1.5);
  CHECK(std::string(to_string(r3.exit_reason)) == "ball_exit");
}

TEST_CASE("config validation") {
  IntegratorConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = {};
  cfg.t_end = -1;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = {};
  cfg.rel_tol = 0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("csv export") {
  std::ostringstream os;
  write_csv(os, {0.0, 0.1}, {{"a", {1.0 / 3.0, 2.0}}, {"b", {0.0, -1.0}}});
  CHECK(os.str() == "time,a,b\n0,0.33333333333333331,0\n0.10000000000000001,2,-1\n");
}
