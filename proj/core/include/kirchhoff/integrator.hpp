#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "kirchhoff/complex_field.hpp"
#include "kirchhoff/errors.hpp"

namespace kirchhoff {

enum class Scheme { rk4, rk45_adaptive };

struct IntegratorConfig {
  Scheme scheme = Scheme::rk45_adaptive;
  double dt = 1e-2;          ///< fixed step (rk4) or initial step (rk45)
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double t_end = 1.0;
  int monitor_stride = 1;    ///< accepted steps between samples (when sample_interval == 0)
  double sample_interval = 0.0;  ///< > 0: sample exactly at multiples of this
  bool store_states = true;
  double max_dt = std::numeric_limits<double>::infinity();

  /// Throws ParameterError on invalid values.
  void validate() const;
};

enum class ExitReason { completed, ball_exit, blowup, dt_underflow };
const char* to_string(ExitReason r);

/// Smallest admissible adaptive step.
inline constexpr double kMinStep = 1e-12;

template <class State>
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<std::pair<std::string, std::vector<double>>> channels;
  ExitReason exit_reason = ExitReason::completed;
  std::string exit_message;
  double final_time = 0.0;
  State final_state{};
  long accepted_steps = 0;
  long rejected_steps = 0;
  double max_symmetry_defect = 0.0;  ///< before re-symmetrization

  const std::vector<double>& channel(const std::string& name) const {
    for (const auto& [n, v] : channels)
      if (n == name) return v;
    throw ParameterError("TrajectoryRecord: no channel named " + name);
  }
};

/// Writes a header row (time, channels...) and one row per sample, 17 significant digits.
void write_csv(std::ostream& os, const std::vector<double>& times,
               const std::vector<std::pair<std::string, std::vector<double>>>& channels);

template <class State>
void write_csv(std::ostream& os, const TrajectoryRecord<State>& rec) {
  write_csv(os, rec.times, rec.channels);
}

// State algebra. RealPair stores both Hermitian components; ConjugatePair
// stores w only and is symmetric by construction.
namespace state_ops {

inline void axpy(RealPair& y, double a, const RealPair& x) {
  y.u.axpy(a, x.u);
  y.v.axpy(a, x.v);
}
inline void axpy(ConjugatePair& y, double a, const ConjugatePair& x) { y.w.axpy(a, x.w); }

inline void scale(RealPair& y, double a) {
  y.u *= a;
  y.v *= a;
}
inline void scale(ConjugatePair& y, double a) { y.w *= a; }

inline bool finite(const RealPair& x) { return x.u.all_finite() && x.v.all_finite(); }
inline bool finite(const ConjugatePair& x) { return x.w.all_finite(); }

/// Projects onto the symmetry class, returns the defect before projection.
inline double symmetrize(RealPair& x) {
  const double d = std::max(hermitian_defect(x.u), hermitian_defect(x.v));
  if (d != 0.0) {
    x.u = hermitian_part(x.u);
    x.v = hermitian_part(x.v);
  }
  return d;
}
inline double symmetrize(ConjugatePair&) { return 0.0; }

template <class Fn>
void for_each_coeff(const RealPair& a, const RealPair& b, const RealPair& c, Fn&& fn) {
  for (std::size_t i = 0; i < a.u.size(); ++i) fn(a.u[i], b.u[i], c.u[i]);
  for (std::size_t i = 0; i < a.v.size(); ++i) fn(a.v[i], b.v[i], c.v[i]);
}
template <class Fn>
void for_each_coeff(const ConjugatePair& a, const ConjugatePair& b, const ConjugatePair& c, Fn&& fn) {
  for (std::size_t i = 0; i < a.w.size(); ++i) fn(a.w[i], b.w[i], c.w[i]);
}

}  // namespace state_ops

template <class State>
using FieldFn = std::function<State(const State&)>;

template <class State>
struct Monitor {
  std::string name;
  std::function<double(double, const State&)> fn;
};

/// Returns a message when the run must stop (ball exit).
template <class State>
using StopCondition = std::function<std::optional<std::string>(double, const State&)>;

/// One classical RK4 step; throws BlowupError (carrying t + dt) on non-finite output.
template <class State>
State rk4_step(const FieldFn<State>& f, const State& y, double dt, double t = 0.0) {
  using namespace state_ops;
  const State k1 = f(y);
  State y2 = y;
  axpy(y2, 0.5 * dt, k1);
  const State k2 = f(y2);
  State y3 = y;
  axpy(y3, 0.5 * dt, k2);
  const State k3 = f(y3);
  State y4 = y;
  axpy(y4, dt, k3);
  const State k4 = f(y4);
  State out = y;
  axpy(out, dt / 6.0, k1);
  axpy(out, dt / 3.0, k2);
  axpy(out, dt / 3.0, k3);
  axpy(out, dt / 6.0, k4);
  if (!finite(out)) throw BlowupError("rk4_step: non-finite state", t + dt);
  return out;
}

/// Dormand-Prince 5(4) step with FSAL. Returns the fifth order solution, the
/// scaled error norm (accept iff <= 1) and the derivative at the new point.
template <class State>
struct Dopri5Result {
  State y;
  State f_new;
  double err;
};

template <class State>
Dopri5Result<State> dopri5_step(const FieldFn<State>& f, const State& y, const State& k1, double h,
                                double rel_tol, double abs_tol) {
  using namespace state_ops;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                          a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  State t = y;
  axpy(t, h * a21, k1);
  const State k2 = f(t);
  t = y;
  axpy(t, h * a31, k1);
  axpy(t, h * a32, k2);
  const State k3 = f(t);
  t = y;
  axpy(t, h * a41, k1);
  axpy(t, h * a42, k2);
  axpy(t, h * a43, k3);
  const State k4 = f(t);
  t = y;
  axpy(t, h * a51, k1);
  axpy(t, h * a52, k2);
  axpy(t, h * a53, k3);
  axpy(t, h * a54, k4);
  const State k5 = f(t);
  t = y;
  axpy(t, h * a61, k1);
  axpy(t, h * a62, k2);
  axpy(t, h * a63, k3);
  axpy(t, h * a64, k4);
  axpy(t, h * a65, k5);
  const State k6 = f(t);
  State y5 = y;
  axpy(y5, h * b1, k1);
  axpy(y5, h * b3, k3);
  axpy(y5, h * b4, k4);
  axpy(y5, h * b5, k5);
  axpy(y5, h * b6, k6);
  if (!finite(y5)) return {std::move(y5), k6, std::numeric_limits<double>::infinity()};
  State k7 = f(y5);

  State e = k1;
  scale(e, h * e1);
  axpy(e, h * e3, k3);
  axpy(e, h * e4, k4);
  axpy(e, h * e5, k5);
  axpy(e, h * e6, k6);
  axpy(e, h * e7, k7);

  double err = 0.0;
  for_each_coeff(e, y, y5, [&](const cplx& ei, const cplx& yi, const cplx& zi) {
    const double sc = abs_tol + rel_tol * std::max(std::abs(yi), std::abs(zi));
    err = std::max(err, std::abs(ei) / sc);
  });
  if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
  return {std::move(y5), std::move(k7), err};
}

/// Integrates from t = 0 to config.t_end. Samples are taken at t = 0, then every
/// monitor_stride accepted steps (or at exact multiples of sample_interval),
/// and at the final time. Blowup, ball exit and step underflow end the run
/// with the corresponding exit reason; the record holds everything up to it.
template <class State>
TrajectoryRecord<State> integrate(const FieldFn<State>& f, const State& y0, const IntegratorConfig& cfg,
                                  const std::vector<Monitor<State>>& monitors = {},
                                  const StopCondition<State>& stop = {}) {
  using namespace state_ops;
  cfg.validate();
  TrajectoryRecord<State> rec;
  for (const auto& m : monitors) rec.channels.emplace_back(m.name, std::vector<double>{});

  auto sample = [&](double t, const State& y) {
    rec.times.push_back(t);
    if (cfg.store_states) rec.states.push_back(y);
    for (std::size_t i = 0; i < monitors.size(); ++i) rec.channels[i].second.push_back(monitors[i].fn(t, y));
  };

  State y = y0;
  rec.max_symmetry_defect = symmetrize(y);
  double t = 0.0;
  sample(t, y);
  auto finish = [&](ExitReason r, std::string msg) {
    rec.exit_reason = r;
    rec.exit_message = std::move(msg);
    rec.final_time = t;
    if (rec.times.back() != t) sample(t, y);
    rec.final_state = y;
    return rec;
  };
  if (stop) {
    if (auto msg = stop(t, y)) return finish(ExitReason::ball_exit, *msg);
  }
  if (cfg.t_end == 0.0) return finish(ExitReason::completed, "");

  const bool timed = cfg.sample_interval > 0.0;
  long next_sample_index = 1;
  auto next_sample_time = [&]() {
    return std::min(cfg.t_end, static_cast<double>(next_sample_index) * cfg.sample_interval);
  };
  long since_sample = 0;
  double h = std::min(cfg.dt, cfg.max_dt);

  auto after_step = [&](bool hit_sample_time) -> std::optional<TrajectoryRecord<State>> {
    rec.max_symmetry_defect = std::max(rec.max_symmetry_defect, symmetrize(y));
    ++rec.accepted_steps;
    ++since_sample;
    if (stop) {
      if (auto msg = stop(t, y)) return finish(ExitReason::ball_exit, *msg);
    }
    bool take = timed ? hit_sample_time : since_sample >= cfg.monitor_stride;
    if (t >= cfg.t_end) take = true;
    if (take) {
      sample(t, y);
      since_sample = 0;
      if (timed && hit_sample_time) ++next_sample_index;
    }
    return std::nullopt;
  };

  try {
    if (cfg.scheme == Scheme::rk4) {
      while (t < cfg.t_end) {
        double target = timed ? next_sample_time() : cfg.t_end;
        double step = cfg.dt;
        bool hit = false;
        if (t + step >= target * (1.0 - 1e-14)) {
          step = target - t;
          hit = true;
        }
        y = rk4_step(f, y, step, t);
        t = hit ? target : t + step;
        if (auto r = after_step(timed && hit)) return *r;
      }
      return finish(ExitReason::completed, "");
    }

    State k1 = f(y);
    double err_prev = 1e-4;
    constexpr double safety = 0.9, min_fac = 0.2, max_fac = 5.0;
    constexpr double beta = 0.04, alpha = 0.2 - 0.75 * beta;
    while (t < cfg.t_end) {
      const double target = timed ? next_sample_time() : cfg.t_end;
      bool hit = false;
      double step = h;
      if (t + step >= target * (1.0 - 1e-14) || target - t - step < 1e-14 * std::max(1.0, target)) {
        step = target - t;
        hit = true;
      }
      if (step < kMinStep && !hit) {
        return finish(ExitReason::dt_underflow,
                      "adaptive step " + std::to_string(step) + " below 1e-12 at t = " + std::to_string(t));
      }
      auto res = dopri5_step(f, y, k1, step, cfg.rel_tol, cfg.abs_tol);
      if (res.err <= 1.0) {
        y = std::move(res.y);
        k1 = std::move(res.f_new);
        t = hit ? target : t + step;
        double fac = res.err == 0.0 ? max_fac
                                    : safety * std::pow(res.err, -alpha) * std::pow(err_prev, beta);
        fac = std::clamp(fac, min_fac, max_fac);
        err_prev = std::max(res.err, 1e-4);
        // a step truncated to hit a sample time says little about the natural size
        const double proposed = std::min(step * fac, cfg.max_dt);
        if (!hit || proposed < h) h = proposed;
        if (auto r = after_step(timed && hit)) return *r;
        if (!finite(k1)) throw BlowupError("integrate: non-finite field value", t);
      } else {
        ++rec.rejected_steps;
        if (!std::isfinite(res.err)) {
          h = step * min_fac;
        } else {
          h = step * std::max(min_fac, safety * std::pow(res.err, -0.2));
        }
        if (h < kMinStep) {
          return finish(ExitReason::dt_underflow,
                        "adaptive step " + std::to_string(h) + " below 1e-12 at t = " + std::to_string(t));
        }
      }
    }
    return finish(ExitReason::completed, "");
  } catch (const BlowupError& e) {
    return finish(ExitReason::blowup, e.what());
  }
}

}  // namespace kirchhoff
