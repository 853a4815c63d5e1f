#include "runs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kirchhoff/errors.hpp"
#include "kirchhoff/field_json.hpp"
#include "kirchhoff/kirchhoff_equation.hpp"
#include "kirchhoff/normal_form_ops.hpp"
#include "kirchhoff/transforms.hpp"
#include "kirchhoff/vector_fields.hpp"
#include "pool.hpp"

namespace kexp {

using namespace kirchhoff;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_s(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", s);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double max_rel_spread(const std::vector<double>& v, double center) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::abs(x / center - 1.0));
  return out;
}

json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::vector<std::vector<int>> all_modes(const SpectralGrid& g) {
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto m = g.mode(i);
    out.emplace_back(m.begin(), m.end());
  }
  return out;
}

RealPair read_initial_file(const std::string& path, const GridPtr& g) {
  const json j = load_json_file(path);
  if (!j.is_object() || !j.contains("u") || !j.contains("v"))
    throw ConfigError(path, "expected an object with fields \"u\" and \"v\"");
  try {
    RealPair uv{field_from_json(j["u"].dump(), g), field_from_json(j["v"].dump(), g)};
    if (hermitian_defect(uv.u) > 0.0 || hermitian_defect(uv.v) > 0.0)
      throw ConfigError(path, "u and v must be real valued (c_{-j} = conj c_j)");
    return uv;
  } catch (const ParameterError& e) {
    throw ConfigError(path, e.what());
  } catch (const StructuralError& e) {
    throw ConfigError(path, e.what());
  }
}

/// Derivative of ||w||_s^2 along X+ normalized by ||w||_m0^6.
double c_star_sample(const ConjugatePair& w, const FieldPair& field, double m0) {
  const double n = sobolev_norm(w.w, m0);
  if (n == 0.0) return 0.0;
  return std::abs(energy_derivative(w, field, m0)) / std::pow(n, 6);
}

double two_sided(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return std::max(a / b, b / a);
}

template <class State, class ToUV>
SimulateResult simulate_impl(const FieldFn<State>& f, const State& y0, const IntegratorConfig& icfg,
                             const std::vector<double>& s_values, ToUV to_uv,
                             std::vector<Monitor<State>> extra) {
  const RealPair uv0 = to_uv(y0);
  const GridPtr& g = uv0.u.grid_ptr();
  const auto modes = all_modes(*g);
  std::vector<std::vector<double>> m_initial;
  for (const auto& j : modes) m_initial.push_back(momentum_j(uv0, j));
  const double h0 = hamiltonian(uv0);

  std::vector<Monitor<State>> monitors;
  // hamiltonian and momenta are evaluated on the mapped physical state
  monitors.push_back({"hamiltonian", [=](double, const State& y) { return hamiltonian(to_uv(y)); }});
  monitors.push_back({"momentum_drift", [=](double, const State& y) {
                        const RealPair uv = to_uv(y);
                        double worst = 0.0;
                        for (std::size_t i = 0; i < modes.size(); ++i) {
                          const auto m = momentum_j(uv, modes[i]);
                          for (std::size_t c = 0; c < m.size(); ++c)
                            worst = std::max(worst, std::abs(m[c] - m_initial[i][c]));
                        }
                        return worst;
                      }});
  for (double s : s_values)
    monitors.push_back({"phys_norm_s" + fmt_s(s), [=](double, const State& y) { return physical_norm(to_uv(y), s); }});
  for (auto& m : extra) monitors.push_back(std::move(m));

  auto rec = integrate(f, y0, icfg, monitors);
  SimulateResult r;
  r.times = std::move(rec.times);
  r.channels = std::move(rec.channels);
  r.exit_reason = rec.exit_reason;
  r.exit_message = rec.exit_message;
  r.final_time = rec.final_time;
  r.accepted_steps = rec.accepted_steps;
  r.rejected_steps = rec.rejected_steps;
  for (double h : r.channels[0].second)
    r.hamiltonian_rel_drift = std::max(r.hamiltonian_rel_drift, std::abs(h - h0) / (h0 != 0.0 ? std::abs(h0) : 1.0));
  for (double m : r.channels[1].second) r.momentum_max_drift = std::max(r.momentum_max_drift, m);
  double rmax = 0.0, rmin = kInf;
  for (std::size_t k = 0; k < s_values.size(); ++k) {
    const auto& v = r.channels[2 + k].second;
    NormExtremum e{s_values[k], v.front(), *std::max_element(v.begin(), v.end()),
                   *std::min_element(v.begin(), v.end())};
    rmax = std::max(rmax, e.ratio());
    rmin = std::min(rmin, e.ratio());
    r.physical_norms.push_back(e);
  }
  r.ratio_spread = rmin > 0.0 ? rmax / rmin - 1.0 : 0.0;
  r.s_independent = r.ratio_spread <= 0.1;
  return r;
}

}  // namespace

RealPair physical_data(const GridPtr& g, std::uint64_t seed, double eps) {
  const double m0 = g->m0();
  return {random_field(g, seed, 0.5 * eps, m0 + 0.5, Symmetry::hermitian),
          random_field(g, seed + 104729, 0.5 * eps, m0 - 0.5, Symmetry::hermitian)};
}

ConjugatePair normal_form_data(const GridPtr& g, std::uint64_t seed, double eps) {
  return {random_field(g, seed, eps, g->m0(), Symmetry::free)};
}

// --- simulate ---------------------------------------------------------------

SimulateResult run_simulate(const SimulateConfig& cfg) {
  auto g = SpectralGrid::make(cfg.d, cfg.n_modes);
  NormalFormCoefficients nf(g, cfg.corrupt_a12_sign);
  const double m0 = g->m0();
  std::vector<double> s_values;
  for (double o : cfg.s_offsets) s_values.push_back(m0 + o);
  const RealPair uv0 = cfg.initial_file.empty() ? physical_data(g, cfg.seed, cfg.eps)
                                                : read_initial_file(cfg.initial_file, g);
  IntegratorConfig icfg = cfg.integrator;
  icfg.store_states = false;

  switch (cfg.representation) {
    case Representation::original: {
      FieldFn<RealPair> f = kirchhoff_field;
      return simulate_impl(f, uv0, icfg, s_values, [](const RealPair& y) { return y; }, {});
    }
    case Representation::syst6dic: {
      const ConjugatePair eta0 = phi3_inverse(phi2_inverse(phi1_inverse(uv0)));
      FieldFn<ConjugatePair> f = [](const ConjugatePair& e) { return ConjugatePair::from_first(field_syst6dic(e)); };
      auto to_uv = [](const ConjugatePair& e) { return phi1_forward(phi2_forward(phi3_forward(e))); };
      return simulate_impl(f, eta0, icfg, s_values, to_uv, {});
    }
    case Representation::xplus: {
      const NormalFormCoefficients* nfp = &nf;
      const ConjugatePair w0 = compose_inverse(nf, uv0, nullptr, kInf);
      FieldFn<ConjugatePair> f = [nfp](const ConjugatePair& w) {
        return ConjugatePair::from_first(x_plus(*nfp, w).total);
      };
      auto to_uv = [nfp](const ConjugatePair& w) { return compose_forward(*nfp, w, nullptr, kInf); };
      std::vector<Monitor<ConjugatePair>> extra;
      for (double s : s_values)
        extra.push_back({"w_norm_s" + fmt_s(s), [s](double, const ConjugatePair& w) { return sobolev_norm(w.w, s); }});
      extra.push_back({"c_star_sample", [nfp, m0](double, const ConjugatePair& w) {
                         return c_star_sample(w, x_plus(*nfp, w).total, m0);
                       }});
      auto r = simulate_impl(f, w0, icfg, s_values, to_uv, std::move(extra));
      for (double c : r.channels.back().second) r.c_star = std::max(r.c_star, c);
      return r;
    }
  }
  throw ConfigError("/representation", "unsupported");
}

json SimulateResult::summary(const SimulateConfig& cfg) const {
  json j = report_header("simulate", to_json(cfg));
  j["grid"] = grid_metadata(cfg.d, cfg.n_modes);
  json norms = json::array();
  for (const auto& e : physical_norms)
    norms.push_back({{"s", e.s}, {"initial", e.initial}, {"max", e.max}, {"min", e.min}, {"ratio", e.ratio()}});
  j["exit_reason"] = to_string(exit_reason);
  j["exit_message"] = exit_message;
  j["final_time"] = final_time;
  j["accepted_steps"] = accepted_steps;
  j["rejected_steps"] = rejected_steps;
  j["samples"] = times.size();
  j["hamiltonian_rel_drift"] = num(hamiltonian_rel_drift);
  j["momentum_max_drift"] = num(momentum_max_drift);
  j["physical_norms"] = norms;
  j["norm_ratio_spread"] = num(ratio_spread);
  j["norm_ratio_s_independent"] = s_independent;
  if (cfg.representation == Representation::xplus) j["c_star"] = num(c_star);
  json cols = json::array({"time"});
  for (const auto& c : channels) cols.push_back(c.first);
  j["csv_columns"] = cols;
  return j;
}

void SimulateResult::write_csv(std::ostream& os) const { kirchhoff::write_csv(os, times, channels); }

// --- conjugacy --------------------------------------------------------------

namespace {

ConjugacyLevel conjugacy_level(const ConjugacyConfig& cfg, const NormalFormCoefficients& nf, const RealPair& uv0,
                               const ConjugatePair& w0, double rel, double abs) {
  ConjugacyLevel L;
  L.rel_tol = rel;
  L.abs_tol = abs;
  IntegratorConfig icfg;
  icfg.rel_tol = rel;
  icfg.abs_tol = abs;
  icfg.t_end = cfg.t_end;
  icfg.sample_interval = cfg.sample_interval;
  icfg.store_states = true;
  FieldFn<RealPair> fo = kirchhoff_field;
  FieldFn<ConjugatePair> fx = [&nf](const ConjugatePair& w) {
    return ConjugatePair::from_first(x_plus(nf, w).total);
  };
  try {
    const auto ro = integrate(fo, uv0, icfg);
    const auto rx = integrate(fx, w0, icfg);
    L.steps_original = ro.accepted_steps;
    L.steps_xplus = rx.accepted_steps;
    if (ro.exit_reason != ExitReason::completed || rx.exit_reason != ExitReason::completed) {
      L.inconclusive = true;
      L.note = std::string("integration ended early: ") + to_string(ro.exit_reason) + " / " +
               to_string(rx.exit_reason);
      return L;
    }
    if (ro.times != rx.times) throw NumericalError("sample times of the two runs differ");
    for (std::size_t i = 0; i < ro.times.size(); ++i) {
      const double d = sobolev_norm(compose_inverse(nf, ro.states[i]).w - rx.states[i].w, nf.grid().m0());
      L.max_defect = std::max(L.max_defect, d);
      L.final_defect = d;
    }
  } catch (const DomainError& e) {
    L.inconclusive = true;
    L.note = std::string("ball exit: ") + e.what();
  }
  return L;
}

}  // namespace

ConjugacyResult run_conjugacy(const ConjugacyConfig& cfg) {
  auto g = SpectralGrid::make(cfg.d, cfg.n_modes);
  NormalFormCoefficients nf(g);
  const RealPair uv0 = physical_data(g, cfg.seed, cfg.eps);
  ConjugacyResult r;
  ConjugatePair w0;
  try {
    w0 = compose_inverse(nf, uv0);
  } catch (const DomainError& e) {
    r.main.inconclusive = true;
    r.main.note = std::string("initial data outside the transform ball: ") + e.what();
    r.status = "inconclusive";
    return r;
  }
  const double abs_ratio = cfg.abs_tol / cfg.rel_tol;
  std::vector<double> rels{cfg.rel_tol};
  for (double t : cfg.refinement_tols) rels.push_back(t);
  auto levels = parallel_map<ConjugacyLevel>(rels.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
    return conjugacy_level(cfg, nf, uv0, w0, rels[i], rels[i] * abs_ratio);
  });
  r.main = levels[0];
  r.refinement.assign(levels.begin() + 1, levels.end());
  bool inconclusive = r.main.inconclusive;
  for (std::size_t i = 0; i < r.refinement.size(); ++i) {
    inconclusive = inconclusive || r.refinement[i].inconclusive;
    if (i > 0) {
      const double prev = r.refinement[i - 1].max_defect, cur = r.refinement[i].max_defect;
      if (!(cur < prev || cur == 0.0)) r.monotone = false;
    }
  }
  if (inconclusive) r.status = "inconclusive";
  else r.status = r.main.max_defect <= cfg.threshold && r.monotone ? "pass" : "fail";
  return r;
}

json ConjugacyResult::to_json(const ConjugacyConfig& cfg) const {
  auto level = [](const ConjugacyLevel& L) {
    return json{{"rel_tol", L.rel_tol}, {"abs_tol", L.abs_tol}, {"max_defect", num(L.max_defect)},
                {"final_defect", num(L.final_defect)}, {"inconclusive", L.inconclusive}, {"note", L.note},
                {"steps_original", L.steps_original}, {"steps_xplus", L.steps_xplus}};
  };
  json j = report_header("conjugacy", kexp::to_json(cfg));
  j["grid"] = grid_metadata(cfg.d, cfg.n_modes);
  j["main"] = level(main);
  json ref = json::array();
  for (const auto& L : refinement) ref.push_back(level(L));
  j["refinement"] = ref;
  j["monotone"] = monotone;
  j["threshold"] = cfg.threshold;
  j["status"] = status;
  j["pass"] = status == "pass";
  return j;
}

// --- energy estimate --------------------------------------------------------

EnergyResult run_energy(const EnergyConfig& cfg) {
  auto g = SpectralGrid::make(cfg.d, cfg.n_modes);
  NormalFormCoefficients nf(g);
  const double m0 = g->m0();
  EnergyResult res;
  for (double o : cfg.s_offsets) res.s_values.push_back(m0 + o);
  const auto& sv = res.s_values;

  res.rows = parallel_map<EnergyRow>(cfg.eps_list.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
    EnergyRow row;
    row.eps = cfg.eps_list[i];
    row.s_ratio.assign(sv.size(), 0.0);
    const ConjugatePair w0 = normal_form_data(g, cfg.seed, row.eps);
    const double n0 = sobolev_norm(w0.w, m0);
    IntegratorConfig icfg;
    icfg.rel_tol = cfg.rel_tol;
    icfg.abs_tol = cfg.abs_tol;
    icfg.t_end = cfg.t_end;
    icfg.sample_interval = cfg.sample_interval;
    icfg.store_states = false;
    FieldFn<ConjugatePair> f = [&nf](const ConjugatePair& w) {
      return ConjugatePair::from_first(x_plus(nf, w).total);
    };
    std::vector<Monitor<ConjugatePair>> mons{{"c_star", [&](double, const ConjugatePair& w) {
      const FieldPair F = x_plus(nf, w).total;
      const double c = c_star_sample(w, F, m0);
      row.c_star = std::max(row.c_star, c);
      const double w1 = sobolev_norm(w.w, 1.0), wm = sobolev_norm(w.w, m0);
      const RealPair uv = compose_forward(nf, w, nullptr, kInf);
      for (std::size_t k = 0; k < sv.size(); ++k) {
        const double ws = sobolev_norm(w.w, sv[k]);
        if (ws > 0.0)
          row.s_ratio[k] = std::max(row.s_ratio[k],
                                    std::abs(energy_derivative(w, F, sv[k])) / (w1 * w1 * wm * wm * ws * ws));
        row.c0 = std::max(row.c0, two_sided(physical_norm(uv, sv[k]), ws));
      }
      row.max_norm_ratio = std::max(row.max_norm_ratio, wm / n0);
      return c;
    }}};
    const auto rec = integrate(f, w0, icfg, mons);
    row.steps = rec.accepted_steps;
    row.exit_reason = to_string(rec.exit_reason);
    return row;
  });

  std::vector<double> cs;
  for (const auto& r : res.rows) cs.push_back(r.c_star);
  res.c_star_median = median(cs);
  res.c_star_spread = res.c_star_median > 0.0 ? max_rel_spread(cs, res.c_star_median) : kInf;
  res.bounded = true;
  for (std::size_t k = 0; k < sv.size(); ++k) {
    std::vector<double> v;
    for (const auto& r : res.rows) {
      v.push_back(r.s_ratio[k]);
      if (!std::isfinite(r.s_ratio[k])) res.bounded = false;
    }
    const double m = median(v);
    const double spread = m > 0.0 ? max_rel_spread(v, m) : kInf;
    res.s_ratio_spread.push_back(spread);
    if (!(spread <= cfg.stability)) res.bounded = false;
  }
  bool completed = true;
  for (const auto& r : res.rows) completed = completed && r.exit_reason == std::string("completed");
  res.stable = completed && res.c_star_spread <= cfg.stability;
  res.bounded = res.bounded && completed;
  return res;
}

json EnergyResult::to_json(const EnergyConfig& cfg) const {
  json j = report_header("energy", kexp::to_json(cfg));
  j["grid"] = grid_metadata(cfg.d, cfg.n_modes);
  j["s_values"] = s_values;
  json rs = json::array();
  for (const auto& r : rows)
    rs.push_back({{"eps", r.eps}, {"c_star", num(r.c_star)}, {"s_ratio", r.s_ratio}, {"c0", r.c0},
                  {"max_norm_ratio", r.max_norm_ratio}, {"steps", r.steps}, {"exit_reason", r.exit_reason}});
  j["rows"] = rs;
  j["c_star_median"] = c_star_median;
  j["c_star_spread"] = num(c_star_spread);
  j["s_ratio_spread"] = s_ratio_spread;
  j["stable"] = stable;
  j["bounded"] = bounded;
  j["pass"] = stable && bounded;
  return j;
}

// --- sweep ------------------------------------------------------------------

std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::log(y[i]) - (my + slope * (std::log(x[i]) - mx));
    ss += e * e;
  }
  return {slope, std::sqrt(ss / double(n))};
}

namespace {

SweepRow sweep_row(const SweepConfig& cfg, const GridPtr& g, const NormalFormCoefficients& nf, double eps,
                   std::uint64_t seed, const std::vector<double>& sv) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const double m0 = g->m0();
  SweepRow row;
  row.eps = eps;
  row.seed = seed;
  row.t_target = cfg.c1_op / std::pow(eps, 4);
  row.t_run = std::min(row.t_target, cfg.t_cap);
  row.w_ratio.assign(sv.size(), 0.0);
  row.phys_ratio.assign(sv.size(), 0.0);

  const ConjugatePair w0 = normal_form_data(g, seed, eps);
  std::vector<double> n0, p0;
  const RealPair uv0 = compose_forward(nf, w0, nullptr, kInf);
  for (double s : sv) {
    n0.push_back(sobolev_norm(w0.w, s));
    p0.push_back(physical_norm(uv0, s));
  }
  row.phys_initial = physical_norm(uv0, m0);
  std::vector<double> first_violation(sv.size(), -1.0);

  IntegratorConfig icfg;
  icfg.rel_tol = cfg.rel_tol;
  icfg.abs_tol = cfg.abs_tol;
  icfg.t_end = row.t_run;
  icfg.sample_interval = row.t_run / cfg.samples_per_row;
  icfg.store_states = false;
  FieldFn<ConjugatePair> f = [&nf](const ConjugatePair& w) { return ConjugatePair::from_first(x_plus(nf, w).total); };

  long calls = 0;
  StopCondition<ConjugatePair> stop = [&](double t, const ConjugatePair& w) -> std::optional<std::string> {
    bool all_violated = true;
    for (std::size_t k = 0; k < sv.size(); ++k) {
      const double r = sobolev_norm(w.w, sv[k]) / n0[k];
      row.w_ratio[k] = std::max(row.w_ratio[k], r);
      if (r > cfg.bound_factor && first_violation[k] < 0) first_violation[k] = t;
      all_violated = all_violated && first_violation[k] >= 0;
    }
    if (all_violated) return std::string("bound exceeded at every s");
    if (sobolev_norm(w.w, m0) >= 0.9 * kXPlusBall) return std::string("ball: ||w||_m0 near the X+ radius");
    if (++calls % 64 == 0 &&
        std::chrono::duration<double>(clock::now() - t0).count() > cfg.wall_cap_seconds)
      return std::string("wall-cap");
    return std::nullopt;
  };
  std::vector<Monitor<ConjugatePair>> mons{{"c_star", [&](double, const ConjugatePair& w) {
    const double c = c_star_sample(w, x_plus(nf, w).total, m0);
    row.c_star = std::max(row.c_star, c);
    const RealPair uv = compose_forward(nf, w, nullptr, kInf);
    for (std::size_t k = 0; k < sv.size(); ++k) {
      const double p = physical_norm(uv, sv[k]);
      row.phys_ratio[k] = std::max(row.phys_ratio[k], p / p0[k]);
      row.c0 = std::max(row.c0, two_sided(p, sobolev_norm(w.w, sv[k])));
    }
    return c;
  }}};

  TrajectoryRecord<ConjugatePair> rec;
  bool domain_exit = false;
  try {
    rec = integrate(f, w0, icfg, mons, stop);
  } catch (const DomainError& e) {
    domain_exit = true;
    row.message = e.what();
  } catch (const ConvergenceError& e) {
    domain_exit = true;
    row.message = e.what();
  }
  row.steps = rec.accepted_steps;
  row.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  for (std::size_t k = 0; k < sv.size(); ++k) row.bound_ok.push_back(first_violation[k] < 0);

  const double final_time = domain_exit ? 0.0 : rec.final_time;
  row.achieved_time = first_violation[0] >= 0 ? first_violation[0] : final_time;
  if (!domain_exit) row.message = rec.exit_message;
  if (domain_exit) row.status = "ball-exit";
  else if (rec.exit_reason == ExitReason::blowup) row.status = "blowup";
  else if (rec.exit_reason == ExitReason::dt_underflow) row.status = "dt-underflow";
  else if (!row.bound_ok[0]) row.status = "bound-violated";
  else if (rec.exit_reason == ExitReason::ball_exit && rec.exit_message.rfind("ball", 0) == 0) row.status = "ball-exit";
  else if (rec.exit_message == "wall-cap" || row.t_run < row.t_target) row.status = "stable-at-cap";
  else row.status = "stable";
  return row;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  auto g = SpectralGrid::make(cfg.d, cfg.n_modes);
  NormalFormCoefficients nf(g);
  SweepResult res;
  for (double o : cfg.s_offsets) res.s_values.push_back(g->m0() + o);

  std::vector<double> eps = cfg.eps_list;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  struct Task {
    double eps;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double e : eps)
    for (int k = 0; k < cfg.seeds_per_eps; ++k) tasks.push_back({e, cfg.seed + static_cast<std::uint64_t>(k)});
  res.rows = parallel_map<SweepRow>(tasks.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
    return sweep_row(cfg, g, nf, tasks[i].eps, tasks[i].seed, res.s_values);
  });

  res.pass = !res.rows.empty();
  std::vector<double> xs, ys;
  for (const auto& r : res.rows) {
    bool all_ok = true, any_ok = false;
    for (bool b : r.bound_ok) {
      all_ok = all_ok && b;
      any_ok = any_ok || b;
    }
    if (all_ok != any_ok || r.bound_ok.empty()) res.s_independent = false;
    res.pass = res.pass && all_ok && (r.status == "stable" || r.status == "stable-at-cap");
    res.c_star = std::max(res.c_star, r.c_star);
    res.c0 = std::max(res.c0, r.c0);
    if (r.achieved_time > 0.0) {
      xs.push_back(r.eps);
      ys.push_back(r.achieved_time);
    }
  }
  std::vector<double> distinct = xs;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() >= 2) {
    std::tie(res.fitted_exponent, res.fit_residual) = loglog_fit(xs, ys);
    res.fit_available = true;
  }
  if (res.c_star > 0.0 && res.c0 > 0.0) res.empirical_c1 = 15.0 / (32.0 * res.c_star * std::pow(res.c0, 4));
  return res;
}

json SweepResult::to_json(const SweepConfig& cfg) const {
  json j = report_header("sweep", kexp::to_json(cfg));
  j["grid"] = grid_metadata(cfg.d, cfg.n_modes);
  j["s_values"] = s_values;
  json rs = json::array();
  for (const auto& r : rows) {
    std::vector<bool> ok(r.bound_ok.begin(), r.bound_ok.end());
    rs.push_back({{"eps", r.eps}, {"seed", r.seed}, {"t_target", r.t_target}, {"t_run", r.t_run},
                  {"achieved_time", r.achieved_time}, {"status", r.status}, {"message", r.message},
                  {"w_ratio", r.w_ratio}, {"bound_ok", ok}, {"phys_initial", r.phys_initial},
                  {"phys_ratio", r.phys_ratio}, {"c_star", r.c_star}, {"c0", r.c0}, {"steps", r.steps},
                  {"wall_seconds", r.wall_seconds}});
  }
  j["rows"] = rs;
  j["fit"] = fit_available ? json{{"exponent", fitted_exponent}, {"residual", fit_residual}} : json(nullptr);
  j["c_star"] = c_star;
  j["c0"] = c0;
  j["empirical_c1"] = empirical_c1;
  j["c1_op"] = cfg.c1_op;
  j["s_independent"] = s_independent;
  j["pass"] = pass;
  return j;
}

void SweepResult::write_csv(std::ostream& os) const {
  os << "eps,seed,t_target,t_run,achieved_time,status";
  for (double s : s_values) os << ",w_ratio_s" << fmt_s(s);
  for (double s : s_values) os << ",bound_ok_s" << fmt_s(s);
  for (double s : s_values) os << ",phys_ratio_s" << fmt_s(s);
  os << ",c_star,c0,steps,wall_seconds\n";
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << ',' << buf;
  };
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.eps);
    os << buf << ',' << r.seed;
    put(r.t_target);
    put(r.t_run);
    put(r.achieved_time);
    os << ',' << r.status;
    for (double x : r.w_ratio) put(x);
    for (bool b : r.bound_ok) os << ',' << (b ? 1 : 0);
    for (double x : r.phys_ratio) put(x);
    put(r.c_star);
    put(r.c0);
    os << ',' << r.steps;
    put(r.wall_seconds);
    os << '\n';
  }
}

}  // namespace kexp
