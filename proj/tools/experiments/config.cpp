#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "kirchhoff/spectral_grid.hpp"

#ifndef KIRCHHOFF_BUILD_ID
#define KIRCHHOFF_BUILD_ID "unknown"
#endif

namespace kexp {

namespace {

/// Pulls typed fields out of one flat JSON object and rejects leftovers.
class Reader {
 public:
  explicit Reader(const json& j) : j_(j) {
    if (!j.is_object()) throw ConfigError("/", "expected a JSON object");
  }

  void get(const char* key, int& out, int lo, int hi) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(path(key), "expected an integer");
      const auto x = v->get<long long>();
      if (x < lo || x > hi) range(key, lo, hi);
      out = static_cast<int>(x);
    }
  }
  void get(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
        throw ConfigError(path(key), "expected a nonnegative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void get(const char* key, double& out, double lo, double hi, bool open_lo = false) {
    if (const json* v = find(key)) out = number(*v, path(key), lo, hi, open_lo);
  }
  void get(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(path(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void get(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(path(key), "expected a string");
      out = v->get<std::string>();
    }
  }
  void get(const char* key, std::vector<double>& out, double lo, double hi, bool open_lo = false) {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw ConfigError(path(key), "expected an array of numbers");
      std::vector<double> r;
      for (std::size_t i = 0; i < v->size(); ++i)
        r.push_back(number((*v)[i], path(key) + "/" + std::to_string(i), lo, hi, open_lo));
      out = std::move(r);
    }
  }
  void get(const char* key, std::vector<int>& out, int lo, int hi) {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw ConfigError(path(key), "expected an array of integers");
      std::vector<int> r;
      for (std::size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        const std::string p = path(key) + "/" + std::to_string(i);
        if (!e.is_number_integer()) throw ConfigError(p, "expected an integer");
        const auto x = e.get<long long>();
        if (x < lo || x > hi)
          throw ConfigError(p, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        r.push_back(static_cast<int>(x));
      }
      out = std::move(r);
    }
  }
  void get(const char* key, std::vector<std::string>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw ConfigError(path(key), "expected an array of strings");
      std::vector<std::string> r;
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_string()) throw ConfigError(path(key) + "/" + std::to_string(i), "expected a string");
        r.push_back((*v)[i].get<std::string>());
      }
      out = std::move(r);
    }
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError("/" + k, "unknown key");
  }

  static std::string path(const char* key) { return std::string("/") + key; }

 private:
  const json* find(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return nullptr;
    return &*it;
  }
  [[noreturn]] static void range(const char* key, long long lo, long long hi) {
    throw ConfigError(path(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  static double number(const json& v, const std::string& p, double lo, double hi, bool open_lo) {
    if (!v.is_number()) throw ConfigError(p, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x) && !(std::isinf(x) && x > 0 && std::isinf(hi)))
      throw ConfigError(p, "must be finite");
    if (x < lo || x > hi || (open_lo && x == lo)) {
      std::ostringstream os;
      os << "must lie in " << (open_lo ? "(" : "[") << lo << ", " << hi << "]";
      throw ConfigError(p, os.str());
    }
    return x;
  }

  const json& j_;
  std::set<std::string> seen_;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonempty(const char* key, std::size_t n) {
  if (n == 0) throw ConfigError(Reader::path(key), "must not be empty");
}

void check_grid(int d, int n) {
  // d = 3 grids grow as N^3; past these sizes dense solves stop being a desk job
  if (d == 3 && n > 6) throw ConfigError("/n-modes", "at most 6 for d = 3");
}

void read_integrator(Reader& r, kirchhoff::IntegratorConfig& c) {
  std::string scheme = c.scheme == kirchhoff::Scheme::rk4 ? "rk4" : "rk45";
  r.get("scheme", scheme);
  if (scheme == "rk4") c.scheme = kirchhoff::Scheme::rk4;
  else if (scheme == "rk45") c.scheme = kirchhoff::Scheme::rk45_adaptive;
  else throw ConfigError("/scheme", "expected \"rk4\" or \"rk45\"");
  r.get("dt", c.dt, 0.0, 10.0, true);
  r.get("rel-tol", c.rel_tol, 0.0, 1e-2, true);
  r.get("abs-tol", c.abs_tol, 0.0, 1e-2, true);
  r.get("t-end", c.t_end, 0.0, 1e9);
  r.get("sample-interval", c.sample_interval, 0.0, 1e9);
  r.get("max-dt", c.max_dt, 0.0, kInf, true);
}

}  // namespace

const char* to_string(Representation r) {
  switch (r) {
    case Representation::original: return "original";
    case Representation::syst6dic: return "syst6dic";
    case Representation::xplus: return "xplus";
  }
  return "?";
}

VerifyConfig parse_verify(const json& j) {
  VerifyConfig c;
  Reader r(j);
  r.get("dims", c.dims, 1, 3);
  r.get("n-modes", c.n_modes, 1, 16);
  r.get("samples", c.samples, 0, 1000000);
  r.get("seed", c.seed);
  r.get("threads", c.threads, 0, 1024);
  r.get("corrupt-a12-sign", c.corrupt_a12_sign);
  r.get("suites", c.suites);
  r.get("small-divisor-radius", c.small_divisor_radius, 0, 200);
  r.get("small-divisor-dims", c.small_divisor_dims, 2, 3);
  r.get("out", c.out_dir);
  r.finish();
  require_nonempty("dims", c.dims.size());
  require_nonempty("n-modes", c.n_modes.size());
  for (int d : c.dims)
    for (int n : c.n_modes) check_grid(d, n);
  return c;
}

SimulateConfig parse_simulate(const json& j) {
  SimulateConfig c;
  Reader r(j);
  r.get("d", c.d, 1, 3);
  r.get("n-modes", c.n_modes, 1, 32);
  r.get("seed", c.seed);
  r.get("eps", c.eps, 0.0, 10.0);
  std::string rep = to_string(c.representation);
  r.get("representation", rep);
  if (rep == "original") c.representation = Representation::original;
  else if (rep == "syst6dic") c.representation = Representation::syst6dic;
  else if (rep == "xplus") c.representation = Representation::xplus;
  else throw ConfigError("/representation", "expected original, syst6dic or xplus");
  read_integrator(r, c.integrator);
  r.get("s-offsets", c.s_offsets, 0.0, 10.0);
  r.get("initial-file", c.initial_file);
  r.get("corrupt-a12-sign", c.corrupt_a12_sign);
  r.get("out", c.out_dir);
  r.finish();
  require_nonempty("s-offsets", c.s_offsets.size());
  check_grid(c.d, c.n_modes);
  return c;
}

ConjugacyConfig parse_conjugacy(const json& j) {
  ConjugacyConfig c;
  Reader r(j);
  r.get("d", c.d, 1, 3);
  r.get("n-modes", c.n_modes, 1, 32);
  r.get("seed", c.seed);
  r.get("eps", c.eps, 0.0, 10.0);
  r.get("t-end", c.t_end, 0.0, 1e6);
  r.get("rel-tol", c.rel_tol, 0.0, 1e-2, true);
  r.get("abs-tol", c.abs_tol, 0.0, 1e-2, true);
  r.get("sample-interval", c.sample_interval, 0.0, 1e6, true);
  r.get("threshold", c.threshold, 0.0, 1.0, true);
  r.get("refinement-tols", c.refinement_tols, 0.0, 1e-2, true);
  r.get("threads", c.threads, 0, 1024);
  r.get("out", c.out_dir);
  r.finish();
  check_grid(c.d, c.n_modes);
  return c;
}

EnergyConfig parse_energy(const json& j) {
  EnergyConfig c;
  Reader r(j);
  r.get("d", c.d, 1, 3);
  r.get("n-modes", c.n_modes, 1, 32);
  r.get("seed", c.seed);
  r.get("eps-list", c.eps_list, 0.0, 0.45, true);
  r.get("t-end", c.t_end, 0.0, 1e6);
  r.get("rel-tol", c.rel_tol, 0.0, 1e-2, true);
  r.get("abs-tol", c.abs_tol, 0.0, 1e-2, true);
  r.get("sample-interval", c.sample_interval, 0.0, 1e6, true);
  r.get("s-offsets", c.s_offsets, 0.0, 10.0);
  r.get("stability", c.stability, 0.0, 10.0, true);
  r.get("threads", c.threads, 0, 1024);
  r.finish();
  require_nonempty("eps-list", c.eps_list.size());
  require_nonempty("s-offsets", c.s_offsets.size());
  check_grid(c.d, c.n_modes);
  return c;
}

SweepConfig parse_sweep(const json& j) {
  SweepConfig c;
  Reader r(j);
  r.get("d", c.d, 1, 3);
  r.get("n-modes", c.n_modes, 1, 32);
  r.get("seed", c.seed);
  r.get("seeds-per-eps", c.seeds_per_eps, 1, 1000);
  // the X+ field needs ||w||_{m0} < 1/2 along the run, so the start must leave room for the 2x bound
  r.get("eps-list", c.eps_list, 0.0, 0.24, true);
  r.get("c1-op", c.c1_op, 0.0, 1e6, true);
  r.get("t-cap", c.t_cap, 0.0, kInf);
  r.get("wall-cap-seconds", c.wall_cap_seconds, 0.0, kInf);
  r.get("rel-tol", c.rel_tol, 0.0, 1e-2, true);
  r.get("abs-tol", c.abs_tol, 0.0, 1e-2, true);
  r.get("bound-factor", c.bound_factor, 1.0, 100.0);
  r.get("s-offsets", c.s_offsets, 0.0, 10.0);
  r.get("samples-per-row", c.samples_per_row, 1, 1000000);
  r.get("threads", c.threads, 0, 1024);
  r.get("out", c.out_dir);
  r.finish();
  require_nonempty("eps-list", c.eps_list.size());
  require_nonempty("s-offsets", c.s_offsets.size());
  check_grid(c.d, c.n_modes);
  return c;
}

namespace {
json maybe_inf(double x) { return std::isinf(x) ? json(nullptr) : json(x); }
}  // namespace

json to_json(const VerifyConfig& c) {
  return {{"dims", c.dims}, {"n-modes", c.n_modes}, {"samples", c.samples}, {"seed", c.seed},
          {"threads", c.threads}, {"corrupt-a12-sign", c.corrupt_a12_sign}, {"suites", c.suites},
          {"small-divisor-radius", c.small_divisor_radius}, {"small-divisor-dims", c.small_divisor_dims}};
}

json to_json(const SimulateConfig& c) {
  const auto& i = c.integrator;
  return {{"d", c.d}, {"n-modes", c.n_modes}, {"seed", c.seed}, {"eps", c.eps},
          {"representation", to_string(c.representation)},
          {"scheme", i.scheme == kirchhoff::Scheme::rk4 ? "rk4" : "rk45"}, {"dt", i.dt},
          {"rel-tol", i.rel_tol}, {"abs-tol", i.abs_tol}, {"t-end", i.t_end},
          {"sample-interval", i.sample_interval}, {"max-dt", maybe_inf(i.max_dt)},
          {"s-offsets", c.s_offsets}, {"initial-file", c.initial_file},
          {"corrupt-a12-sign", c.corrupt_a12_sign}};
}

json to_json(const ConjugacyConfig& c) {
  return {{"d", c.d}, {"n-modes", c.n_modes}, {"seed", c.seed}, {"eps", c.eps}, {"t-end", c.t_end},
          {"rel-tol", c.rel_tol}, {"abs-tol", c.abs_tol}, {"sample-interval", c.sample_interval},
          {"threshold", c.threshold}, {"refinement-tols", c.refinement_tols}, {"threads", c.threads}};
}

json to_json(const EnergyConfig& c) {
  return {{"d", c.d}, {"n-modes", c.n_modes}, {"seed", c.seed}, {"eps-list", c.eps_list},
          {"t-end", c.t_end}, {"rel-tol", c.rel_tol}, {"abs-tol", c.abs_tol},
          {"sample-interval", c.sample_interval}, {"s-offsets", c.s_offsets},
          {"stability", c.stability}, {"threads", c.threads}};
}

json to_json(const SweepConfig& c) {
  return {{"d", c.d}, {"n-modes", c.n_modes}, {"seed", c.seed}, {"seeds-per-eps", c.seeds_per_eps},
          {"eps-list", c.eps_list}, {"c1-op", c.c1_op}, {"t-cap", maybe_inf(c.t_cap)},
          {"wall-cap-seconds", maybe_inf(c.wall_cap_seconds)}, {"rel-tol", c.rel_tol},
          {"abs-tol", c.abs_tol}, {"bound-factor", c.bound_factor}, {"s-offsets", c.s_offsets},
          {"samples-per-row", c.samples_per_row}, {"threads", c.threads}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
}

std::string config_hash(const json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string build_id() { return KIRCHHOFF_BUILD_ID; }

json grid_metadata(int d, int n_modes) {
  auto g = kirchhoff::SpectralGrid::make(d, n_modes);
  return {{"d", d}, {"n-modes", n_modes}, {"num-modes", g->size()}, {"num-classes", g->classes().size()},
          {"m0", g->m0()}};
}

json report_header(const std::string& command, const json& config) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"config", config},
          {"config_hash", config_hash(config)}, {"build_id", build_id()}};
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace kexp
