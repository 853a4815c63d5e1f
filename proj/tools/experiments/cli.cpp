#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "config.hpp"
#include "kirchhoff/errors.hpp"
#include "runs.hpp"
#include "verify.hpp"

namespace kexp {

namespace {

const char* kFooter = R"(
Exit codes: 0 pass, 1 suite failure, 2 config error, 3 numerical error.

Config: one flat JSON object per command with kebab-case keys; flags
override the file. Unknown keys are rejected.

CSV outputs (UTF-8, LF, 17 significant digits):
  simulate_trajectory.csv  time, hamiltonian, momentum_drift,
                           phys_norm_s<s> for each monitored s
                           (= ||u||_{s+1/2} + ||v||_{s-1/2}),
                           xplus only: w_norm_s<s>, c_star_sample
  sweep_rows.csv           eps, seed, t_target, t_run, achieved_time, status,
                           w_ratio_s<s>, bound_ok_s<s>, phys_ratio_s<s>,
                           c_star, c0, steps, wall_seconds
JSON reports carry schema_version, config, config_hash, build_id and grid.)";

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> d, n_modes, samples, threads;
  std::optional<double> eps, t_end;
  std::optional<std::string> representation;
  bool corrupt = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--out", f.out, "output directory (created if missing)");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--d", f.d, "torus dimension");
  app->add_option("--n-modes", f.n_modes, "Fourier cutoff N (modes 1 <= |j| <= N)");
  app->add_option("--threads", f.threads, "worker threads, 0 = hardware");
}

json base_config(const Flags& f) {
  json j = f.config.empty() ? json::object() : load_json_file(f.config);
  if (!j.is_object()) throw ConfigError("/", "expected a JSON object");
  if (f.seed) j["seed"] = *f.seed;
  if (f.threads) j["threads"] = *f.threads;
  if (!f.out.empty()) j["out"] = f.out;
  return j;
}

void set_grid(json& j, const Flags& f, bool list) {
  if (f.d) j[list ? "dims" : "d"] = list ? json::array({*f.d}) : json(*f.d);
  if (f.n_modes) j["n-modes"] = list ? json::array({*f.n_modes}) : json(*f.n_modes);
}

std::optional<std::filesystem::path> out_dir(const std::string& dir) {
  if (dir.empty()) return std::nullopt;
  std::filesystem::create_directories(dir);
  return std::filesystem::path(dir);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral workbench for the Kirchhoff equation on the torus: normal form checks, "
               "simulations, conjugacy and lifespan sweeps."};
  app.footer(kFooter);
  app.require_subcommand(1);
  Flags f;

  auto* verify = app.add_subcommand("verify", "run the property suites");
  add_common(verify, f);
  verify->add_option("--samples", f.samples, "samples per suite and grid");
  verify->add_flag("--corrupt-a12-sign", f.corrupt, "flip the a12 sign (negative control)");

  auto* simulate = app.add_subcommand("simulate", "integrate one representation");
  add_common(simulate, f);
  simulate->add_option("--eps", f.eps, "||u0||_{m0+1/2} + ||v0||_{m0-1/2}");
  simulate->add_option("--t-end", f.t_end, "final time");
  simulate->add_option("--representation", f.representation, "original | syst6dic | xplus");
  simulate->add_flag("--corrupt-a12-sign", f.corrupt, "flip the a12 sign (negative control)");

  auto* conj = app.add_subcommand("conjugacy", "original flow through the inverse transform vs the X+ flow");
  add_common(conj, f);
  conj->add_option("--eps", f.eps, "||u0||_{m0+1/2} + ||v0||_{m0-1/2}");
  conj->add_option("--t-end", f.t_end, "final time");

  auto* sweep = app.add_subcommand("sweep", "lifespan surrogate: norm bound on [0, c1/eps^4]");
  add_common(sweep, f);
  sweep->add_option("--eps", f.eps, "single eps (||w0||_m0), replaces eps-list");
  sweep->add_option("--t-end", f.t_end, "time cap per row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    json j = base_config(f);
    if (f.corrupt) j["corrupt-a12-sign"] = true;

    if (verify->parsed()) {
      set_grid(j, f, true);
      if (f.samples) j["samples"] = *f.samples;
      const auto cfg = parse_verify(j);
      const auto rep = run_verify(cfg);
      const json report = rep.to_json(cfg);
      if (auto dir = out_dir(cfg.out_dir)) write_file(*dir / "verify_report.json", report.dump(2) + "\n");
      out << report.dump(2) << "\n";
      for (const auto& name : rep.failing()) err << "FAILED suite: " << name << "\n";
      return rep.pass ? kPass : kFail;
    }

    if (simulate->parsed()) {
      set_grid(j, f, false);
      if (f.eps) j["eps"] = *f.eps;
      if (f.t_end) j["t-end"] = *f.t_end;
      if (f.representation) j["representation"] = *f.representation;
      const auto cfg = parse_simulate(j);
      const auto res = run_simulate(cfg);
      const json summary = res.summary(cfg);
      if (auto dir = out_dir(cfg.out_dir)) {
        // t_end = 0 leaves a single snapshot: summary only
        if (cfg.integrator.t_end > 0.0) {
          std::ofstream os(*dir / "simulate_trajectory.csv", std::ios::binary);
          res.write_csv(os);
        }
        write_file(*dir / "simulate_summary.json", summary.dump(2) + "\n");
      }
      out << summary.dump(2) << "\n";
      if (res.exit_reason == kirchhoff::ExitReason::blowup || res.exit_reason == kirchhoff::ExitReason::dt_underflow) {
        err << "integration stopped: " << res.exit_message << "\n";
        return kNumericalError;
      }
      return kPass;
    }

    if (conj->parsed()) {
      set_grid(j, f, false);
      if (f.eps) j["eps"] = *f.eps;
      if (f.t_end) j["t-end"] = *f.t_end;
      const auto cfg = parse_conjugacy(j);
      const auto res = run_conjugacy(cfg);
      const json report = res.to_json(cfg);
      if (auto dir = out_dir(cfg.out_dir)) write_file(*dir / "conjugacy_report.json", report.dump(2) + "\n");
      out << report.dump(2) << "\n";
      if (res.status == "inconclusive") err << "conjugacy inconclusive: " << res.main.note << "\n";
      return res.status == "pass" ? kPass : kFail;
    }

    if (sweep->parsed()) {
      set_grid(j, f, false);
      if (f.eps) j["eps-list"] = json::array({*f.eps});
      if (f.t_end) j["t-cap"] = *f.t_end;
      const auto cfg = parse_sweep(j);
      const auto res = run_sweep(cfg);
      const json report = res.to_json(cfg);
      if (auto dir = out_dir(cfg.out_dir)) {
        std::ofstream os(*dir / "sweep_rows.csv", std::ios::binary);
        res.write_csv(os);
        write_file(*dir / "sweep_report.json", report.dump(2) + "\n");
      }
      out << report.dump(2) << "\n";
      for (const auto& r : res.rows)
        if (r.status == "blowup" || r.status == "dt-underflow") return kNumericalError;
      return res.pass ? kPass : kFail;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const kirchhoff::ParameterError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const kirchhoff::DomainError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const kirchhoff::ConvergenceError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const kirchhoff::NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "output error: " << e.what() << "\n";
    return kConfigError;
  }
  return kFail;
}

}  // namespace kexp
