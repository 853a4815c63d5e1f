#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "kirchhoff/complex_field.hpp"
#include "kirchhoff/integrator.hpp"

namespace kexp {

/// Physical data of size eps = ||u||_{m0+1/2} + ||v||_{m0-1/2}, split evenly.
kirchhoff::RealPair physical_data(const kirchhoff::GridPtr& g, std::uint64_t seed, double eps);
/// w0 with ||w0||_{m0} = eps; the shape depends on the seed only.
kirchhoff::ConjugatePair normal_form_data(const kirchhoff::GridPtr& g, std::uint64_t seed, double eps);

// --- simulate ---------------------------------------------------------------

struct NormExtremum {
  double s = 0.0;
  double initial = 0.0;
  double max = 0.0;
  double min = 0.0;
  double ratio() const { return initial > 0.0 ? max / initial : 1.0; }
};

struct SimulateResult {
  std::vector<double> times;
  std::vector<std::pair<std::string, std::vector<double>>> channels;
  kirchhoff::ExitReason exit_reason = kirchhoff::ExitReason::completed;
  std::string exit_message;
  double final_time = 0.0;
  long accepted_steps = 0;
  long rejected_steps = 0;
  double hamiltonian_rel_drift = 0.0;
  double momentum_max_drift = 0.0;
  std::vector<NormExtremum> physical_norms;  // ||u||_{s+1/2} + ||v||_{s-1/2}
  double ratio_spread = 0.0;                 // max ratio / min ratio - 1 across s
  bool s_independent = true;                 // spread <= 10%
  /// xplus only: max |d/dt ||w||_m0^2| / ||w||_m0^6 over samples
  double c_star = 0.0;

  json summary(const SimulateConfig& cfg) const;
  void write_csv(std::ostream& os) const;
};

/// Throws kirchhoff::DomainError / ConvergenceError when the transforms or
/// the X+ field leave their balls; a non-finite state ends the run with
/// exit reason blowup.
SimulateResult run_simulate(const SimulateConfig& cfg);

// --- conjugacy --------------------------------------------------------------

struct ConjugacyLevel {
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  double max_defect = 0.0;
  double final_defect = 0.0;
  bool inconclusive = false;
  std::string note;
  long steps_original = 0;
  long steps_xplus = 0;
};

struct ConjugacyResult {
  ConjugacyLevel main;
  std::vector<ConjugacyLevel> refinement;
  bool monotone = true;
  std::string status;  // pass, fail, inconclusive
  json to_json(const ConjugacyConfig& cfg) const;
};

ConjugacyResult run_conjugacy(const ConjugacyConfig& cfg);

// --- energy estimate --------------------------------------------------------

struct EnergyRow {
  double eps = 0.0;
  double c_star = 0.0;                 // max |d/dt ||w||_m0^2| / ||w||_m0^6
  std::vector<double> s_ratio;         // per s: max |d/dt ||w||_s^2| / (||w||_1^2 ||w||_m0^2 ||w||_s^2)
  double c0 = 0.0;                     // two-sided transform constant seen on the samples
  double max_norm_ratio = 0.0;         // max ||w(t)||_m0 / ||w0||_m0
  long steps = 0;
  std::string exit_reason;
};

struct EnergyResult {
  std::vector<EnergyRow> rows;
  std::vector<double> s_values;
  double c_star_median = 0.0;
  double c_star_spread = 0.0;  // max |c/median - 1|
  std::vector<double> s_ratio_spread;
  bool stable = false;
  bool bounded = false;
  json to_json(const EnergyConfig& cfg) const;
};

EnergyResult run_energy(const EnergyConfig& cfg);

// --- sweep ------------------------------------------------------------------

struct SweepRow {
  double eps = 0.0;
  std::uint64_t seed = 0;
  double t_target = 0.0;
  double t_run = 0.0;
  double achieved_time = 0.0;
  std::string status;  // stable, stable-at-cap, bound-violated, ball-exit, blowup, dt-underflow
  std::string message;
  std::vector<double> w_ratio;     // per s: max_t ||w(t)||_s / ||w0||_s
  std::vector<bool> bound_ok;      // per s
  std::vector<double> phys_ratio;  // per s: max over samples of the physical norm / initial
  double phys_initial = 0.0;       // ||u0||_{m0+1/2} + ||v0||_{m0-1/2}
  double c_star = 0.0;
  double c0 = 0.0;
  long steps = 0;
  double wall_seconds = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // eps descending
  std::vector<double> s_values;
  double fitted_exponent = 0.0;
  double fit_residual = 0.0;
  bool fit_available = false;
  double c_star = 0.0;
  double c0 = 0.0;
  double empirical_c1 = 0.0;
  bool pass = false;           // every row within the bound at every s
  bool s_independent = true;   // per row, pass/fail identical across s
  json to_json(const SweepConfig& cfg) const;
  void write_csv(std::ostream& os) const;
};

SweepResult run_sweep(const SweepConfig& cfg);

/// Least squares slope and rms residual of log y against log x.
std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kexp
