#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kirchhoff/integrator.hpp"

namespace kexp {

using json = nlohmann::json;

/// Invalid configuration; path names the offending field ("/samples", "/eps-list/2").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline constexpr int kSchemaVersion = 1;

struct VerifyConfig {
  std::vector<int> dims{1, 2};
  std::vector<int> n_modes{4, 8};
  int samples = 200;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
  bool corrupt_a12_sign = false;
  std::vector<std::string> suites;  // empty: all registered
  int small_divisor_radius = 50;
  std::vector<int> small_divisor_dims{2, 3};
  std::string out_dir;
};

enum class Representation { original, syst6dic, xplus };
const char* to_string(Representation r);

struct SimulateConfig {
  int d = 1;
  int n_modes = 8;
  std::uint64_t seed = 1;
  double eps = 0.05;  // ||u0||_{m0+1/2} + ||v0||_{m0-1/2}, split evenly
  Representation representation = Representation::original;
  kirchhoff::IntegratorConfig integrator = default_integrator();
  std::vector<double> s_offsets{0.0, 1.0, 2.0};  // monitored s = m0 + offset
  std::string initial_file;  // JSON {"u":field,"v":field}; overrides seed/eps
  bool corrupt_a12_sign = false;
  std::string out_dir;

  static kirchhoff::IntegratorConfig default_integrator() {
    kirchhoff::IntegratorConfig c;
    c.t_end = 10.0;
    c.rel_tol = 1e-10;
    c.abs_tol = 1e-13;
    c.sample_interval = 0.1;
    c.store_states = false;
    return c;
  }
};

struct ConjugacyConfig {
  int d = 1;
  int n_modes = 8;
  std::uint64_t seed = 3;
  double eps = 0.05;
  double t_end = 5.0;
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double sample_interval = 0.25;
  double threshold = 1e-7;
  // coarse levels, each half the previous; abs_tol follows in the same ratio
  std::vector<double> refinement_tols{4e-9, 2e-9, 1e-9};
  int threads = 0;
  std::string out_dir;
};

struct EnergyConfig {
  int d = 1;
  int n_modes = 8;
  std::uint64_t seed = 1;
  std::vector<double> eps_list{0.2, 0.1, 0.05};  // ||w0||_{m0}
  double t_end = 20.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  double sample_interval = 0.1;
  std::vector<double> s_offsets{0.0, 1.0, 2.0};
  double stability = 0.5;  // allowed relative spread around the median
  int threads = 0;
};

struct SweepConfig {
  int d = 1;
  int n_modes = 8;
  std::uint64_t seed = 1;
  int seeds_per_eps = 1;
  std::vector<double> eps_list{0.2, 0.14, 0.1, 0.07, 0.05};  // ||w0||_{m0}
  double c1_op = 0.1;
  double t_cap = std::numeric_limits<double>::infinity();
  double wall_cap_seconds = 1500.0;  // per row
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double bound_factor = 2.0;
  std::vector<double> s_offsets{0.0, 1.0, 2.0};
  int samples_per_row = 400;
  int threads = 0;
  std::string out_dir;
};

/// Parse a JSON document into a config. Unknown keys, wrong types and out of
/// range values throw ConfigError with a JSON-pointer style path.
VerifyConfig parse_verify(const json& j);
SimulateConfig parse_simulate(const json& j);
ConjugacyConfig parse_conjugacy(const json& j);
EnergyConfig parse_energy(const json& j);
SweepConfig parse_sweep(const json& j);

/// Back to JSON with the same keys; embedded in every report.
json to_json(const VerifyConfig& c);
json to_json(const SimulateConfig& c);
json to_json(const ConjugacyConfig& c);
json to_json(const EnergyConfig& c);
json to_json(const SweepConfig& c);

/// Reads and parses a file; ConfigError on I/O or syntax errors.
json load_json_file(const std::string& path);

/// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string config_hash(const json& j);
std::string build_id();
json grid_metadata(int d, int n_modes);
/// schema_version, command, config, config_hash, build_id.
json report_header(const std::string& command, const json& config);

int resolve_threads(int requested);

}  // namespace kexp
