#include "kirchhoff/integrator.hpp"

#include <cstdio>

namespace kirchhoff {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("integrator: dt must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ParameterError("integrator: t_end must be >= 0");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ParameterError("integrator: tolerances must be > 0");
  if (monitor_stride < 1) throw ParameterError("integrator: monitor_stride must be >= 1");
  if (!(sample_interval >= 0.0)) throw ParameterError("integrator: sample_interval must be >= 0");
  if (!(max_dt > 0.0)) throw ParameterError("integrator: max_dt must be > 0");
}

const char* to_string(ExitReason r) {
  switch (r) {
    case ExitReason::completed: return "completed";
    case ExitReason::ball_exit: return "ball_exit";
    case ExitReason::blowup: return "blowup";
    case ExitReason::dt_underflow: return "dt_underflow";
  }
  return "unknown";
}

void write_csv(std::ostream& os, const std::vector<double>& times,
               const std::vector<std::pair<std::string, std::vector<double>>>& channels) {
  os << "time";
  for (const auto& [name, _] : channels) os << ',' << name;
  os << '\n';
  char buf[40];
  for (std::size_t r = 0; r < times.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", times[r]);
    os << buf;
    for (const auto& [_, values] : channels) {
      std::snprintf(buf, sizeof buf, "%.17g", r < values.size() ? values[r] : std::nan(""));
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace kirchhoff
