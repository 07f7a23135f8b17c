#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zeno/bath.hpp"
#include "zeno/corrections.hpp"
#include "zeno/device.hpp"
#include "zeno/schedule.hpp"

namespace zeno::cli {

/// Schema or value error, formatted as "<file>:<line>:<column>: <message>".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSection {
  std::vector<double> detunings_mhz;
  std::vector<double> rates_mhz{0.5, 1.0, 2.0};
  std::vector<MeasurementKind> kinds{MeasurementKind::projective, MeasurementKind::quasi_random_phase};
  std::size_t time_points = 41;
  double duration_us = 60.0;
};

struct MeasurementSection {
  double pulse_us = 0.1;
  bool suspend_during_pulse = true;
  std::map<double, double> nonqnd_rate_per_us{{1.0, 0.007}, {2.0, 0.015}};
  std::map<double, double> stark_shift_mhz{{2.0, 0.25}};
  double fixed_theta1 = 0.0;
  double fixed_theta2 = 0.0;
};

struct NumericsSection {
  double dt_us = 0.0025;
  std::size_t trajectories = 1000;
  std::optional<double> coupling;  ///< empty: analytic value
};

struct SpectroscopySection {
  std::vector<double> detunings_mhz;
  std::vector<double> rates_mhz{0.5, 1.0, 2.0};
  std::vector<MeasurementKind> kinds{MeasurementKind::projective, MeasurementKind::quasi_random_phase,
                                     MeasurementKind::quasi_fixed_phase};
  double probe_rabi_mhz = 0.1;
  double duration_us = 80.0;
  double dt_us = 0.005;
  bool bath = false;
  std::size_t trajectories = 200;
};

struct RamseySection {
  std::vector<std::pair<double, double>> theta_pairs{{0.0, 0.0}, {0.0, 1.5707963267948966}};
  std::size_t phases = 24;
  double wait_us = 0.0;
  std::size_t trajectories = 200;
};

struct RunConfig {
  std::string source;  ///< path, for messages
  std::string text;    ///< raw bytes, hashed into CSV headers
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  DeviceParams device;
  double bath_width_mhz = 0.78;
  std::optional<double> thermal_photons = 1.0;
  std::optional<double> strength;  ///< raw A, used instead of thermal_photons
  SweepSection sweep;
  MeasurementSection measurement;
  NumericsSection numerics;
  CorrectionSpec corrections;
  SpectroscopySection spectroscopy;
  RamseySection ramsey;

  /// Bath with detuning 0; strength from `strength` or the thermal law.
  BathSpec bath() const;
  /// Schedule for one (kind, rate) with this config's side-effect knobs.
  MeasurementSchedule schedule(MeasurementKind kind, double rate_mhz) const;
};

/// Parses and validates a YAML document. Unknown keys, wrong types and
/// out-of-range values raise ConfigError pointing at the offending node.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Defaults only; used when a command runs without --config.
RunConfig default_config();

}  // namespace zeno::cli
