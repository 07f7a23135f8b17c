#pragma once

#include <optional>
#include <string_view>

namespace zeno {

enum class MeasurementKind { none, projective, quasi_random_phase, quasi_fixed_phase };

std::string_view to_string(MeasurementKind kind);
std::optional<MeasurementKind> parse_measurement_kind(std::string_view name);

/// Strictly periodic measurements, first event at t = period_tm.
struct MeasurementSchedule {
  MeasurementKind kind = MeasurementKind::none;
  double period_tm = 0.0;       ///< us
  double pulse_tm = 0.0;        ///< us outside the qubit manifold per quasi event
  double nonqnd_rate = 0.0;     ///< extra decay while measuring, 1/us (projective)
  double stark_shift_mhz = 0.0; ///< qubit pulled down by this much (projective)
  double fixed_theta1 = 0.0;    ///< rad (fixed-phase quasi)
  double fixed_theta2 = 0.0;
  /// Whether all qubit dynamics pause during a quasi-measurement excursion.
  bool suspend_during_pulse = true;

  bool active() const { return kind != MeasurementKind::none; }
  bool is_quasi() const {
    return kind == MeasurementKind::quasi_random_phase || kind == MeasurementKind::quasi_fixed_phase;
  }
  /// Measurement rate 1/Tm in MHz; 0 for none.
  double rate_mhz() const { return active() ? 1.0 / period_tm : 0.0; }

  /// Throws PreconditionError unless 0 <= pulse_tm < period_tm for active kinds.
  void validate() const;

  static MeasurementSchedule none() { return {}; }
  static MeasurementSchedule projective(double rate_mhz, double nonqnd_rate = 0.0,
                                        double stark_shift_mhz = 0.0);
  static MeasurementSchedule quasi_random(double rate_mhz, double pulse_tm = 0.0);
  static MeasurementSchedule quasi_fixed(double rate_mhz, double theta1, double theta2,
                                         double pulse_tm = 0.0);
};

}  // namespace zeno
