#include "zeno/schedule.hpp"

#include "zeno/errors.hpp"

namespace zeno {

std::string_view to_string(MeasurementKind kind) {
  switch (kind) {
    case MeasurementKind::none: return "none";
    case MeasurementKind::projective: return "projective";
    case MeasurementKind::quasi_random_phase: return "quasi-random-phase";
    case MeasurementKind::quasi_fixed_phase: return "quasi-fixed-phase";
  }
  return "?";
}

std::optional<MeasurementKind> parse_measurement_kind(std::string_view name) {
  for (auto k : {MeasurementKind::none, MeasurementKind::projective,
                 MeasurementKind::quasi_random_phase, MeasurementKind::quasi_fixed_phase}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void MeasurementSchedule::validate() const {
  if (!active()) return;
  if (!(period_tm > 0.0)) throw PreconditionError("schedule: period_tm must be > 0");
  if (!(pulse_tm >= 0.0 && pulse_tm < period_tm)) {
    throw PreconditionError("schedule: need 0 <= pulse_tm < period_tm");
  }
  if (!(nonqnd_rate >= 0.0)) throw PreconditionError("schedule: nonqnd_rate must be >= 0");
  if (kind != MeasurementKind::projective && (nonqnd_rate != 0.0 || stark_shift_mhz != 0.0)) {
    throw PreconditionError("schedule: nonqnd_rate and stark_shift apply to projective only");
  }
}

MeasurementSchedule MeasurementSchedule::projective(double rate_mhz, double nonqnd_rate,
                                                    double stark_shift_mhz) {
  MeasurementSchedule s;
  s.kind = MeasurementKind::projective;
  s.period_tm = 1.0 / rate_mhz;
  s.nonqnd_rate = nonqnd_rate;
  s.stark_shift_mhz = stark_shift_mhz;
  return s;
}

MeasurementSchedule MeasurementSchedule::quasi_random(double rate_mhz, double pulse_tm) {
  MeasurementSchedule s;
  s.kind = MeasurementKind::quasi_random_phase;
  s.period_tm = 1.0 / rate_mhz;
  s.pulse_tm = pulse_tm;
  return s;
}

MeasurementSchedule MeasurementSchedule::quasi_fixed(double rate_mhz, double theta1, double theta2,
                                                     double pulse_tm) {
  MeasurementSchedule s;
  s.kind = MeasurementKind::quasi_fixed_phase;
  s.period_tm = 1.0 / rate_mhz;
  s.pulse_tm = pulse_tm;
  s.fixed_theta1 = theta1;
  s.fixed_theta2 = theta2;
  return s;
}

}  // namespace zeno
