#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "zeno/fit.hpp"
#include "zeno/sweep_result.hpp"

namespace zeno {

/// Per-setting maps are keyed by measurement rate in MHz.
struct CorrectionSpec {
  double wing_threshold_mhz = 4.0;
  std::map<double, double> nonqnd_rate_per_setting;
  std::map<double, double> duty_factor_per_setting;
  std::map<double, double> stark_shift_per_setting;

  void validate() const;

  std::optional<double> nonqnd_rate(double rate_mhz) const;
  std::optional<double> duty_factor(double rate_mhz) const;
  double stark_shift(double rate_mhz) const;
};

struct WingRate {
  double rate = 0.0;  ///< 1/us
  double sigma = 0.0;
  std::size_t rows = 0;
};

/// Mean of 1/t1 - 1/t1_zero over ok rows with |detuning| > threshold.
/// Inverse-variance weighted when every wing row carries T1 uncertainties.
WingRate estimate_wing_rate(std::span<const SweepRow> rows, double wing_threshold_mhz = 4.0);

/// 1 / (1/t1 - wing_rate).
double subtract_nonqnd(double t1, double wing_rate);

/// t1_meas * (1 - pulse_tm / period_tm).
double duty_cycle_correct(double t1_meas, double pulse_tm, double period_tm);

/// t1_meas * factor, for empirical scaling factors in (0, 1].
double duty_cycle_scale(double t1_meas, double factor);

std::vector<double> stark_realign(std::span<const double> detunings_mhz, double shift_mhz);

/// No-measurement T1 curve, linearly interpolated in detuning.
class Baseline {
 public:
  Baseline(std::vector<double> detunings_mhz, std::vector<double> t1_us, std::vector<double> t1_sigma_us);
  static Baseline from_rows(std::span<const SweepRow> rows);

  /// Throws PreconditionError outside the tabulated range.
  ValueWithError at(double detuning_mhz) const;

 private:
  std::vector<double> det_;
  std::vector<double> t1_;
  std::vector<double> sigma_;
};

/// Projective pipeline: wing estimate, rate subtraction, Stark realignment,
/// fractional change against `baseline`. `raw` holds one rate; its t1_zero
/// fields must be the baseline at the unshifted detuning. The configured
/// nonqnd rate replaces the wing estimate when present. Rows that land
/// outside the baseline or fail a correction keep a non-ok status.
struct CorrectedSweep {
  SweepResult rows;
  WingRate wing;
  double stark_shift_mhz = 0.0;
};
CorrectedSweep correct_projective(std::span<const SweepRow> raw, const Baseline& baseline,
                                  const CorrectionSpec& spec);

/// Quasi pipeline: duty-cycle scaling (formula unless overridden), then
/// fractional change against the baseline at the same detuning.
CorrectedSweep correct_quasi(std::span<const SweepRow> raw, const Baseline& baseline,
                             const CorrectionSpec& spec, double pulse_tm, double period_tm);

}  // namespace zeno
