#pragma once

#include <span>

#include "zeno/bath.hpp"
#include "zeno/quadrature.hpp"
#include "zeno/sweep_result.hpp"

namespace zeno {

/// Spectral profile of the qubit line under periodic instantaneous measurement.
struct FilterSpec {
  enum class Mode { finite, no_measurement };
  Mode mode = Mode::no_measurement;
  double t_m = 0.0;  ///< inter-measurement interval, us

  static FilterSpec periodic(double t_m) { return {Mode::finite, t_m}; }
  static FilterSpec none() { return {}; }
  /// rate_mhz == kNoMeasurement maps to none().
  static FilterSpec from_rate_mhz(double rate_mhz);
};

/// F(w, Tm) = Tm * sinc^2(w Tm / 2); equals Tm at w = 0. Integrates to 2 pi.
double filter_function(double omega, double t_m);

struct RateResult {
  double rate = 0.0;         ///< 1/us
  double abs_error = 0.0;    ///< quadrature error estimate on the rate
};

/// 1/t1_spont + 2 pi * int F(w, Tm) G(w) dw, w measured from the qubit line.
/// Throws QuadratureError if the 1e-6 relative target cannot be met.
RateResult decay_rate_detailed(const BathSpec& bath, const FilterSpec& filter, double t1_spont);
double decay_rate(const BathSpec& bath, const FilterSpec& filter, double t1_spont);

/// Tm -> inf limit, F -> 2 pi delta(w): 1/t1_spont + 4 pi^2 G(0).
double no_measurement_rate(const BathSpec& bath, double t1_spont);

/// Theory curves. Rows are ordered rate-major, detuning-minor, as given.
/// Rows that fail quadrature carry the error in `status`; the sweep continues.
SweepResult sweep(const BathSpec& bath_template, std::span<const double> detunings_mhz,
                  std::span<const double> rates_mhz, double t1_spont);

/// Same rows as sweep(), evaluated on one thread. Reference for the parallel path.
SweepResult sweep_serial(const BathSpec& bath_template, std::span<const double> detunings_mhz,
                         std::span<const double> rates_mhz, double t1_spont);

}  // namespace zeno
