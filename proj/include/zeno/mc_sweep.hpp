#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zeno/corrections.hpp"
#include "zeno/fit.hpp"
#include "zeno/sweep_result.hpp"
#include "zeno/trajectory.hpp"

namespace zeno {

struct T1Estimate {
  double t1 = 0.0;
  double t1_sigma = 0.0;  ///< jackknife over trajectory blocks
  FitResult fit;
  PopulationCurve curve;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

/// Inversion recovery plus a fit of p_g = 1 - p_e. Samples at a common time
/// are correlated along each trajectory, so the fit covariance understates the
/// error; t1_sigma is a delete-one-block jackknife instead. Fit failures are
/// reported in `status`, integrator errors propagate.
T1Estimate estimate_t1(const SimConfig& config, std::size_t jackknife_blocks = 20);

struct McPoint {
  double detuning_mhz = 0.0;
  double rate_mhz = 0.0;
  T1Estimate estimate;
};

/// One inversion-recovery fit per detuning with `schedule` active. Each point
/// draws from its own seed family, derived from (base.seed, schedule, detuning, salt).
std::vector<McPoint> mc_sweep(const SimConfig& base, std::span<const double> detunings_mhz,
                              const MeasurementSchedule& schedule, std::uint64_t salt = 0);

/// Rows pairing each measured point with the baseline at the same detuning.
/// Points outside the baseline range keep a non-ok status.
SweepResult raw_rows(std::span<const McPoint> measured, const Baseline& baseline);

/// Baseline built from the ok points of a no-measurement sweep.
Baseline baseline_of(std::span<const McPoint> points);

/// Trajectory-fitted decay rate 1/T1 and its standard error.
struct RateEstimate {
  double rate = 0.0;
  double sigma = 0.0;
};
RateEstimate rate_of(const T1Estimate& e);

}  // namespace zeno
