#pragma once

#include <string>
#include <vector>

namespace zeno {

/// Rate value that stands for "no added measurements" in sweep grids.
inline constexpr double kNoMeasurement = 0.0;

struct SweepRow {
  double detuning_mhz = 0.0;
  double rate_mhz = kNoMeasurement;
  double t1_us = 0.0;
  double t1_zero_us = 0.0;
  /// (t1 - t1_zero) / t1_zero
  double delta_t1_frac = 0.0;
  double sigma = 0.0;
  double t1_sigma_us = 0.0;
  double t1_zero_sigma_us = 0.0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

}  // namespace zeno
