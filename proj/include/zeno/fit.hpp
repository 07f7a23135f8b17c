#pragma once

#include <span>

namespace zeno {

/// Weighted fit of p_g(t) = offset - amplitude * exp(-t / t1).
struct FitResult {
  double t1 = 0.0;
  double t1_sigma = 0.0;
  double offset = 0.0;
  double offset_sigma = 0.0;
  double amplitude = 0.0;
  double amplitude_sigma = 0.0;
  double reduced_chi2 = 0.0;
  int iterations = 0;
};

struct FitOptions {
  int max_iterations = 200;
  double rel_tol = 1e-12;
};

/// Levenberg-Marquardt fit seeded by a log-linear regression on (c_est - p_g),
/// with c_est the mean of the last three points. Needs >= 5 points spanning at
/// least one nominal T1; rejects data with no dynamic range. Sigmas must be > 0.
FitResult fit_exponential_rise(std::span<const double> times, std::span<const double> p_g,
                               std::span<const double> sigmas, const FitOptions& opts = {});

struct ValueWithError {
  double value = 0.0;
  double sigma = 0.0;
};

/// (t1 - t1_zero) / t1_zero with first-order error propagation.
ValueWithError fractional_change(double t1, double t1_zero, double t1_sigma = 0.0,
                                 double t1_zero_sigma = 0.0);

}  // namespace zeno
