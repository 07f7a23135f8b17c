#pragma once

namespace zeno {

/// Readout-circuit parameters. Frequencies are cyclic (MHz); times in us.
struct DeviceParams {
  double omega_ge_mhz = 5103.0;
  double chi_mhz = -1.38;
  double kappa_mhz = 6.81;
  double eta = 0.014;
  double nbar = 9.0;
  double t1_spont_us = 20.0;

  /// Throws PreconditionError unless eta in (0,1], nbar >= 0, kappa > 0, t1_spont > 0.
  void validate() const;
};

/// Dispersive measurement time kappa / (16 nbar eta chi^2), in us.
/// kappa and chi enter as angular frequencies.
double measurement_timescale(const DeviceParams& params);

}  // namespace zeno
