#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zeno/bath.hpp"
#include "zeno/device.hpp"
#include "zeno/qubit.hpp"
#include "zeno/schedule.hpp"

namespace zeno {

/// Drive conversion g (rad/us per unit bath amplitude) for which the
/// trajectory relaxation rate from a synthesized bath equals the overlap
/// integral 2 pi int F G dw: with S_b = G, each direction runs at
/// (g^2/4) (1/2pi) int F S_b dw, so g^2 = 8 pi^2.
inline const double kAnalyticCoupling = 2.0 * 1.4142135623730951 * 3.141592653589793;

struct SimConfig {
  double dt = 0.0025;          ///< us
  std::size_t n_traj = 2000;
  std::uint64_t seed = 1;
  double duration = 60.0;      ///< us
  std::size_t time_points = 41;
  double coupling_g = kAnalyticCoupling;
  DeviceParams device;
  BathSpec bath;
  bool bath_enabled = true;
  MeasurementSchedule schedule;
  int threads = 0;             ///< 0: OpenMP default

  /// dt <= 0.02 min(Tm, 1/B, 1/|delta|, t1_spont) (cyclic units), plus the
  /// synthesizer's own limit. `extra_detuning_mhz` covers probe tones.
  void validate(double extra_detuning_mhz = 0.0) const;
};

/// Everything one time step needs; frequencies angular.
struct SegmentParams {
  double dt = 0.0;
  double t1_spont = 0.0;
  double extra_decay = 0.0;
  double coupling_g = 0.0;
  double qubit_detuning = 0.0;  ///< qubit frequency offset from the frame
  double probe_rabi = 0.0;
  double probe_detuning = 0.0;
};

/// Integrates `steps` steps of the rotating-frame qubit under
/// H = (D/2) sigma_z + (1/2)(d* sigma_+ + d sigma_-), d(t) = g b(t) + probe,
/// using a Cayley (Crank-Nicolson) unitary step per dt, with spontaneous
/// decay as a waiting-time quantum jump to |g>. `bath` is empty or holds at
/// least `steps` samples; t0 sets the probe phase. The state stays normalized.
/// Throws NumericalError if a step changes the norm by more than 1e-6.
PureState3 evolve_segment(const PureState3& state, std::span<const std::complex<double>> bath,
                          std::size_t steps, double t0, const SegmentParams& params,
                          RngStream& rng);

struct PopulationCurve {
  std::vector<double> times;
  std::vector<double> p_e;
  std::vector<double> stderr_;
};

/// Step-level description of one protocol run, shared by every trajectory.
struct TrajectoryPlan {
  double dt = 0.0;
  std::size_t n_steps = 0;
  std::vector<std::size_t> sample_steps;  ///< sorted; p_e recorded before stepping
  std::size_t period_steps = 0;           ///< 0: no measurements
  std::size_t pulse_steps = 0;
  MeasurementSchedule schedule;
  SegmentParams segment;
  bool bath_on = false;
  BathSpec bath;
  PureState3 initial = PureState3::excited();
};

/// Builds the plan for an inversion-recovery run (|e> at t = 0, time_points
/// samples over [0, duration], each rounded to the step grid).
TrajectoryPlan inversion_recovery_plan(const SimConfig& config);

/// Runs one trajectory and writes p_e at each sample step into `out`.
/// `bath_buffer` is scratch space, resized as needed.
void run_trajectory(const TrajectoryPlan& plan, RngStream& rng,
                    std::vector<std::complex<double>>& bath_buffer, std::span<double> out);

/// Ensemble p_e(t) after preparing |e>; schedules act as documented on
/// MeasurementSchedule. Deterministic in config (including seed).
PopulationCurve run_inversion_recovery(const SimConfig& config);

struct SpectroscopyCurve {
  std::vector<double> probe_detunings_mhz;
  std::vector<double> p_e;
  std::vector<double> stderr_;
};

/// Final p_e after a weak probe of the given duration, per probe detuning,
/// starting from |g>. Bath is included only if config.bath_enabled.
SpectroscopyCurve run_spectroscopy(const SimConfig& config, std::span<const double> probe_detunings_mhz,
                                   double probe_rabi_mhz, double probe_duration);

struct RamseyFringe {
  std::vector<double> phases;
  std::vector<double> p_e;
  std::vector<double> stderr_;
  double offset = 0.0;      ///< phase of the fringe maximum, [0, 2pi)
  double visibility = 0.0;
};

/// pi/2 about x, one quasi_measure(theta1, theta2), then a pi/2 analysis pulse
/// about the axis at -phi, so p_e(phi) = (1 + V cos(phi - offset)) / 2 with
/// offset = theta2 - theta1 + pi. `wait` adds free evolution split around the
/// excursion (decay and bath act there).
RamseyFringe run_ramsey(const SimConfig& config, double theta1, double theta2,
                        std::span<const double> analysis_phases, double wait = 0.0);

/// Least-squares fit of a + b cos(phi) + c sin(phi); returns {offset, visibility}.
std::pair<double, double> fit_fringe(std::span<const double> phases, std::span<const double> p_e);

}  // namespace zeno
