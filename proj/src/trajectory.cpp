#include "zeno/trajectory.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

#include "zeno/ensemble.hpp"
#include "zeno/errors.hpp"
#include "zeno/units.hpp"

namespace zeno {

namespace {

constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
constexpr double kNormDriftLimit = 1e-6;

std::size_t exact_steps(double t, double dt, const char* what) {
  const double r = t / dt;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-6 * std::max(1.0, r)) {
    std::ostringstream msg;
    msg << what << " = " << t << " us is not a multiple of dt = " << dt << " us";
    throw PreconditionError(msg.str());
  }
  return static_cast<std::size_t>(n);
}

PureState3 apply_measurement(const MeasurementSchedule& s, const PureState3& state, RngStream& rng) {
  switch (s.kind) {
    case MeasurementKind::projective: return project_energy(state, rng).state;
    case MeasurementKind::quasi_random_phase: return dephasing_measure(state, rng);
    case MeasurementKind::quasi_fixed_phase:
      return quasi_measure(state, s.fixed_theta1, s.fixed_theta2);
    case MeasurementKind::none: break;
  }
  return state;
}

SegmentParams segment_params(const SimConfig& c) {
  SegmentParams p;
  p.dt = c.dt;
  p.t1_spont = c.device.t1_spont_us;
  p.coupling_g = c.coupling_g;
  if (c.schedule.kind == MeasurementKind::projective) {
    p.extra_decay = c.schedule.nonqnd_rate;
    p.qubit_detuning = -to_angular(c.schedule.stark_shift_mhz);
  }
  return p;
}

}  // namespace

void SimConfig::validate(double extra_detuning_mhz) const {
  device.validate();
  schedule.validate();
  if (!(dt > 0.0)) throw PreconditionError("sim: dt must be > 0");
  if (n_traj == 0) throw PreconditionError("sim: n_traj must be > 0");
  if (!(duration > 0.0)) throw PreconditionError("sim: duration must be > 0");
  if (time_points < 2) throw PreconditionError("sim: need at least 2 time points");

  double shortest = device.t1_spont_us;
  if (schedule.active()) shortest = std::min(shortest, schedule.period_tm);
  if (bath_enabled) {
    bath.validate();
    shortest = std::min(shortest, kTwoPi / bath.width_B);
    if (bath.detuning_delta != 0.0) shortest = std::min(shortest, kTwoPi / std::abs(bath.detuning_delta));
  }
  if (extra_detuning_mhz != 0.0) shortest = std::min(shortest, 1.0 / std::abs(extra_detuning_mhz));
  if (dt > 0.02 * shortest * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "sim: dt = " << dt << " us is too coarse; need dt <= 0.02 * " << shortest << " us";
    throw PreconditionError(msg.str());
  }
  if (bath_enabled && dt > max_synthesis_dt(bath) * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "sim: dt = " << dt << " us does not resolve the bath; need dt <= "
        << max_synthesis_dt(bath) << " us";
    throw PreconditionError(msg.str());
  }
}

PureState3 evolve_segment(const PureState3& state, std::span<const std::complex<double>> bath,
                          std::size_t steps, double t0, const SegmentParams& p, RngStream& rng) {
  if (std::abs(state.f) > kLeakageTolerance) {
    throw PreconditionError("evolve_segment: state has leaked into |f>");
  }
  if (!bath.empty() && bath.size() < steps) {
    throw PreconditionError("evolve_segment: bath slice shorter than the segment");
  }
  if (!(p.dt > 0.0) || !(p.t1_spont > 0.0) || !(p.extra_decay >= 0.0)) {
    throw PreconditionError("evolve_segment: bad step parameters");
  }
  const double dt = p.dt;
  const double gamma = 1.0 / p.t1_spont + p.extra_decay;
  const double keep = std::exp(-gamma * dt);
  const double lose = 1.0 - keep;
  const double amp_keep = std::sqrt(keep);
  const double u = 0.25 * p.qubit_detuning * dt;
  const double u2 = u * u;
  const bool has_bath = !bath.empty() && p.coupling_g != 0.0;
  const bool has_probe = p.probe_rabi != 0.0;
  const double bath_scale = 0.25 * p.coupling_g * dt;
  const double probe_scale = 0.25 * p.probe_rabi * dt;
  const std::complex<double> probe_rot = std::polar(1.0, p.probe_detuning * dt);
  std::complex<double> probe{0.0, 0.0};

  double er = state.e.real(), ei = state.e.imag();
  double gr = state.g.real(), gi = state.g.imag();
  {
    const double n = std::sqrt(er * er + ei * ei + gr * gr + gi * gi);
    er /= n; ei /= n; gr /= n; gi /= n;
  }
  double threshold = rng.uniform_open();
  double survival = 1.0;

  for (std::size_t n = 0; n < steps; ++n) {
    double vr = 0.0, vi = 0.0;
    if (has_bath) {
      vr = bath_scale * bath[n].real();
      vi = bath_scale * bath[n].imag();
    }
    if (has_probe) {
      if (n % 1024 == 0) probe = std::polar(1.0, p.probe_detuning * (t0 + static_cast<double>(n) * dt));
      vr += probe_scale * probe.real();
      vi += probe_scale * probe.imag();
      probe *= probe_rot;
    }
    // Cayley step U = (1 - iX)^2 / (1 + th^2), X = H dt / 2 = [[u, v*], [v, -u]].
    const double th2 = u2 + vr * vr + vi * vi;
    const double inv = 1.0 / (1.0 + th2);
    const double a = 1.0 - th2;
    const double x1r = u * er + vr * gr + vi * gi;
    const double x1i = u * ei + vr * gi - vi * gr;
    const double x2r = vr * er - vi * ei - u * gr;
    const double x2i = vr * ei + vi * er - u * gi;
    const double ner = (a * er + 2.0 * x1i) * inv;
    const double nei = (a * ei - 2.0 * x1r) * inv;
    const double ngr = (a * gr + 2.0 * x2i) * inv;
    const double ngi = (a * gi - 2.0 * x2r) * inv;
    const double pe = ner * ner + nei * nei;
    const double n2 = pe + ngr * ngr + ngi * ngi;
    if (std::abs(n2 - 1.0) > kNormDriftLimit) {
      std::ostringstream msg;
      msg << "evolve_segment: unstable step at t = " << t0 + static_cast<double>(n) * dt
          << " us (norm^2 " << n2 << ")";
      throw NumericalError(msg.str());
    }
    // Waiting-time jump: decay fires once the no-jump probability drops below the draw.
    const double s = 1.0 - pe * lose;
    survival *= s;
    if (survival < threshold) {
      er = ei = gi = 0.0;
      gr = 1.0;
      threshold = rng.uniform_open();
      survival = 1.0;
    } else {
      const double r = 1.0 / std::sqrt(s);
      er = ner * amp_keep * r;
      ei = nei * amp_keep * r;
      gr = ngr * r;
      gi = ngi * r;
    }
  }
  PureState3 out;
  out.g = {gr, gi};
  out.e = {er, ei};
  return out;
}

TrajectoryPlan inversion_recovery_plan(const SimConfig& config) {
  config.validate();
  TrajectoryPlan plan;
  plan.dt = config.dt;
  plan.n_steps = static_cast<std::size_t>(std::llround(config.duration / config.dt));
  const std::size_t last = config.time_points - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    plan.sample_steps.push_back(static_cast<std::size_t>(
        std::llround(static_cast<double>(k) * static_cast<double>(plan.n_steps) / static_cast<double>(last))));
  }
  plan.schedule = config.schedule;
  if (config.schedule.active()) {
    plan.period_steps = exact_steps(config.schedule.period_tm, config.dt, "period_tm");
    if (config.schedule.is_quasi()) {
      plan.pulse_steps = exact_steps(config.schedule.pulse_tm, config.dt, "pulse_tm");
    }
  }
  plan.segment = segment_params(config);
  plan.bath_on = config.bath_enabled && config.bath.strength_A > 0.0;
  plan.bath = config.bath;
  plan.initial = PureState3::excited();
  return plan;
}

void run_trajectory(const TrajectoryPlan& plan, RngStream& rng,
                    std::vector<std::complex<double>>& bath_buffer, std::span<double> out) {
  if (out.size() != plan.sample_steps.size()) throw PreconditionError("run_trajectory: output size mismatch");
  std::span<const std::complex<double>> bath;
  if (plan.bath_on) {
    if (bath_buffer.size() < plan.n_steps) bath_buffer.resize(plan.n_steps);
    std::span<std::complex<double>> buf(bath_buffer.data(), plan.n_steps);
    synthesize_into(plan.bath, plan.dt, buf, rng);
    bath = buf;
  }
  const bool suspend = plan.schedule.is_quasi() && plan.schedule.suspend_during_pulse;
  PureState3 state = plan.initial;
  std::size_t next_event = plan.period_steps > 0 ? plan.period_steps : kNever;
  std::size_t dead_until = 0;
  std::size_t si = 0;
  std::size_t n = 0;
  for (;;) {
    while (si < plan.sample_steps.size() && plan.sample_steps[si] == n) out[si++] = state.pop_e();
    if (n >= plan.n_steps) break;
    if (n == next_event) {
      state = apply_measurement(plan.schedule, state, rng);
      if (plan.schedule.is_quasi()) dead_until = n + plan.pulse_steps;
      next_event += plan.period_steps;
    }
    std::size_t end = std::min(plan.n_steps, next_event);
    if (si < plan.sample_steps.size()) end = std::min(end, plan.sample_steps[si]);
    if (n < dead_until) {
      end = std::min(end, dead_until);
      if (suspend) {
        n = end;
        continue;
      }
    }
    const auto slice = plan.bath_on ? bath.subspan(n, end - n) : std::span<const std::complex<double>>{};
    state = evolve_segment(state, slice, end - n, static_cast<double>(n) * plan.dt, plan.segment, rng);
    n = end;
  }
  while (si < plan.sample_steps.size()) out[si++] = state.pop_e();
}

PopulationCurve run_inversion_recovery(const SimConfig& config) {
  const TrajectoryPlan plan = inversion_recovery_plan(config);
  std::vector<double> times;
  for (std::size_t s : plan.sample_steps) times.push_back(static_cast<double>(s) * plan.dt);
  return reduce_curve(run_ensemble(plan, config.seed, config.n_traj, config.threads), times);
}

SpectroscopyCurve run_spectroscopy(const SimConfig& config, std::span<const double> probe_detunings_mhz,
                                   double probe_rabi_mhz, double probe_duration) {
  if (probe_detunings_mhz.empty()) throw PreconditionError("spectroscopy: empty probe grid");
  if (!(probe_duration > 0.0)) throw PreconditionError("spectroscopy: probe duration must be > 0");
  double widest = 0.0;
  for (double d : probe_detunings_mhz) widest = std::max(widest, std::abs(d));
  config.validate(widest);

  TrajectoryPlan plan;
  plan.dt = config.dt;
  plan.n_steps = static_cast<std::size_t>(std::llround(probe_duration / config.dt));
  plan.sample_steps = {plan.n_steps};
  plan.schedule = config.schedule;
  if (config.schedule.active()) {
    plan.period_steps = exact_steps(config.schedule.period_tm, config.dt, "period_tm");
    if (config.schedule.is_quasi()) {
      plan.pulse_steps = exact_steps(config.schedule.pulse_tm, config.dt, "pulse_tm");
    }
  }
  plan.segment = segment_params(config);
  plan.segment.probe_rabi = to_angular(probe_rabi_mhz);
  plan.bath_on = config.bath_enabled && config.bath.strength_A > 0.0;
  plan.bath = config.bath;
  plan.initial = PureState3::ground();

  SpectroscopyCurve out;
  const std::array<double, 1> t_end{static_cast<double>(plan.n_steps) * plan.dt};
  for (std::size_t j = 0; j < probe_detunings_mhz.size(); ++j) {
    plan.segment.probe_detuning = to_angular(probe_detunings_mhz[j]);
    const EnsembleSamples s = run_ensemble(plan, derive_seed(config.seed, j), config.n_traj, config.threads);
    const PopulationCurve c = reduce_curve(s, t_end);
    out.probe_detunings_mhz.push_back(probe_detunings_mhz[j]);
    out.p_e.push_back(c.p_e[0]);
    out.stderr_.push_back(c.stderr_[0]);
  }
  return out;
}

std::pair<double, double> fit_fringe(std::span<const double> phases, std::span<const double> p_e) {
  if (phases.size() != p_e.size() || phases.size() < 3) {
    throw PreconditionError("fit_fringe: need >= 3 matching phase/p_e points");
  }
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const Eigen::Vector3d b{1.0, std::cos(phases[i]), std::sin(phases[i])};
    m.noalias() += b * b.transpose();
    v.noalias() += b * p_e[i];
  }
  const Eigen::Vector3d c = m.ldlt().solve(v);
  double offset = std::atan2(c[2], c[1]);
  if (offset < 0.0) offset += kTwoPi;
  const double amp = std::hypot(c[1], c[2]);
  return {offset, c[0] != 0.0 ? amp / c[0] : 0.0};
}

RamseyFringe run_ramsey(const SimConfig& config, double theta1, double theta2,
                        std::span<const double> analysis_phases, double wait) {
  if (analysis_phases.size() < 3) throw PreconditionError("ramsey: need at least 3 analysis phases");
  if (!(wait >= 0.0)) throw PreconditionError("ramsey: negative wait");
  config.device.validate();
  if (config.n_traj == 0) throw PreconditionError("ramsey: n_traj must be > 0");
  const std::size_t half = static_cast<std::size_t>(std::llround(0.5 * wait / config.dt));
  SegmentParams seg = segment_params(config);
  const bool bath_on = config.bath_enabled && config.bath.strength_A > 0.0 && half > 0;

  RamseyFringe out;
  std::vector<std::complex<double>> buffer;
  for (std::size_t j = 0; j < analysis_phases.size(); ++j) {
    const double phi = analysis_phases[j];
    const std::uint64_t seed = derive_seed(config.seed, j);
    std::vector<double> finals(config.n_traj);
    for (std::size_t i = 0; i < config.n_traj; ++i) {
      RngStream rng(seed, i);
      std::span<const std::complex<double>> bath;
      if (bath_on) {
        buffer.resize(2 * half);
        synthesize_into(config.bath, config.dt, buffer, rng);
        bath = buffer;
      }
      PureState3 s = rotate_ge(PureState3::ground(), 0.5 * std::numbers::pi, 0.0);
      if (half > 0) s = evolve_segment(s, bath_on ? bath.first(half) : bath, half, 0.0, seg, rng);
      s = quasi_measure(s, theta1, theta2);
      if (half > 0) {
        s = evolve_segment(s, bath_on ? bath.subspan(half, half) : bath, half,
                           static_cast<double>(half) * config.dt, seg, rng);
      }
      s = rotate_ge(s, 0.5 * std::numbers::pi, -phi);
      finals[i] = s.pop_e();
    }
    EnsembleSamples es;
    es.n_traj = config.n_traj;
    es.n_samples = 1;
    es.values = std::move(finals);
    const std::array<double, 1> t{0.0};
    const PopulationCurve c = reduce_curve(es, t);
    out.phases.push_back(phi);
    out.p_e.push_back(c.p_e[0]);
    out.stderr_.push_back(c.stderr_[0]);
  }
  std::tie(out.offset, out.visibility) = fit_fringe(out.phases, out.p_e);
  return out;
}

}  // namespace zeno
