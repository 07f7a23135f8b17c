#include "zeno/mc_sweep.hpp"

#include <cmath>

#include "zeno/ensemble.hpp"
#include "zeno/errors.hpp"
#include "zeno/units.hpp"

namespace zeno {

namespace {

std::vector<double> p_ground(std::span<const double> p_e) {
  std::vector<double> out(p_e.size());
  for (std::size_t i = 0; i < p_e.size(); ++i) out[i] = 1.0 - p_e[i];
  return out;
}

std::uint64_t point_key(const MeasurementSchedule& s, double detuning_mhz, std::uint64_t salt) {
  const auto kind = static_cast<std::uint64_t>(s.kind);
  const auto rate = static_cast<std::uint64_t>(std::llround(s.rate_mhz() * 1e4));
  const auto det = static_cast<std::uint64_t>(std::llround((detuning_mhz + 1e3) * 1e4));
  return derive_seed(derive_seed(kind * 1000003u + rate, det), salt);
}

}  // namespace

T1Estimate estimate_t1(const SimConfig& config, std::size_t jackknife_blocks) {
  const TrajectoryPlan plan = inversion_recovery_plan(config);
  std::vector<double> times;
  for (std::size_t s : plan.sample_steps) times.push_back(static_cast<double>(s) * plan.dt);
  const EnsembleSamples samples = run_ensemble(plan, config.seed, config.n_traj, config.threads);

  T1Estimate out;
  out.curve = reduce_curve(samples, times);
  // A single trajectory sample has zero spread at t = 0; floor the weights.
  const double floor = 1.0 / static_cast<double>(config.n_traj);
  std::vector<double> sig(times.size());
  for (std::size_t k = 0; k < sig.size(); ++k) sig[k] = std::max(out.curve.stderr_[k], floor);

  try {
    out.fit = fit_exponential_rise(times, p_ground(out.curve.p_e), sig);
    out.t1 = out.fit.t1;
    const std::size_t k_blocks = std::min(jackknife_blocks, config.n_traj);
    if (k_blocks >= 2) {
      const auto blocks = block_means(samples, k_blocks);
      std::vector<double> leave_one_out(k_blocks);
      for (std::size_t b = 0; b < k_blocks; ++b) {
        std::vector<double> mean(times.size(), 0.0);
        double weight = 0.0;
        for (std::size_t o = 0; o < k_blocks; ++o) {
          if (o == b) continue;
          const double w = static_cast<double>((o + 1) * config.n_traj / k_blocks -
                                               o * config.n_traj / k_blocks);
          for (std::size_t k = 0; k < times.size(); ++k) mean[k] += w * blocks[o][k];
          weight += w;
        }
        for (double& m : mean) m /= weight;
        leave_one_out[b] = fit_exponential_rise(times, p_ground(mean), sig).t1;
      }
      double avg = 0.0;
      for (double v : leave_one_out) avg += v;
      avg /= static_cast<double>(k_blocks);
      double ss = 0.0;
      for (double v : leave_one_out) ss += (v - avg) * (v - avg);
      out.t1_sigma = std::sqrt(ss * static_cast<double>(k_blocks - 1) / static_cast<double>(k_blocks));
    } else {
      out.t1_sigma = out.fit.t1_sigma;
    }
  } catch (const PreconditionError& e) {
    out.status = e.what();
  } catch (const NumericalError& e) {
    out.status = e.what();
  }
  return out;
}

std::vector<McPoint> mc_sweep(const SimConfig& base, std::span<const double> detunings_mhz,
                              const MeasurementSchedule& schedule, std::uint64_t salt) {
  if (detunings_mhz.empty()) throw PreconditionError("mc_sweep: empty detuning grid");
  std::vector<McPoint> out;
  out.reserve(detunings_mhz.size());
  for (double det : detunings_mhz) {
    SimConfig c = base;
    c.bath = base.bath.with_detuning(to_angular(det));
    c.schedule = schedule;
    c.seed = derive_seed(base.seed, point_key(schedule, det, salt));
    McPoint p;
    p.detuning_mhz = det;
    p.rate_mhz = schedule.rate_mhz();
    p.estimate = estimate_t1(c);
    out.push_back(std::move(p));
  }
  return out;
}

SweepResult raw_rows(std::span<const McPoint> measured, const Baseline& baseline) {
  SweepResult r;
  for (const McPoint& m : measured) {
    SweepRow row;
    row.detuning_mhz = m.detuning_mhz;
    row.rate_mhz = m.rate_mhz;
    row.t1_us = m.estimate.t1;
    row.t1_sigma_us = m.estimate.t1_sigma;
    if (!m.estimate.ok()) {
      row.status = m.estimate.status;
    } else {
      try {
        const ValueWithError b = baseline.at(m.detuning_mhz);
        row.t1_zero_us = b.value;
        row.t1_zero_sigma_us = b.sigma;
        const ValueWithError d = fractional_change(row.t1_us, b.value, row.t1_sigma_us, b.sigma);
        row.delta_t1_frac = d.value;
        row.sigma = d.sigma;
      } catch (const PreconditionError& e) {
        row.status = e.what();
      }
    }
    r.rows.push_back(row);
  }
  return r;
}

Baseline baseline_of(std::span<const McPoint> points) {
  std::vector<SweepRow> rows;
  for (const McPoint& p : points) {
    SweepRow row;
    row.detuning_mhz = p.detuning_mhz;
    row.t1_us = p.estimate.t1;
    row.t1_sigma_us = p.estimate.t1_sigma;
    row.status = p.estimate.status;
    rows.push_back(row);
  }
  return Baseline::from_rows(rows);
}

RateEstimate rate_of(const T1Estimate& e) {
  return {1.0 / e.t1, e.t1_sigma / (e.t1 * e.t1)};
}

}  // namespace zeno
