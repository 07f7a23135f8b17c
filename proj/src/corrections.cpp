#include "zeno/corrections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

std::optional<double> lookup(const std::map<double, double>& m, double rate_mhz) {
  for (const auto& [k, v] : m) {
    if (std::abs(k - rate_mhz) <= 1e-9 * std::max(1.0, std::abs(k))) return v;
  }
  return std::nullopt;
}

double rate_sigma(double t1, double t1_sigma) { return t1_sigma / (t1 * t1); }

}  // namespace

void CorrectionSpec::validate() const {
  if (!(wing_threshold_mhz > 0.0)) throw PreconditionError("corrections: wing_threshold must be > 0");
  for (const auto& [rate, f] : duty_factor_per_setting) {
    if (!(f > 0.0 && f <= 1.0)) throw PreconditionError("corrections: duty factors must lie in (0, 1]");
  }
  for (const auto& [rate, r] : nonqnd_rate_per_setting) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw PreconditionError("corrections: nonqnd rates must be >= 0");
  }
  for (const auto& [rate, s] : stark_shift_per_setting) {
    if (!std::isfinite(s)) throw PreconditionError("corrections: stark shifts must be finite");
  }
}

std::optional<double> CorrectionSpec::nonqnd_rate(double rate_mhz) const {
  return lookup(nonqnd_rate_per_setting, rate_mhz);
}
std::optional<double> CorrectionSpec::duty_factor(double rate_mhz) const {
  return lookup(duty_factor_per_setting, rate_mhz);
}
double CorrectionSpec::stark_shift(double rate_mhz) const {
  return lookup(stark_shift_per_setting, rate_mhz).value_or(0.0);
}

WingRate estimate_wing_rate(std::span<const SweepRow> rows, double wing_threshold_mhz) {
  if (!(wing_threshold_mhz > 0.0)) throw PreconditionError("estimate_wing_rate: threshold must be > 0");
  std::vector<const SweepRow*> wing;
  for (const SweepRow& r : rows) {
    if (r.ok() && std::abs(r.detuning_mhz) > wing_threshold_mhz) wing.push_back(&r);
  }
  if (wing.size() < 2) {
    std::ostringstream os;
    os << "estimate_wing_rate: need >= 2 rows beyond " << wing_threshold_mhz << " MHz, have " << wing.size();
    throw PreconditionError(os.str());
  }
  // Fixed summation order keeps the estimate independent of row order.
  std::sort(wing.begin(), wing.end(), [](const SweepRow* a, const SweepRow* b) {
    if (a->detuning_mhz != b->detuning_mhz) return a->detuning_mhz < b->detuning_mhz;
    return a->t1_us < b->t1_us;
  });

  std::vector<double> d(wing.size()), var(wing.size());
  bool weighted = true;
  for (std::size_t i = 0; i < wing.size(); ++i) {
    const SweepRow& r = *wing[i];
    if (!(r.t1_us > 0.0) || !(r.t1_zero_us > 0.0)) throw PreconditionError("estimate_wing_rate: T1 must be > 0");
    d[i] = 1.0 / r.t1_us - 1.0 / r.t1_zero_us;
    const double s1 = rate_sigma(r.t1_us, r.t1_sigma_us);
    const double s0 = rate_sigma(r.t1_zero_us, r.t1_zero_sigma_us);
    var[i] = s1 * s1 + s0 * s0;
    if (!(var[i] > 0.0)) weighted = false;
  }

  WingRate w;
  w.rows = wing.size();
  const auto n = static_cast<double>(wing.size());
  if (weighted) {
    double sw = 0.0, swd = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      sw += 1.0 / var[i];
      swd += d[i] / var[i];
    }
    w.rate = swd / sw;
    w.sigma = std::sqrt(1.0 / sw);
  } else {
    w.rate = std::accumulate(d.begin(), d.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : d) ss += (v - w.rate) * (v - w.rate);
    w.sigma = std::sqrt(ss / (n - 1.0) / n);
  }
  return w;
}

double subtract_nonqnd(double t1, double wing_rate) {
  if (!(t1 > 0.0)) throw PreconditionError("subtract_nonqnd: t1 must be > 0");
  const double rest = 1.0 / t1 - wing_rate;
  if (!(rest > 0.0)) throw PreconditionError("subtract_nonqnd: correction exceeds the total decay rate");
  return 1.0 / rest;
}

double duty_cycle_correct(double t1_meas, double pulse_tm, double period_tm) {
  if (!(period_tm > 0.0)) throw PreconditionError("duty_cycle_correct: period must be > 0");
  if (!(pulse_tm >= 0.0)) throw PreconditionError("duty_cycle_correct: pulse must be >= 0");
  if (!(pulse_tm < period_tm)) throw PreconditionError("duty_cycle_correct: pulse must be shorter than the period");
  return t1_meas * (1.0 - pulse_tm / period_tm);
}

double duty_cycle_scale(double t1_meas, double factor) {
  if (!(factor > 0.0 && factor <= 1.0)) throw PreconditionError("duty_cycle_scale: factor must lie in (0, 1]");
  return t1_meas * factor;
}

std::vector<double> stark_realign(std::span<const double> detunings_mhz, double shift_mhz) {
  std::vector<double> out(detunings_mhz.begin(), detunings_mhz.end());
  for (double& d : out) d += shift_mhz;
  return out;
}

Baseline::Baseline(std::vector<double> detunings_mhz, std::vector<double> t1_us, std::vector<double> t1_sigma_us)
    : det_(std::move(detunings_mhz)), t1_(std::move(t1_us)), sigma_(std::move(t1_sigma_us)) {
  if (det_.size() != t1_.size() || det_.size() != sigma_.size()) {
    throw PreconditionError("Baseline: column lengths differ");
  }
  if (det_.empty()) throw PreconditionError("Baseline: empty");
  for (std::size_t i = 0; i + 1 < det_.size(); ++i) {
    if (!(det_[i + 1] > det_[i])) throw PreconditionError("Baseline: detunings must increase strictly");
  }
}

Baseline Baseline::from_rows(std::span<const SweepRow> rows) {
  std::vector<const SweepRow*> ok;
  for (const SweepRow& r : rows) {
    if (r.ok()) ok.push_back(&r);
  }
  std::sort(ok.begin(), ok.end(),
            [](const SweepRow* a, const SweepRow* b) { return a->detuning_mhz < b->detuning_mhz; });
  std::vector<double> d, t, s;
  for (const SweepRow* r : ok) {
    d.push_back(r->detuning_mhz);
    t.push_back(r->t1_us);
    s.push_back(r->t1_sigma_us);
  }
  return Baseline(std::move(d), std::move(t), std::move(s));
}

ValueWithError Baseline::at(double x) const {
  constexpr double kSnap = 1e-9;
  if (x < det_.front() - kSnap || x > det_.back() + kSnap) {
    std::ostringstream os;
    os << "Baseline: detuning " << x << " MHz outside [" << det_.front() << ", " << det_.back() << "]";
    throw PreconditionError(os.str());
  }
  const auto it = std::lower_bound(det_.begin(), det_.end(), x - kSnap);
  const auto j = static_cast<std::size_t>(it - det_.begin());
  if (std::abs(det_[j] - x) <= kSnap) return {t1_[j], sigma_[j]};
  const double f = (x - det_[j - 1]) / (det_[j] - det_[j - 1]);
  const double s = std::hypot((1.0 - f) * sigma_[j - 1], f * sigma_[j]);
  return {(1.0 - f) * t1_[j - 1] + f * t1_[j], s};
}

namespace {

void finish_row(SweepRow& row, const Baseline& baseline, double at_detuning) {
  try {
    const ValueWithError b = baseline.at(at_detuning);
    row.t1_zero_us = b.value;
    row.t1_zero_sigma_us = b.sigma;
    const ValueWithError d = fractional_change(row.t1_us, b.value, row.t1_sigma_us, b.sigma);
    row.delta_t1_frac = d.value;
    row.sigma = d.sigma;
  } catch (const PreconditionError& e) {
    row.status = e.what();
  }
}

}  // namespace

CorrectedSweep correct_projective(std::span<const SweepRow> raw, const Baseline& baseline,
                                  const CorrectionSpec& spec) {
  spec.validate();
  CorrectedSweep out;
  if (raw.empty()) return out;
  const double rate = raw.front().rate_mhz;
  if (const auto fixed = spec.nonqnd_rate(rate)) {
    out.wing = {*fixed, 0.0, 0};
  } else {
    out.wing = estimate_wing_rate(raw, spec.wing_threshold_mhz);
  }
  out.stark_shift_mhz = spec.stark_shift(rate);

  for (const SweepRow& r : raw) {
    SweepRow row = r;
    row.delta_t1_frac = 0.0;
    row.sigma = 0.0;
    if (row.ok()) {
      try {
        const double t1c = subtract_nonqnd(r.t1_us, out.wing.rate);
        // Error of the corrected rate, mapped back through 1/rate.
        const double s_rate = std::hypot(rate_sigma(r.t1_us, r.t1_sigma_us), out.wing.sigma);
        row.t1_us = t1c;
        row.t1_sigma_us = s_rate * t1c * t1c;
      } catch (const PreconditionError& e) {
        row.status = e.what();
      }
    }
    row.detuning_mhz = r.detuning_mhz + out.stark_shift_mhz;
    if (row.ok()) finish_row(row, baseline, row.detuning_mhz);
    out.rows.rows.push_back(row);
  }
  return out;
}

CorrectedSweep correct_quasi(std::span<const SweepRow> raw, const Baseline& baseline,
                             const CorrectionSpec& spec, double pulse_tm, double period_tm) {
  spec.validate();
  CorrectedSweep out;
  for (const SweepRow& r : raw) {
    SweepRow row = r;
    row.delta_t1_frac = 0.0;
    row.sigma = 0.0;
    if (row.ok()) {
      const auto factor = spec.duty_factor(r.rate_mhz);
      const double f = factor ? *factor : duty_cycle_correct(1.0, pulse_tm, period_tm);
      row.t1_us = duty_cycle_scale(r.t1_us, f);
      row.t1_sigma_us = r.t1_sigma_us * f;
      finish_row(row, baseline, row.detuning_mhz);
    }
    out.rows.rows.push_back(row);
  }
  return out;
}

}  // namespace zeno
