#include "zeno/golden_rule.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "zeno/errors.hpp"
#include "zeno/fit.hpp"
#include "zeno/units.hpp"

namespace zeno {

namespace {

constexpr double kRateRelTol = 1e-6;
// Core window: 20 bath widths around the peak and the first 20 filter lobes.
constexpr double kBathWidths = 20.0;
constexpr int kFilterLobes = 20;

}  // namespace

FilterSpec FilterSpec::from_rate_mhz(double rate_mhz) {
  if (rate_mhz == kNoMeasurement) return none();
  if (!(rate_mhz > 0.0)) throw PreconditionError("filter: measurement rate must be > 0");
  return periodic(1.0 / rate_mhz);
}

double filter_function(double omega, double t_m) {
  if (!(t_m > 0.0)) throw PreconditionError("filter_function: t_m must be > 0");
  const double x = 0.5 * omega * t_m;
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return t_m * (1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 45.0);
  }
  const double s = std::sin(x) / x;
  return t_m * s * s;
}

double no_measurement_rate(const BathSpec& bath, double t1_spont) {
  if (!(t1_spont > 0.0)) throw PreconditionError("no_measurement_rate: t1_spont must be > 0");
  bath.validate();
  return 1.0 / t1_spont + 2.0 * kTwoPi * std::numbers::pi * psd(bath, 0.0);
}

RateResult decay_rate_detailed(const BathSpec& bath, const FilterSpec& filter, double t1_spont) {
  if (!(t1_spont > 0.0)) throw PreconditionError("decay_rate: t1_spont must be > 0");
  bath.validate();
  if (filter.mode == FilterSpec::Mode::no_measurement) {
    return {no_measurement_rate(bath, t1_spont), 0.0};
  }
  const double tm = filter.t_m;
  if (!(tm > 0.0)) throw PreconditionError("decay_rate: t_m must be > 0");
  if (bath.strength_A == 0.0) return {1.0 / t1_spont, 0.0};

  const double B = bath.width_B;
  const double delta = bath.detuning_delta;
  const double lobe = kTwoPi / tm;
  const double w_filter = kFilterLobes * lobe;
  const double lo = std::min(-w_filter, delta - kBathWidths * B);
  const double hi = std::max(w_filter, delta + kBathWidths * B);

  std::vector<double> breaks{lo, hi};
  for (int k = -kFilterLobes; k <= kFilterLobes; ++k) {
    const double z = k * lobe;
    if (z > lo && z < hi) breaks.push_back(z);
  }
  for (double m : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
    const double p = delta + m * B;
    if (p > lo && p < hi) breaks.push_back(p);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto integrand = [&](double w) { return filter_function(w, tm) * psd(bath, w); };
  QuadOptions core_opts;
  core_opts.rel_tol = 1e-3 * kRateRelTol;
  const QuadResult core = integrate(integrand, breaks, core_opts);

  // The sinc^2 envelope falls as 1/w^2 and G as 1/w^4; the tails are tiny but kept.
  QuadOptions tail_opts;
  tail_opts.abs_tol = 1e-4 * kRateRelTol * std::abs(core.value);
  tail_opts.rel_tol = 1e-6;
  const double scale = hi - lo;
  const QuadResult upper = integrate_upper_tail(integrand, hi, scale, tail_opts);
  const QuadResult lower = integrate_lower_tail(integrand, lo, scale, tail_opts);

  const double overlap = core.value + upper.value + lower.value;
  const double err = core.abs_error + upper.abs_error + lower.abs_error;
  if (err > kRateRelTol * std::abs(overlap)) {
    throw QuadratureError("decay_rate: overlap integral missed its 1e-6 relative target",
                          kTwoPi * overlap, kTwoPi * err);
  }
  return {1.0 / t1_spont + kTwoPi * overlap, kTwoPi * err};
}

double decay_rate(const BathSpec& bath, const FilterSpec& filter, double t1_spont) {
  return decay_rate_detailed(bath, filter, t1_spont).rate;
}

namespace {

SweepRow sweep_row(const BathSpec& tmpl, double detuning_mhz, double rate_mhz, double t1_spont) {
  SweepRow row;
  row.detuning_mhz = detuning_mhz;
  row.rate_mhz = rate_mhz;
  try {
    const BathSpec bath = tmpl.with_detuning(to_angular(detuning_mhz));
    row.t1_zero_us = 1.0 / no_measurement_rate(bath, t1_spont);
    row.t1_us = 1.0 / decay_rate(bath, FilterSpec::from_rate_mhz(rate_mhz), t1_spont);
    row.delta_t1_frac = fractional_change(row.t1_us, row.t1_zero_us).value;
  } catch (const Error& e) {
    row.status = e.what();
  }
  return row;
}

void check_sweep_args(std::span<const double> detunings_mhz) {
  if (detunings_mhz.empty()) throw PreconditionError("sweep: empty detuning grid");
}

}  // namespace

SweepResult sweep(const BathSpec& bath_template, std::span<const double> detunings_mhz,
                  std::span<const double> rates_mhz, double t1_spont) {
  check_sweep_args(detunings_mhz);
  const std::size_t nd = detunings_mhz.size();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(nd * rates_mhz.size());
  SweepResult out;
  out.rows.resize(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out.rows[u] = sweep_row(bath_template, detunings_mhz[u % nd], rates_mhz[u / nd], t1_spont);
  }
  return out;
}

SweepResult sweep_serial(const BathSpec& bath_template, std::span<const double> detunings_mhz,
                         std::span<const double> rates_mhz, double t1_spont) {
  check_sweep_args(detunings_mhz);
  SweepResult out;
  for (double rate : rates_mhz) {
    for (double det : detunings_mhz) out.rows.push_back(sweep_row(bath_template, det, rate, t1_spont));
  }
  return out;
}

}  // namespace zeno
