#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "zeno/bath.hpp"
#include "zeno/corrections.hpp"
#include "zeno/errors.hpp"
#include "zeno/golden_rule.hpp"
#include "zeno/units.hpp"

using namespace zeno;

namespace {

BathSpec reference_bath() {
  const double B = to_angular(0.78);
  return {calibrate_strength(thermal_t1(1.0, 20.0), 20.0, B), B, 0.0};
}

double theory_t1(double det_mhz, double rate_mhz) {
  return 1.0 / decay_rate(reference_bath().with_detuning(to_angular(det_mhz)), FilterSpec::from_rate_mhz(rate_mhz), 20.0);
}

SweepRow row(double det, double rate, double t1, double t1_zero, double s = 0.0, double s0 = 0.0) {
  SweepRow r;
  r.detuning_mhz = det;
  r.rate_mhz = rate;
  r.t1_us = t1;
  r.t1_zero_us = t1_zero;
  r.t1_sigma_us = s;
  r.t1_zero_sigma_us = s0;
  return r;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> x;
  for (int i = 0; lo + i * step <= hi + 1e-9; ++i) x.push_back(lo + i * step);
  return x;
}

Baseline theory_baseline(const std::vector<double>& dets) {
  std::vector<double> t, s;
  for (double d : dets) {
    t.push_back(theory_t1(d, kNoMeasurement));
    s.push_back(0.0);
  }
  return Baseline(dets, t, s);
}

}  // namespace

TEST_SUITE("corrections") {

TEST_CASE("rate subtraction") {
  CHECK(subtract_nonqnd(10.0, 0.015) == doctest::Approx(1.0 / 0.085));
  CHECK(subtract_nonqnd(10.0, 0.015) == doctest::Approx(11.7647).epsilon(1e-5));
  CHECK(subtract_nonqnd(10.0, 0.0) == 10.0);
  CHECK_THROWS_AS(subtract_nonqnd(10.0, 0.1), PreconditionError);
  CHECK_THROWS_AS(subtract_nonqnd(10.0, 0.2), PreconditionError);
}

TEST_CASE("duty cycle") {
  CHECK(duty_cycle_correct(1.0, 0.1, 1.0) == doctest::Approx(0.9));
  CHECK(duty_cycle_correct(13.0, 0.0, 0.5) == 13.0);
  CHECK_THROWS_AS(duty_cycle_correct(1.0, 1.0, 1.0), PreconditionError);
  CHECK(duty_cycle_scale(10.0, 0.867) == doctest::Approx(8.67));
  CHECK(duty_cycle_scale(10.0, 0.637) == doctest::Approx(6.37));
  CHECK_THROWS_AS(duty_cycle_scale(10.0, 1.2), PreconditionError);
}

TEST_CASE("stark realignment") {
  const std::vector<double> d{-1.0, 0.0, 0.5};
  CHECK(stark_realign(d, 0.0) == d);
  const auto s = stark_realign(d, 0.25);
  CHECK(s[1] == 0.25);
  CHECK(s[0] == -0.75);
}

TEST_CASE("baseline interpolation") {
  const Baseline b({-1.0, 0.0, 1.0}, {10.0, 6.0, 12.0}, {0.4, 0.2, 0.6});
  CHECK(b.at(0.0).value == 6.0);
  CHECK(b.at(0.25).value == doctest::Approx(7.5));
  CHECK(b.at(-0.5).value == doctest::Approx(8.0));
  CHECK(b.at(0.25).sigma == doctest::Approx(std::hypot(0.75 * 0.2, 0.25 * 0.6)));
  CHECK_THROWS_AS(b.at(1.5), PreconditionError);
  CHECK_THROWS_AS(Baseline({0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0}), PreconditionError);
}

TEST_CASE("wing rate") {
  std::vector<SweepRow> rows{row(-5.0, 2.0, 1.0 / (0.05 + 0.015), 20.0), row(-4.5, 2.0, 1.0 / (0.05 + 0.014), 20.0),
                             row(0.0, 2.0, 9.0, 6.0), row(4.5, 2.0, 1.0 / (0.05 + 0.016), 20.0),
                             row(5.0, 2.0, 1.0 / (0.05 + 0.015), 20.0)};
  const WingRate w = estimate_wing_rate(rows);
  CHECK(w.rows == 4);
  CHECK(w.rate == doctest::Approx(0.015).epsilon(1e-12));
  CHECK(w.sigma > 0.0);

  SUBCASE("order invariant") {
    std::mt19937_64 eng(1);
    for (int k = 0; k < 10; ++k) {
      std::shuffle(rows.begin(), rows.end(), eng);
      CHECK(estimate_wing_rate(rows).rate == w.rate);
    }
  }
  SUBCASE("inverse variance weights") {
    std::vector<SweepRow> r{row(-5.0, 2.0, 1.0 / 0.06, 20.0, 0.5, 0.5), row(5.0, 2.0, 1.0 / 0.07, 20.0, 2.0, 0.5)};
    const WingRate ww = estimate_wing_rate(r);
    const double v1 = std::pow(0.5 * 0.06 * 0.06, 2) + std::pow(0.5 / 400.0, 2);
    const double v2 = std::pow(2.0 * 0.07 * 0.07, 2) + std::pow(0.5 / 400.0, 2);
    CHECK(ww.rate == doctest::Approx((0.01 / v1 + 0.02 / v2) / (1 / v1 + 1 / v2)).epsilon(1e-12));
    CHECK(ww.sigma == doctest::Approx(std::sqrt(1 / (1 / v1 + 1 / v2))).epsilon(1e-12));
  }
  SUBCASE("too few wing rows") {
    std::vector<SweepRow> r{row(0.0, 2.0, 9.0, 6.0), row(5.0, 2.0, 19.0, 20.0)};
    CHECK_THROWS_AS(estimate_wing_rate(r), PreconditionError);
  }
}

TEST_CASE("corrections are monotone") {
  double prev = 0.0;
  for (double t1 = 1.0; t1 < 50.0; t1 += 0.7) {
    const double v = subtract_nonqnd(t1, 0.015);
    CHECK(v > prev);
    CHECK(duty_cycle_correct(t1, 0.1, 0.5) > duty_cycle_correct(t1 - 0.5, 0.1, 0.5));
    prev = v;
  }
  for (double w = 0.0; w < 0.09; w += 0.01) CHECK(subtract_nonqnd(10.0, w + 0.005) > subtract_nonqnd(10.0, w));
}

TEST_CASE("projective pipeline recovers injected side effects on theory curves") {
  const double rate = 2.0;
  const double wing = 0.015;
  const double shift = 0.25;
  const auto base_dets = grid(-5.0, 5.0, 0.25);
  const Baseline baseline = theory_baseline(base_dets);

  // Nominal detunings sit 0.25 below the grid so realigned rows land on nodes.
  std::vector<SweepRow> raw;
  for (double d : grid(-4.75, 4.75, 0.5)) {
    const double nominal = d - shift;
    const double t1 = 1.0 / (1.0 / theory_t1(d, rate) + wing);
    raw.push_back(row(nominal, rate, t1, baseline.at(nominal).value));
  }
  CorrectionSpec spec;
  spec.stark_shift_per_setting[rate] = shift;
  spec.nonqnd_rate_per_setting[rate] = wing;
  const CorrectedSweep c = correct_projective(raw, baseline, spec);
  CHECK(c.wing.rate == wing);
  for (const SweepRow& r : c.rows.rows) {
    REQUIRE(r.ok());
    const double want = theory_t1(r.detuning_mhz, rate) / theory_t1(r.detuning_mhz, kNoMeasurement) - 1.0;
    CHECK(r.delta_t1_frac == doctest::Approx(want).epsilon(1e-9));
  }

  SUBCASE("estimated wing rate") {
    spec.nonqnd_rate_per_setting.clear();
    const CorrectedSweep e = correct_projective(raw, baseline, spec);
    // The bath's own wing contribution rides on top of the injected rate.
    CHECK(e.wing.rate == doctest::Approx(wing).epsilon(0.1));
    CHECK(e.wing.rows == 3);
  }
}

TEST_CASE("quasi pipeline") {
  const Baseline baseline = theory_baseline(grid(-3.0, 3.0, 0.5));
  std::vector<SweepRow> raw;
  for (double d : grid(-3.0, 3.0, 0.5)) {
    const double t1 = theory_t1(d, 1.0) / (1.0 - 0.1);
    raw.push_back(row(d, 1.0, t1, baseline.at(d).value, 0.1, 0.0));
  }
  const CorrectedSweep c = correct_quasi(raw, baseline, CorrectionSpec{}, 0.1, 1.0);
  for (const SweepRow& r : c.rows.rows) {
    const double want = theory_t1(r.detuning_mhz, 1.0) / theory_t1(r.detuning_mhz, kNoMeasurement) - 1.0;
    CHECK(r.delta_t1_frac == doctest::Approx(want).epsilon(1e-9));
    CHECK(r.t1_sigma_us == doctest::Approx(0.09));
  }
  CorrectionSpec override_spec;
  override_spec.duty_factor_per_setting[1.0] = 0.867;
  const CorrectedSweep o = correct_quasi(raw, baseline, override_spec, 0.1, 1.0);
  CHECK(o.rows.rows[0].t1_us == doctest::Approx(raw[0].t1_us * 0.867));
  CorrectionSpec bad;
  bad.duty_factor_per_setting[1.0] = 0.0;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
}

}
