#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "zeno/bath.hpp"
#include "zeno/ensemble.hpp"
#include "zeno/errors.hpp"
#include "zeno/fit.hpp"
#include "zeno/mc_sweep.hpp"
#include "zeno/trajectory.hpp"
#include "zeno/units.hpp"

using namespace zeno;

namespace {

constexpr double kPi = std::numbers::pi;

SegmentParams coherent_params(double rabi, double qubit_det, double probe_det) {
  SegmentParams p;
  p.dt = 0.0025;
  p.t1_spont = 1e12;
  p.probe_rabi = rabi;
  p.qubit_detuning = qubit_det;
  p.probe_detuning = probe_det;
  return p;
}

SimConfig small_config() {
  SimConfig c;
  const double B = to_angular(0.78);
  c.bath = BathSpec{calibrate_strength(thermal_t1(1.0, 20.0), 20.0, B), B, 0.0};
  c.n_traj = 64;
  c.duration = 10.0;
  c.time_points = 11;
  return c;
}

}  // namespace

TEST_SUITE("trajectory") {

TEST_CASE("resonant rabi oscillation") {
  RngStream rng(1, 0);
  const SegmentParams p = coherent_params(to_angular(1.0), 0.0, 0.0);
  PureState3 s = PureState3::ground();
  double t = 0.0;
  for (int k = 0; k < 40; ++k) {
    s = evolve_segment(s, {}, 20, t, p, rng);
    t += 20 * p.dt;
    const double want = std::pow(std::sin(to_angular(1.0) * t / 2), 2);
    CHECK(std::abs(s.pop_e() - want) < 1e-4);
    CHECK(s.norm2() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("constant bath sample drives rabi oscillation from the excited state") {
  RngStream rng(1, 0);
  SegmentParams p = coherent_params(0.0, 0.0, 0.0);
  p.coupling_g = kAnalyticCoupling;
  const double omega = to_angular(0.8);
  const std::vector<std::complex<double>> bath(4000, omega / p.coupling_g);
  PureState3 s = PureState3::excited();
  for (int k = 0; k < 10; ++k) {
    s = evolve_segment(s, std::span(bath).subspan(400 * k, 400), 400, 400 * k * p.dt, p, rng);
    const double t = 400 * (k + 1) * p.dt;
    CHECK(std::abs(s.pop_e() - std::pow(std::cos(omega * t / 2), 2)) < 1e-4);
  }
}

TEST_CASE("detuned rabi oscillation") {
  RngStream rng(1, 0);
  const double omega = to_angular(1.0);
  const double detuning = to_angular(0.5);
  const SegmentParams p = coherent_params(omega, 0.0, detuning);
  PureState3 s = PureState3::ground();
  double t = 0.0;
  const double w = std::hypot(omega, detuning);
  for (int k = 0; k < 30; ++k) {
    s = evolve_segment(s, {}, 25, t, p, rng);
    t += 25 * p.dt;
    const double want = omega * omega / (w * w) * std::pow(std::sin(w * t / 2), 2);
    CHECK(std::abs(s.pop_e() - want) < 1e-4);
  }
}

TEST_CASE("free precession keeps populations") {
  RngStream rng(2, 0);
  SegmentParams p = coherent_params(0.0, to_angular(0.7), 0.0);
  PureState3 s;
  s.g = std::sqrt(0.4);
  s.e = std::sqrt(0.6);
  const PureState3 out = evolve_segment(s, {}, 400, 0.0, p, rng);
  CHECK(out.pop_e() == doctest::Approx(0.6).epsilon(1e-12));
  // Phase advances at the qubit detuning: coherence rotates by -D t,
  // up to the step's third-order phase error.
  const double t = 400 * p.dt;
  CHECK(std::abs(std::remainder(std::arg(out.coherence()) + to_angular(0.7) * t, 2 * kPi)) < 1e-4);
}

TEST_CASE("pure spontaneous decay") {
  SimConfig c;
  c.bath_enabled = false;
  c.n_traj = 2000;
  c.seed = 4;
  const T1Estimate e = estimate_t1(c);
  REQUIRE(e.ok());
  CHECK(std::abs(e.t1 - 20.0) < 3 * e.t1_sigma);
  CHECK(e.t1_sigma < 0.05 * 20.0);
}

TEST_CASE("parallel ensemble is bit-identical to the serial reference") {
  SimConfig c = small_config();
  c.schedule = MeasurementSchedule::quasi_random(2.0, 0.05);
  const TrajectoryPlan plan = inversion_recovery_plan(c);
  const EnsembleSamples ser = run_ensemble_serial(plan, 9, c.n_traj);
  for (int threads : {1, 2, 4}) {
    const EnsembleSamples par = run_ensemble(plan, 9, c.n_traj, threads);
    CHECK(par.values == ser.values);
  }
}

TEST_CASE("ensembles are reproducible and seed dependent") {
  SimConfig c = small_config();
  c.schedule = MeasurementSchedule::projective(1.0);
  const PopulationCurve a = run_inversion_recovery(c);
  const PopulationCurve b = run_inversion_recovery(c);
  CHECK(a.p_e == b.p_e);
  c.seed = 2;
  CHECK(run_inversion_recovery(c).p_e != a.p_e);
  CHECK(a.p_e.front() == 1.0);
  CHECK(a.times.size() == c.time_points);
}

TEST_CASE("config validation") {
  SimConfig c = small_config();
  CHECK_NOTHROW(c.validate());
  c.dt = 0.05;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c = small_config();
  c.schedule = MeasurementSchedule::projective(2.0);
  c.dt = 0.003;  // Tm is not a whole number of steps
  CHECK_THROWS_AS(inversion_recovery_plan(c), PreconditionError);
  c = small_config();
  c.schedule = MeasurementSchedule::quasi_random(2.0, 0.6);
  CHECK_THROWS_AS(c.validate(), PreconditionError);
}

TEST_CASE("ramsey fringe carries the berry phase") {
  SimConfig c;
  c.bath_enabled = false;
  c.n_traj = 1;
  std::vector<double> phases;
  for (int k = 0; k < 24; ++k) phases.push_back(2 * kPi * k / 24);
  for (auto [t1, t2] : {std::pair{0.0, 0.0}, {0.5, 0.5}, {0.3, 1.7}, {2.0, 0.4}}) {
    const RamseyFringe f = run_ramsey(c, t1, t2, phases);
    const double want = std::remainder(t2 - t1 + kPi, 2 * kPi);
    CHECK(std::abs(std::remainder(f.offset - want, 2 * kPi)) < 1e-9);
    CHECK(f.visibility == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("spectroscopy without the bath peaks at the qubit frequency") {
  SimConfig c;
  c.bath_enabled = false;
  c.dt = 0.005;
  c.n_traj = 40;
  std::vector<double> dets;
  for (int k = -20; k <= 20; ++k) dets.push_back(0.05 * k);
  const SpectroscopyCurve s = run_spectroscopy(c, dets, 0.05, 40.0);
  REQUIRE(s.p_e.size() == dets.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < s.p_e.size(); ++i) {
    if (s.p_e[i] > s.p_e[best]) best = i;
  }
  CHECK(std::abs(dets[best]) < 1e-12);
}

}
