#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "zeno/errors.hpp"
#include "zeno/qubit.hpp"
#include "zeno/rng.hpp"

using namespace zeno;
using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3cd;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// (g, e, f) basis. pi rotation on e-f with the e<-f element -i e^{i theta}.
Mat3 ef_pi(double theta) {
  Mat3 m = Mat3::Zero();
  m(0, 0) = 1.0;
  m(1, 2) = -kI * std::exp(kI * theta);
  m(2, 1) = -kI * std::exp(-kI * theta);
  return m;
}

Vec3 vec(const PureState3& s) { return Vec3(s.g, s.e, s.f); }

PureState3 state(cplx g, cplx e, cplx f = 0.0) {
  PureState3 s;
  s.g = g;
  s.e = e;
  s.f = f;
  return s;
}

}  // namespace

TEST_SUITE("qubit") {

TEST_CASE("ef rotation matches the matrix oracle") {
  const PureState3 s = state({0.3, 0.1}, {0.5, -0.2}, {0.1, 0.7});
  for (double theta : {0.0, 0.4, kPi / 2, 2.5, -1.1}) {
    const Vec3 want = ef_pi(theta) * vec(s);
    const Vec3 got = vec(rotate_ef_pi(s, theta));
    CHECK((want - got).norm() < 1e-14);
  }
}

TEST_CASE("berry phase on the excited state over an angle grid") {
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      const double t1 = 2 * kPi * i / 12.0;
      const double t2 = 2 * kPi * j / 12.0;
      const Vec3 oracle = ef_pi(t2) * ef_pi(t1) * Vec3(0, 1, 0);
      const PureState3 out = quasi_measure(PureState3::excited(), t1, t2);
      CHECK((vec(out) - oracle).norm() < 1e-12);
      CHECK(std::abs(out.e - std::exp(kI * (t2 - t1 + kPi))) < 1e-12);
    }
  }
}

TEST_CASE("quasi measurement leaves the ground amplitude alone") {
  const PureState3 s = state(std::sqrt(0.3), std::sqrt(0.7) * std::exp(kI * 0.2));
  const PureState3 out = quasi_measure(s, 0.7, 1.9);
  CHECK(out.g == s.g);
  CHECK(out.pop_e() == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(out.pop_f() == 0.0);
  CHECK(std::arg(out.coherence() / s.coherence()) == doctest::Approx(std::remainder(1.9 - 0.7 + kPi, 2 * kPi)));
}

TEST_CASE("double ef rotation flips the e-f subspace sign") {
  const PureState3 s = state({0.3, 0.1}, {0.5, -0.2}, {0.1, 0.7});
  for (double theta : {0.0, 1.3, -2.2}) {
    const PureState3 out = rotate_ef_pi(rotate_ef_pi(s, theta), theta);
    CHECK(out.g == s.g);
    CHECK(std::abs(out.e + s.e) < 1e-15);
    CHECK(std::abs(out.f + s.f) < 1e-15);
  }
}

TEST_CASE("equal-angle quasi measurement flips the superposition sign") {
  const double r = 1.0 / std::sqrt(2.0);
  const PureState3 out = quasi_measure(state(r, r), 0.0, 0.0);
  CHECK(std::abs(out.g - r) < 1e-15);
  CHECK(std::abs(out.e + r) < 1e-15);
  CHECK(quasi_measure(PureState3::ground(), 0.4, 2.0).g == 1.0);
}

TEST_CASE("quasi measurement rejects leaked states") {
  CHECK_THROWS_AS(quasi_measure(state(0.6, 0.0, 0.8), 0.0, 0.0), PreconditionError);
}

TEST_CASE("random-phase dephasing keeps populations and averages coherence out") {
  RngStream rng(7, 0);
  const PureState3 s = state(std::sqrt(0.5), std::sqrt(0.5));
  cplx mean{0.0, 0.0};
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const PureState3 out = dephasing_measure(s, rng);
    CHECK(out.pop_e() == doctest::Approx(0.5).epsilon(1e-14));
    mean += out.coherence();
  }
  mean /= static_cast<double>(n);
  // |mean| ~ 0.5 / sqrt(n) for uniform phases.
  CHECK(std::abs(mean) < 5 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("projection follows the Born rule") {
  RngStream rng(3, 1);
  const PureState3 s = state(std::sqrt(0.25), std::sqrt(0.75));
  int excited = 0;
  const int n = 40000;
  for (int k = 0; k < n; ++k) {
    const Projection p = project_energy(s, rng);
    if (p.outcome == Outcome::e) {
      ++excited;
      CHECK(p.state.pop_e() == 1.0);
    } else {
      CHECK(p.state.pop_g() == 1.0);
    }
  }
  const double frac = static_cast<double>(excited) / n;
  CHECK(std::abs(frac - 0.75) < 5 * std::sqrt(0.75 * 0.25 / n));
}

TEST_CASE("ge rotations") {
  const PureState3 pi = rotate_ge(PureState3::ground(), kPi, 0.0);
  CHECK(pi.pop_e() == doctest::Approx(1.0));
  const PureState3 half = rotate_ge(PureState3::ground(), kPi / 2, 0.3);
  CHECK(half.pop_e() == doctest::Approx(0.5));
  CHECK(half.norm2() == doctest::Approx(1.0));
  // Two half turns about the same axis compose to a full pi rotation.
  CHECK(rotate_ge(half, kPi / 2, 0.3).pop_e() == doctest::Approx(1.0));
}

}
