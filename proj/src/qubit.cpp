#include "zeno/qubit.hpp"

#include <cmath>
#include <numbers>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_no_leakage(const PureState3& s, const char* op) {
  if (std::abs(s.f) > kLeakageTolerance) {
    throw PreconditionError(std::string(op) + ": state has leaked into |f> (|amp_f| = " +
                            std::to_string(std::abs(s.f)) + ")");
  }
}

}  // namespace

PureState3 rotate_ef_pi(const PureState3& state, double theta) {
  const cplx ph = std::polar(1.0, theta);
  PureState3 out;
  out.g = state.g;
  out.e = -kI * ph * state.f;
  out.f = -kI * std::conj(ph) * state.e;
  return out;
}

PureState3 quasi_measure(const PureState3& state, double theta1, double theta2) {
  require_no_leakage(state, "quasi_measure");
  PureState3 out = rotate_ef_pi(rotate_ef_pi(state, theta1), theta2);
  out.f = 0.0;  // exactly zero in exact arithmetic
  return out;
}

PureState3 dephasing_measure(const PureState3& state, RngStream& rng) {
  const double theta2 = 2.0 * std::numbers::pi * rng.uniform();
  return quasi_measure(state, 0.0, theta2);
}

Projection project_energy(const PureState3& state, RngStream& rng) {
  require_no_leakage(state, "project_energy");
  const double p_e = state.pop_e() / (state.pop_g() + state.pop_e());
  if (rng.uniform() < p_e) return {Outcome::e, PureState3::excited()};
  return {Outcome::g, PureState3::ground()};
}

PureState3 rotate_ge(const PureState3& state, double angle, double phase) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const cplx ph = std::polar(1.0, phase);
  PureState3 out = state;
  out.g = c * state.g - kI * s * ph * state.e;
  out.e = c * state.e - kI * s * std::conj(ph) * state.g;
  return out;
}

}  // namespace zeno
