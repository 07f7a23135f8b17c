#pragma once

#include <complex>

#include "zeno/rng.hpp"

namespace zeno {

using cplx = std::complex<double>;

/// Transmon state restricted to its three lowest levels {g, e, f}.
/// g and e span the qubit; f is the auxiliary level used by quasi-measurements.
struct PureState3 {
  cplx g{1.0, 0.0};
  cplx e{0.0, 0.0};
  cplx f{0.0, 0.0};

  static PureState3 ground() { return {}; }
  static PureState3 excited() { return {{0, 0}, {1, 0}, {0, 0}}; }

  double pop_g() const { return std::norm(g); }
  double pop_e() const { return std::norm(e); }
  double pop_f() const { return std::norm(f); }
  double norm2() const { return pop_g() + pop_e() + pop_f(); }
  /// conj(amp_g) * amp_e
  cplx coherence() const { return std::conj(g) * e; }
};

enum class Outcome { g, e };

/// Leakage above which an operation that requires amp_f == 0 refuses the state.
inline constexpr double kLeakageTolerance = 1e-9;

/// pi rotation on the e-f transition about the equatorial axis at angle theta.
/// Acts on (e, f) with the block [[0, -i e^{+i theta}], [-i e^{-i theta}, 0]].
PureState3 rotate_ef_pi(const PureState3& state, double theta);

/// Two e-f pi pulses: e leaves to f and comes back carrying the Berry phase
/// (theta2 - theta1) + pi. Throws PreconditionError if the state has leaked into f.
PureState3 quasi_measure(const PureState3& state, double theta1, double theta2);

/// Quasi-measurement with theta1 = 0 and theta2 uniform on [0, 2pi).
PureState3 dephasing_measure(const PureState3& state, RngStream& rng);

struct Projection {
  Outcome outcome;
  PureState3 state;
};

/// Born-rule projective energy measurement in the qubit manifold.
Projection project_energy(const PureState3& state, RngStream& rng);

/// Rotation by angle `angle` about the equatorial g-e axis at `phase`:
/// cos(angle/2) I - i sin(angle/2) (e^{-i phase} sigma_+ + e^{+i phase} sigma_-).
PureState3 rotate_ge(const PureState3& state, double angle, double phase);

}  // namespace zeno
