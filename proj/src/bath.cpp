#include "zeno/bath.hpp"

#include <cmath>
#include <sstream>

#include "zeno/errors.hpp"
#include "zeno/units.hpp"

namespace zeno {

void BathSpec::validate() const {
  if (!(width_B > 0.0)) throw PreconditionError("bath: width_B must be > 0");
  if (!(strength_A >= 0.0)) throw PreconditionError("bath: strength_A must be >= 0");
}

double psd(const BathSpec& bath, double omega) {
  const double x = omega - bath.detuning_delta;
  const double r = bath.strength_A / (x * x + bath.width_B * bath.width_B);
  return r * r;
}

double thermal_t1(double n_thermal, double t1_spont) {
  if (n_thermal < 0.0) throw PreconditionError("thermal_t1: negative thermal photon number");
  if (!(t1_spont > 0.0)) throw PreconditionError("thermal_t1: t1_spont must be > 0");
  return t1_spont / (2.0 * n_thermal + 1.0);
}

double calibrate_strength(double t1_resonant, double t1_spont, double width_B) {
  if (!(t1_resonant > 0.0) || !(t1_resonant < t1_spont)) {
    throw PreconditionError("calibrate_strength: need 0 < t1_resonant < t1_spont");
  }
  if (!(width_B > 0.0)) throw PreconditionError("calibrate_strength: width_B must be > 0");
  const double added = 1.0 / t1_resonant - 1.0 / t1_spont;
  return width_B * width_B * std::sqrt(added) / kTwoPi;
}

double max_synthesis_dt(const BathSpec& bath) {
  return 0.1 / (bath.width_B + std::abs(bath.detuning_delta));
}

std::size_t warmup_samples(const BathSpec& bath, double dt) {
  return static_cast<std::size_t>(std::ceil(10.0 / (bath.width_B * dt)));
}

LowPassCascade::LowPassCascade(double width_B, double dt)
    : a_(std::exp(-width_B * dt)), b_(1.0 - std::exp(-width_B * dt)) {
  if (!(width_B > 0.0) || !(dt > 0.0)) throw PreconditionError("LowPassCascade: need B > 0 and dt > 0");
}

void synthesize_into(const BathSpec& bath, double dt, std::span<std::complex<double>> out,
                     RngStream& rng) {
  bath.validate();
  const double dt_max = max_synthesis_dt(bath);
  if (!(dt > 0.0) || dt > dt_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "synthesize: dt = " << dt << " us does not resolve the bath; need dt <= 0.1/(B+|delta|) = "
        << dt_max << " us";
    throw PreconditionError(msg.str());
  }
  using C = std::complex<double>;
  LowPassCascade filter(bath.width_B, dt);
  const double g0 = psd(bath, bath.detuning_delta);  // A^2 / B^4
  const double sigma = std::sqrt(g0 / (2.0 * dt));   // per quadrature

  C y{0.0, 0.0};
  auto step = [&] {
    const C x{sigma * rng.normal(), sigma * rng.normal()};
    y = filter.push(x);
  };
  const std::size_t warm = warmup_samples(bath, dt);
  for (std::size_t n = 0; n < warm; ++n) step();

  // Re-anchor the rotating phasor periodically so rounding does not accumulate.
  constexpr std::size_t kAnchor = 1024;
  const C rot = std::polar(1.0, bath.detuning_delta * dt);
  C phasor{1.0, 0.0};
  for (std::size_t n = 0; n < out.size(); ++n) {
    if (n % kAnchor == 0) phasor = std::polar(1.0, bath.detuning_delta * dt * static_cast<double>(n));
    step();
    out[n] = y * phasor;
    phasor *= rot;
  }
}

BathRealization synthesize(const BathSpec& bath, double dt, double duration, RngStream& rng) {
  if (!(duration >= 0.0)) throw PreconditionError("synthesize: negative duration");
  BathRealization r;
  r.dt = dt;
  r.detuning_delta = bath.detuning_delta;
  r.samples.resize(static_cast<std::size_t>(std::llround(duration / dt)) + 1);
  synthesize_into(bath, dt, r.samples, rng);
  return r;
}

}  // namespace zeno
