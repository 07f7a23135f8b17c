#pragma once

#include <complex>
#include <span>
#include <vector>

#include "zeno/rng.hpp"

namespace zeno {

/// Squared-Lorentzian bath: G(w) = (A / ((w - delta)^2 + B^2))^2.
/// width_B and detuning_delta are angular (rad/us); delta is bath centre minus qubit.
struct BathSpec {
  double strength_A = 0.0;
  double width_B = 0.0;
  double detuning_delta = 0.0;

  void validate() const;
  BathSpec with_detuning(double delta) const {
    BathSpec b = *this;
    b.detuning_delta = delta;
    return b;
  }
};

/// One classical draw of the bath drive, sampled every dt starting at t = 0.
struct BathRealization {
  std::vector<std::complex<double>> samples;
  double dt = 0.0;
  double detuning_delta = 0.0;
};

double psd(const BathSpec& bath, double omega);

/// Radiative decay time with N thermal photons: t1_spont / (2N + 1).
double thermal_t1(double n_thermal, double t1_spont);

/// Bath strength A whose no-measurement rate on resonance is
/// 1/t1_resonant - 1/t1_spont, i.e. 4 pi^2 A^2 / B^4 equals that rate.
double calibrate_strength(double t1_resonant, double t1_spont, double width_B);

/// Largest sample interval synthesize() accepts for this bath.
double max_synthesis_dt(const BathSpec& bath);

/// Number of samples discarded before a record starts (10/B of filter warm-up).
std::size_t warmup_samples(const BathSpec& bath, double dt);

/// Two cascaded one-pole low-pass stages y <- a y + (1 - a) x, a = exp(-B dt).
/// Unit gain at DC; |H(w)|^2 -> (B^2 / (B^2 + w^2))^2 for w dt << 1.
class LowPassCascade {
 public:
  LowPassCascade(double width_B, double dt);

  std::complex<double> push(std::complex<double> x) {
    y1_ = a_ * y1_ + b_ * x;
    y2_ = a_ * y2_ + b_ * y1_;
    return y2_;
  }

 private:
  double a_;
  double b_;
  std::complex<double> y1_{0.0, 0.0};
  std::complex<double> y2_{0.0, 0.0};
};

/// Complex white noise through two cascaded one-pole low-pass stages with pole
/// at B, then shifted by e^{i delta t}. The two-sided PSD of the output,
/// S(w) = int <b(t+tau) b*(t)> e^{-i w tau} dtau, equals psd(bath, w).
BathRealization synthesize(const BathSpec& bath, double dt, double duration, RngStream& rng);

/// Allocation-free variant: fills `out` with consecutive samples starting at t = 0.
void synthesize_into(const BathSpec& bath, double dt, std::span<std::complex<double>> out,
                     RngStream& rng);

}  // namespace zeno
