#pragma once

#include <complex>
#include <span>
#include <vector>

namespace zeno {

/// Averaged periodogram. psd is per unit cyclic frequency, so
/// sum(psd) * bin_width approximates the signal variance.
struct Periodogram {
  std::vector<double> freqs;
  std::vector<double> psd;
  double bin_width = 0.0;
};

/// Welch estimate of a real series (mean removed), one-sided, DC through Nyquist.
/// Hann window, 50% overlap, `segments` segments.
Periodogram welch_psd(std::span<const double> x, double dt, std::size_t segments = 8);

/// Two-sided Welch estimate of a complex series, frequencies ascending.
Periodogram welch_psd(std::span<const std::complex<double>> x, double dt, std::size_t segments = 8);

struct SpectralEstimate {
  std::vector<double> freqs;  ///< cyclic MHz
  std::vector<double> psd;
  double alpha = 0.0;
  double alpha_sigma = 0.0;
  double variance = 0.0;  ///< of the fractional fluctuations
};

/// PSD of fractional fluctuations (t1 - mean) / mean, with a 1/f^alpha fit.
/// The fit band drops DC, the two lowest bins and the top octave.
/// Sampling jitter above 10% of the median step is rejected; milder
/// irregularity is resampled linearly onto a uniform grid.
SpectralEstimate fluctuation_psd(std::span<const double> times, std::span<const double> t1);

/// Slope and standard error of an ordinary least-squares line.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_sigma = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace zeno
