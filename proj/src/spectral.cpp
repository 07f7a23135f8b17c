#include "zeno/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

struct FftwPlan {
  fftw_plan plan = nullptr;
  ~FftwPlan() {
    if (plan != nullptr) fftw_destroy_plan(plan);
  }
};

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer alloc(std::size_t n) {
  return FftwBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

struct Segmentation {
  std::size_t length = 0;
  std::size_t hop = 0;
  std::size_t count = 0;
};

Segmentation segment(std::size_t n, std::size_t segments) {
  if (segments == 0) throw PreconditionError("welch_psd: need at least one segment");
  Segmentation s;
  s.count = segments;
  s.length = 2 * n / (segments + 1);
  if (s.length < 8) throw PreconditionError("welch_psd: series too short for the segment count");
  s.hop = s.length / 2;
  return s;
}

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  }
  return w;
}

// Summed |FFT|^2 over segments; `load` fills one windowed segment.
template <class Load>
std::vector<double> averaged_power(const Segmentation& seg, Load load) {
  auto in = alloc(seg.length);
  auto out = alloc(seg.length);
  FftwPlan plan;
  plan.plan = fftw_plan_dft_1d(static_cast<int>(seg.length), in.get(), out.get(), FFTW_FORWARD,
                               FFTW_ESTIMATE);
  std::vector<double> power(seg.length, 0.0);
  for (std::size_t s = 0; s < seg.count; ++s) {
    load(s * seg.hop, in.get());
    fftw_execute(plan.plan);
    for (std::size_t k = 0; k < seg.length; ++k) {
      power[k] += out[k][0] * out[k][0] + out[k][1] * out[k][1];
    }
  }
  return power;
}

void check_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("welch_psd: dt must be > 0");
}

}  // namespace

Periodogram welch_psd(std::span<const double> x, double dt, std::size_t segments) {
  check_dt(dt);
  const Segmentation seg = segment(x.size(), segments);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  const std::vector<double> w = hann(seg.length);
  double u = 0.0;
  for (double v : w) u += v * v;

  const auto power = averaged_power(seg, [&](std::size_t start, fftw_complex* in) {
    for (std::size_t i = 0; i < seg.length; ++i) {
      in[i][0] = w[i] * (x[start + i] - mean);
      in[i][1] = 0.0;
    }
  });

  const double scale = dt / (u * static_cast<double>(seg.count));
  const std::size_t half = seg.length / 2;
  Periodogram p;
  p.bin_width = 1.0 / (static_cast<double>(seg.length) * dt);
  for (std::size_t k = 0; k <= half; ++k) {
    const bool unpaired = k == 0 || (seg.length % 2 == 0 && k == half);
    p.freqs.push_back(static_cast<double>(k) * p.bin_width);
    p.psd.push_back(power[k] * scale * (unpaired ? 1.0 : 2.0));
  }
  return p;
}

Periodogram welch_psd(std::span<const std::complex<double>> x, double dt, std::size_t segments) {
  check_dt(dt);
  const Segmentation seg = segment(x.size(), segments);
  const std::vector<double> w = hann(seg.length);
  double u = 0.0;
  for (double v : w) u += v * v;

  const auto power = averaged_power(seg, [&](std::size_t start, fftw_complex* in) {
    for (std::size_t i = 0; i < seg.length; ++i) {
      in[i][0] = w[i] * x[start + i].real();
      in[i][1] = w[i] * x[start + i].imag();
    }
  });

  const double scale = dt / (u * static_cast<double>(seg.count));
  const std::size_t n = seg.length;
  Periodogram p;
  p.bin_width = 1.0 / (static_cast<double>(n) * dt);
  // Reorder bins so negative frequencies come first.
  const std::size_t first_negative = n / 2 + 1;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + first_negative) % n;
    const double f = k < first_negative ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
    p.freqs.push_back(f * p.bin_width);
    p.psd.push_back(power[k] * scale);
  }
  return p;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw PreconditionError("fit_line: need >= 3 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw PreconditionError("fit_line: x has no spread");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ssr += r * r;
  }
  f.slope_sigma = std::sqrt(ssr / (n - 2.0) / sxx);
  return f;
}

SpectralEstimate fluctuation_psd(std::span<const double> times, std::span<const double> t1) {
  if (times.size() != t1.size()) throw PreconditionError("fluctuation_psd: times and t1 differ in length");
  if (times.size() < 64) throw PreconditionError("fluctuation_psd: need >= 64 samples");
  std::vector<double> steps(times.size() - 1);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    steps[i] = times[i + 1] - times[i];
    if (!(steps[i] > 0.0)) throw PreconditionError("fluctuation_psd: times must increase strictly");
  }
  std::vector<double> sorted = steps;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double dt = sorted[sorted.size() / 2];
  for (double s : steps) {
    if (std::abs(s - dt) > 0.1 * dt) {
      throw PreconditionError("fluctuation_psd: sampling jitter exceeds 10% of the median step");
    }
  }

  // Linear resampling onto t0 + k*dt.
  const auto n = static_cast<std::size_t>(std::floor((times.back() - times.front()) / dt * (1.0 + 1e-12))) + 1;
  std::vector<double> y(n);
  std::size_t j = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = times.front() + static_cast<double>(k) * dt;
    while (j + 2 < times.size() && times[j + 1] <= t) ++j;
    const double f = std::clamp((t - times[j]) / (times[j + 1] - times[j]), 0.0, 1.0);
    y[k] = t1[j] + f * (t1[j + 1] - t1[j]);
  }
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  if (!(mean > 0.0)) throw PreconditionError("fluctuation_psd: mean T1 must be > 0");
  double var = 0.0;
  for (double& v : y) {
    v = (v - mean) / mean;
    var += v * v;
  }

  const Periodogram p = welch_psd(y, dt);
  SpectralEstimate est;
  est.freqs = p.freqs;
  est.psd = p.psd;
  est.variance = var / static_cast<double>(n);

  const double f_top = 0.5 * p.freqs.back();
  std::vector<double> lx, ly;
  for (std::size_t k = 3; k < p.freqs.size(); ++k) {
    if (p.freqs[k] > f_top) break;
    if (p.psd[k] <= 0.0) continue;
    lx.push_back(std::log10(p.freqs[k]));
    ly.push_back(std::log10(p.psd[k]));
  }
  if (lx.size() < 3) throw PreconditionError("fluctuation_psd: too few bins in the fit band");
  const LineFit fit = fit_line(lx, ly);
  est.alpha = -fit.slope;
  est.alpha_sigma = fit.slope_sigma;
  return est;
}

}  // namespace zeno
