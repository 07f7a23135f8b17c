#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "zeno/errors.hpp"
#include "zeno/spectral.hpp"

using namespace zeno;

namespace {

constexpr double kPi = std::numbers::pi;

// Spectral-shaping generator: cosines on the record's Fourier grid with
// power f^-alpha and random phases, summed directly.
std::vector<double> shaped_noise(std::size_t n, double dt, double alpha, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2 * kPi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> x(n, 0.0);
  const double df = 1.0 / (static_cast<double>(n) * dt);
  for (std::size_t k = 1; k < n / 2; ++k) {
    const double f = static_cast<double>(k) * df;
    const double amp = std::pow(f, -alpha / 2) * std::hypot(gauss(eng), gauss(eng));
    const double ph = phase(eng);
    const double w = 2 * kPi * f * dt;
    for (std::size_t i = 0; i < n; ++i) x[i] += amp * std::cos(w * static_cast<double>(i) + ph);
  }
  return x;
}

std::vector<double> as_t1(const std::vector<double>& x, double mean, double rel) {
  double m = 0.0, v = 0.0;
  for (double a : x) m += a;
  m /= static_cast<double>(x.size());
  for (double a : x) v += (a - m) * (a - m);
  const double sd = std::sqrt(v / static_cast<double>(x.size()));
  std::vector<double> out;
  for (double a : x) out.push_back(mean * (1.0 + rel * (a - m) / sd));
  return out;
}

std::vector<double> grid(std::size_t n, double dt) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = dt * static_cast<double>(i);
  return t;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("white noise is flat") {
  std::mt19937_64 eng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(8192);
  for (double& v : x) v = 20.0 * (1.0 + 0.05 * g(eng));
  const SpectralEstimate s = fluctuation_psd(grid(x.size(), 1.0), x);
  CHECK(std::abs(s.alpha) < 0.15);
  for (double p : s.psd) CHECK(p >= 0.0);
}

TEST_CASE("shaped noise recovers its exponent") {
  const std::size_t n = 8192;
  const auto x = as_t1(shaped_noise(n, 1.0, 1.4, 17), 20.0, 0.05);
  const SpectralEstimate s = fluctuation_psd(grid(n, 1.0), x);
  CHECK(std::abs(s.alpha - 1.4) < 0.15);
  CHECK(s.alpha_sigma > 0.0);
}

TEST_CASE("sinusoid gives one dominant bin") {
  const std::size_t n = 4096;
  const double dt = 0.5;
  const double f0 = 0.13;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 20.0 + std::sin(2 * kPi * f0 * dt * static_cast<double>(i));
  const SpectralEstimate s = fluctuation_psd(grid(n, dt), x);
  const auto top = std::max_element(s.psd.begin(), s.psd.end()) - s.psd.begin();
  const double bin = s.freqs[1] - s.freqs[0];
  CHECK(std::abs(s.freqs[static_cast<std::size_t>(top)] - f0) <= 0.5 * bin);
  // Hann main lobe spans two bins either side; everything else sits far below.
  for (std::size_t k = 0; k < s.psd.size(); ++k) {
    if (std::abs(static_cast<double>(k) - static_cast<double>(top)) > 3) CHECK(s.psd[k] < 1e-3 * s.psd[top]);
  }
}

TEST_CASE("parseval") {
  for (double alpha : {0.0, 1.0, 1.4}) {
    const std::size_t n = 8192;
    const auto x = as_t1(shaped_noise(n, 0.2, alpha, 5 + static_cast<std::uint64_t>(alpha * 10)), 15.0, 0.03);
    const SpectralEstimate s = fluctuation_psd(grid(n, 0.2), x);
    double total = 0.0;
    for (double p : s.psd) total += p;
    total *= s.freqs[1] - s.freqs[0];
    CHECK(total == doctest::Approx(s.variance).epsilon(0.01));
  }
}

TEST_CASE("complex welch locates a tone at negative frequency") {
  const std::size_t n = 4096;
  const double dt = 0.01;
  std::vector<std::complex<double>> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::polar(2.0, -2 * kPi * 7.0 * dt * static_cast<double>(i));
  const Periodogram p = welch_psd(x, dt);
  const auto top = std::max_element(p.psd.begin(), p.psd.end()) - p.psd.begin();
  CHECK(std::abs(p.freqs[static_cast<std::size_t>(top)] + 7.0) <= p.bin_width);
  double total = 0.0;
  for (double v : p.psd) total += v * p.bin_width;
  CHECK(total == doctest::Approx(4.0).epsilon(0.01));
  CHECK(std::is_sorted(p.freqs.begin(), p.freqs.end()));
}

TEST_CASE("sampling checks") {
  std::vector<double> t = grid(100, 1.0), y(100, 20.0);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += std::sin(0.3 * static_cast<double>(i));
  CHECK_NOTHROW(fluctuation_psd(t, y));
  t[50] += 0.2;
  CHECK_THROWS_AS(fluctuation_psd(t, y), PreconditionError);
  t = grid(100, 1.0);
  t[50] += 0.05;  // mild jitter is resampled
  CHECK_NOTHROW(fluctuation_psd(t, y));
  std::vector<double> short_t = grid(63, 1.0), short_y(63, 1.0);
  CHECK_THROWS_AS(fluctuation_psd(short_t, short_y), PreconditionError);
}

}
