#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "zeno/lines.hpp"

using namespace zeno;

namespace {

double lorentzian(double x, double x0, double fwhm) {
  const double h = 0.5 * fwhm;
  return h * h / ((x - x0) * (x - x0) + h * h);
}

std::vector<double> axis(double lo, double hi, double step) {
  std::vector<double> x;
  for (int i = 0; lo + i * step <= hi + 1e-12; ++i) x.push_back(lo + i * step);
  return x;
}

}  // namespace

TEST_SUITE("lines") {

TEST_CASE("single lorentzian") {
  const auto x = axis(-2.5, 2.5, 0.025);
  std::vector<double> y;
  for (double v : x) y.push_back(0.02 + 0.4 * lorentzian(v, 0.31, 0.4));
  const LineMetrics m = line_metrics(x, y);
  REQUIRE(m.peak_count == 1);
  CHECK(std::abs(m.centers[0] - 0.31) < 0.025);
  CHECK(std::abs(m.fwhm[0] - 0.4) < 0.025);
}

TEST_CASE("noisy lorentzian") {
  std::mt19937_64 eng(8);
  std::normal_distribution<double> g(0.0, 0.005);
  const auto x = axis(-2.5, 2.5, 0.025);
  std::vector<double> y;
  for (double v : x) y.push_back(0.3 * lorentzian(v, -0.2, 0.6) + g(eng));
  const LineMetrics m = line_metrics(x, y);
  REQUIRE(m.peak_count == 1);
  CHECK(std::abs(m.centers[0] + 0.2) < 0.025);
  CHECK(std::abs(m.fwhm[0] - 0.6) < 0.05);
}

TEST_CASE("doublet") {
  const auto x = axis(-2.5, 2.5, 0.025);
  std::vector<double> y;
  for (double v : x) y.push_back(0.3 * lorentzian(v, -1.0, 0.3) + 0.3 * lorentzian(v, 1.0, 0.3));
  const LineMetrics m = line_metrics(x, y);
  REQUIRE(m.peak_count == 2);
  CHECK(std::abs(m.centers[0] + 1.0) < 0.025);
  CHECK(std::abs(m.centers[1] - 1.0) < 0.025);
}

TEST_CASE("translation equivariance") {
  const auto x = axis(-2.5, 2.5, 0.05);
  std::vector<double> y;
  for (double v : x) y.push_back(lorentzian(v, 0.4, 0.5) + 0.5 * lorentzian(v, -1.2, 0.3));
  const LineMetrics a = line_metrics(x, y);
  for (double shift : {0.37, -3.0, 10.0}) {
    std::vector<double> xs = x;
    for (double& v : xs) v += shift;
    const LineMetrics b = line_metrics(xs, y);
    REQUIRE(b.peak_count == a.peak_count);
    for (std::size_t i = 0; i < a.peak_count; ++i) {
      CHECK(b.centers[i] == doctest::Approx(a.centers[i] + shift).epsilon(1e-9));
      CHECK(b.fwhm[i] == doctest::Approx(a.fwhm[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("no line") {
  const auto x = axis(-1.0, 1.0, 0.05);
  std::vector<double> flat(x.size(), 0.1);
  CHECK_THROWS_AS(line_metrics(x, flat), NoLineFound);
  std::vector<double> ramp;
  for (double v : x) ramp.push_back(v);
  CHECK_THROWS_AS(line_metrics(x, ramp), NoLineFound);
  const std::vector<double> few(10, 0.0);
  CHECK_THROWS_AS(line_metrics(std::vector<double>(10, 0.0), few), PreconditionError);
}

}
