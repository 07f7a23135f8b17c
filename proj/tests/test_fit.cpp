#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "zeno/errors.hpp"
#include "zeno/fit.hpp"

using namespace zeno;

namespace {

struct Series {
  std::vector<double> t, y, s;
};

Series rise(double t1, double c, double a, std::size_t n = 41, double span = 60.0) {
  Series d;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = span * static_cast<double>(i) / static_cast<double>(n - 1);
    d.t.push_back(t);
    d.y.push_back(c - a * std::exp(-t / t1));
    d.s.push_back(0.01);
  }
  return d;
}

}  // namespace

TEST_SUITE("fit") {

TEST_CASE("noiseless recovery") {
  const Series d = rise(20.0, 1.0, 1.0);
  const FitResult f = fit_exponential_rise(d.t, d.y, d.s);
  CHECK(f.t1 == doctest::Approx(20.0).epsilon(1e-6));
  CHECK(f.offset == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(f.amplitude == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(f.reduced_chi2 < 1e-12);
  CHECK(f.t1_sigma > 0.0);
}

TEST_CASE("nuisance parameters are free") {
  const Series d = rise(7.5, 0.93, 0.81);
  const FitResult f = fit_exponential_rise(d.t, d.y, d.s);
  CHECK(f.t1 == doctest::Approx(7.5).epsilon(1e-6));
  CHECK(f.offset == doctest::Approx(0.93).epsilon(1e-6));
  CHECK(f.amplitude == doctest::Approx(0.81).epsilon(1e-6));
}

TEST_CASE("binomial noise at 2000 shots") {
  // Record spans 5 T1; on 3 T1 the Cramer-Rao bound alone is 1.1%.
  std::mt19937_64 eng(2024);
  const Series d = rise(20.0, 1.0, 1.0, 41, 100.0);
  int within = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> y(d.t.size()), s(d.t.size());
    for (std::size_t i = 0; i < d.t.size(); ++i) {
      const double p = std::clamp(d.y[i], 0.0, 1.0);
      y[i] = std::binomial_distribution<int>(2000, p)(eng) / 2000.0;
      s[i] = std::max(std::sqrt(y[i] * (1 - y[i]) / 2000.0), 1.0 / 2000.0);
    }
    const FitResult f = fit_exponential_rise(d.t, y, s);
    if (std::abs(f.t1 - 20.0) < 0.02 * 20.0) ++within;
  }
  CHECK(within >= 190);
}

TEST_CASE("time rescaling rescales t1") {
  std::mt19937_64 eng(5);
  std::normal_distribution<double> noise(0.0, 0.01);
  Series d = rise(12.0, 1.0, 0.95);
  for (double& y : d.y) y += noise(eng);
  const FitResult base = fit_exponential_rise(d.t, d.y, d.s);
  for (double scale : {0.5, 2.0, 4.0}) {
    std::vector<double> t = d.t;
    for (double& v : t) v *= scale;
    const FitResult f = fit_exponential_rise(t, d.y, d.s);
    CHECK(f.t1 == doctest::Approx(scale * base.t1).epsilon(1e-9));
    CHECK(f.t1_sigma == doctest::Approx(scale * base.t1_sigma).epsilon(1e-6));
  }
}

TEST_CASE("degenerate inputs are rejected") {
  Series d = rise(20.0, 1.0, 1.0);
  std::vector<double> flat(d.t.size(), 0.4);
  CHECK_THROWS_AS(fit_exponential_rise(d.t, flat, d.s), PreconditionError);
  const Series few = rise(20.0, 1.0, 1.0, 4);
  CHECK_THROWS_AS(fit_exponential_rise(few.t, few.y, few.s), PreconditionError);
  const Series short_span = rise(20.0, 1.0, 1.0, 41, 5.0);
  CHECK_THROWS_AS(fit_exponential_rise(short_span.t, short_span.y, short_span.s), PreconditionError);
  d.s[3] = 0.0;
  CHECK_THROWS_AS(fit_exponential_rise(d.t, d.y, d.s), PreconditionError);
}

TEST_CASE("fractional change") {
  CHECK(fractional_change(10.0, 10.0).value == 0.0);
  CHECK(fractional_change(12.0, 10.0).value == doctest::Approx(0.2));
  CHECK(fractional_change(5.0, 10.0).value == doctest::Approx(-0.5));
  const ValueWithError v = fractional_change(12.0, 10.0, 0.3, 0.4);
  CHECK(v.sigma == doctest::Approx(std::hypot(0.3 / 10.0, 12.0 * 0.4 / 100.0)));
  CHECK_THROWS_AS(fractional_change(1.0, 0.0), PreconditionError);
}

}
