#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "zeno/errors.hpp"
#include "zeno/quadrature.hpp"

using namespace zeno;

TEST_SUITE("quadrature") {

TEST_CASE("smooth integrands") {
  CHECK(integrate([](double x) { return x * x * x - 2 * x; }, 0.0, 2.0).value == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0).value ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("breakpoints resolve kinks") {
  const std::vector<double> breaks{-1.0, 0.0, 1.0};
  const QuadResult r = integrate([](double x) { return std::abs(x); }, breaks);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.intervals == 2);
}

TEST_CASE("semi-infinite tails") {
  const auto f = [](double x) { return 1.0 / (1.0 + x * x); };
  CHECK(integrate_upper_tail(f, 0.0, 1.0).value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-10));
  CHECK(integrate_lower_tail(f, 1.0, 1.0).value == doctest::Approx(3 * std::numbers::pi / 4).epsilon(1e-10));
}

TEST_CASE("oscillatory integrand") {
  // int_0^{20 pi} sin^2(x) / x^2 dx against a fine midpoint oracle
  const auto f = [](double x) {
    if (x == 0.0) return 1.0;
    const double s = std::sin(x) / x;
    return s * s;
  };
  const double b = 20 * std::numbers::pi;
  const int n = 2000000;
  double oracle = 0.0;
  for (int i = 0; i < n; ++i) oracle += f((i + 0.5) * b / n);
  oracle *= b / n;
  CHECK(integrate(f, 0.0, b).value == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("budget exhaustion raises with diagnostics") {
  QuadOptions opts;
  opts.max_intervals = 4;
  opts.rel_tol = 1e-14;
  try {
    integrate([](double x) { return 1.0 / std::sqrt(std::abs(x) + 1e-14); }, -1.0, 1.0, opts);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.error_estimate() > 0.0);
    CHECK(std::isfinite(e.value()));
  }
}

}
