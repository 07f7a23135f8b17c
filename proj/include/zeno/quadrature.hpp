#pragma once

#include <functional>
#include <span>

namespace zeno {

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 20000;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod over [breaks.front(), breaks.back()],
/// starting from the given (sorted) subdivision. Throws QuadratureError when the
/// interval budget runs out before the tolerance is met.
QuadResult integrate(const Integrand& f, std::span<const double> breaks,
                     const QuadOptions& opts = {});

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts = {});

/// Integral over [a, inf) via w = a + scale * t / (1 - t).
QuadResult integrate_upper_tail(const Integrand& f, double a, double scale,
                                const QuadOptions& opts = {});

/// Integral over (-inf, b] via w = b - scale * t / (1 - t).
QuadResult integrate_lower_tail(const Integrand& f, double b, double scale,
                                const QuadOptions& opts = {});

}  // namespace zeno
