#include "zeno/lines.hpp"

#include <algorithm>
#include <cmath>

namespace zeno {

namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  return v[mid];
}

std::vector<double> smooth3(std::span<const double> y) {
  const std::size_t n = y.size();
  std::vector<double> s(n);
  s[0] = 0.5 * (y[0] + y[1]);
  s[n - 1] = 0.5 * (y[n - 2] + y[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) s[i] = (y[i - 1] + y[i] + y[i + 1]) / 3.0;
  return s;
}

// x where the segment (i, j) crosses `level`.
double crossing(std::span<const double> x, const std::vector<double>& s, std::size_t i, std::size_t j,
                double level) {
  const double d = s[j] - s[i];
  if (d == 0.0) return x[i];
  return x[i] + (level - s[i]) / d * (x[j] - x[i]);
}

}  // namespace

std::size_t LineMetrics::main_peak() const {
  if (prominence.empty()) throw NoLineFound();
  return static_cast<std::size_t>(std::max_element(prominence.begin(), prominence.end()) - prominence.begin());
}

LineMetrics line_metrics(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("line_metrics: grid and values differ in length");
  const std::size_t n = x.size();
  if (n < 20) throw PreconditionError("line_metrics: need >= 20 points");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(x[i + 1] > x[i])) throw PreconditionError("line_metrics: grid must increase strictly");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw PreconditionError("line_metrics: non-finite value");
  }

  const std::vector<double> s = smooth3(y);
  std::vector<double> resid(n);
  for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - s[i];
  const double med = median(resid);
  for (double& r : resid) r = std::abs(r - med);
  const double noise = 1.4826 * median(resid);
  const auto [lo_it, hi_it] = std::minmax_element(s.begin(), s.end());
  const double range = *hi_it - *lo_it;
  if (!(range > 1e-12 * std::max(1.0, std::abs(*hi_it)))) throw NoLineFound();

  LineMetrics m;
  m.threshold = std::max(5.0 * noise, 0.01 * range);

  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(s[i] > s[i - 1])) {
      ++i;
      continue;
    }
    // Plateau: [i, k] all equal.
    std::size_t k = i;
    while (k + 1 < n && s[k + 1] == s[i]) ++k;
    if (k + 1 >= n || !(s[k + 1] < s[i])) {
      i = k + 1;
      continue;
    }
    const double top = s[i];
    double left_min = top;
    std::size_t l = i;
    while (l > 0 && s[l - 1] <= top) left_min = std::min(left_min, s[--l]);
    double right_min = top;
    std::size_t r = k;
    while (r + 1 < n && s[r + 1] <= top) right_min = std::min(right_min, s[++r]);
    const double prom = top - std::max(left_min, right_min);

    if (prom > m.threshold) {
      const double half = top - 0.5 * prom;
      std::size_t a = i;
      while (a > 0 && s[a - 1] > half) --a;
      const double left = a == 0 ? x[0] : crossing(x, s, a - 1, a, half);
      std::size_t b = k;
      while (b + 1 < n && s[b + 1] > half) ++b;
      const double right = b + 1 == n ? x[n - 1] : crossing(x, s, b, b + 1, half);

      double center = 0.5 * (x[i] + x[k]);
      if (i == k) {
        // Vertex of the parabola through the three smoothed points.
        const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
        const double d0 = (s[i] - s[i - 1]) / (x1 - x0);
        const double d1 = (s[i + 1] - s[i]) / (x2 - x1);
        const double curv = (d1 - d0) / (x2 - x0);
        if (curv < 0.0) center = 0.5 * (x0 + x1) - d0 / (2.0 * curv);
        center = std::clamp(center, x0, x2);
      }
      m.centers.push_back(center);
      m.fwhm.push_back(right - left);
      m.prominence.push_back(prom);
    }
    i = k + 1;
  }
  m.peak_count = m.centers.size();
  if (m.peak_count == 0) throw NoLineFound();
  return m;
}

}  // namespace zeno
