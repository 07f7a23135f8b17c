#include "zeno/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

// Kronrod abscissae (positive half); odd indices are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525775400, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk21(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = kWgk[10] * fc;
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    const double sum = f(c - dx) + f(c + dx);
    kron += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

QuadResult integrate(const Integrand& f, std::span<const double> breaks, const QuadOptions& opts) {
  if (breaks.size() < 2) throw PreconditionError("integrate: need at least two break points");
  std::priority_queue<Segment> heap;
  QuadResult res;
  double total = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] >= breaks[i])) throw PreconditionError("integrate: break points not sorted");
    if (breaks[i + 1] == breaks[i]) continue;
    Segment s = gk21(f, breaks[i], breaks[i + 1]);
    res.evaluations += 21;
    total += s.value;
    err += s.error;
    heap.push(s);
  }
  auto converged = [&] { return err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  while (!heap.empty() && !converged()) {
    if (static_cast<int>(heap.size()) >= opts.max_intervals) {
      std::ostringstream msg;
      msg << "integrate: no convergence after " << heap.size() << " intervals; value " << total
          << ", error estimate " << err;
      throw QuadratureError(msg.str(), total, err);
    }
    const Segment s = heap.top();
    heap.pop();
    const double mid = 0.5 * (s.a + s.b);
    const Segment l = gk21(f, s.a, mid);
    const Segment r = gk21(f, mid, s.b);
    res.evaluations += 42;
    total += l.value + r.value - s.value;
    err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
  }
  // Re-sum from the leaves to shed the incremental rounding.
  res.intervals = static_cast<int>(heap.size());
  std::vector<Segment> leaves;
  leaves.reserve(heap.size());
  while (!heap.empty()) {
    leaves.push_back(heap.top());
    heap.pop();
  }
  std::sort(leaves.begin(), leaves.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  res.value = 0.0;
  res.abs_error = 0.0;
  for (const Segment& s : leaves) {
    res.value += s.value;
    res.abs_error += s.error;
  }
  return res;
}

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts) {
  const std::array<double, 2> br{a, b};
  return integrate(f, br, opts);
}

QuadResult integrate_upper_tail(const Integrand& f, double a, double scale, const QuadOptions& opts) {
  auto g = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double u = 1.0 - t;
    return f(a + scale * t / u) * scale / (u * u);
  };
  return integrate(g, 0.0, 1.0, opts);
}

QuadResult integrate_lower_tail(const Integrand& f, double b, double scale, const QuadOptions& opts) {
  auto g = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double u = 1.0 - t;
    return f(b - scale * t / u) * scale / (u * u);
  };
  return integrate(g, 0.0, 1.0, opts);
}

}  // namespace zeno
