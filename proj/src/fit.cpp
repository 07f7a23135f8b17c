#include "zeno/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

struct Model {
  std::span<const double> t;
  std::span<const double> y;
  std::span<const double> s;

  // Parameters: offset c, amplitude a, u = ln(T1).
  double chi2(const Eigen::Vector3d& p) const {
    const double inv_t1 = std::exp(-p[2]);
    double acc = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double r = (y[i] - (p[0] - p[1] * std::exp(-t[i] * inv_t1))) / s[i];
      acc += r * r;
    }
    return acc;
  }

  void linearize(const Eigen::Vector3d& p, Eigen::Matrix3d& jtj, Eigen::Vector3d& jtr) const {
    jtj.setZero();
    jtr.setZero();
    const double inv_t1 = std::exp(-p[2]);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double ex = std::exp(-t[i] * inv_t1);
      const double w = 1.0 / s[i];
      const double r = (y[i] - (p[0] - p[1] * ex)) * w;
      // d(model)/dp, scaled by 1/sigma
      const Eigen::Vector3d g{w, -ex * w, -p[1] * ex * t[i] * inv_t1 * w};
      jtj.noalias() += g * g.transpose();
      jtr.noalias() += g * r;
    }
  }

  // Weighted linear solve for (c, a) at fixed T1.
  Eigen::Vector2d linear_part(double t1) const {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double w = 1.0 / (s[i] * s[i]);
      const Eigen::Vector2d g{1.0, -std::exp(-t[i] / t1)};
      m.noalias() += w * g * g.transpose();
      v.noalias() += w * g * y[i];
    }
    return m.ldlt().solve(v);
  }
};

double seed_t1(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  const double c_est = (y[n - 1] + y[n - 2] + y[n - 3]) / 3.0;
  const double span = t.back() - t.front();
  const double y0 = c_est - y[0];
  std::vector<double> xs;
  std::vector<double> ls;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (c_est - y[i]) * (y0 >= 0.0 ? 1.0 : -1.0);
    if (d > 0.05 * std::abs(y0)) {
      xs.push_back(t[i]);
      ls.push_back(std::log(d));
    }
  }
  if (xs.size() >= 2) {
    double mx = 0.0;
    double ml = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      ml += ls[i];
    }
    mx /= static_cast<double>(xs.size());
    ml /= static_cast<double>(xs.size());
    double sxx = 0.0;
    double sxl = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxl += (xs[i] - mx) * (ls[i] - ml);
    }
    if (sxx > 0.0 && sxl < 0.0) return -sxx / sxl;
  }
  return span / 3.0;
}

}  // namespace

FitResult fit_exponential_rise(std::span<const double> times, std::span<const double> p_g,
                               std::span<const double> sigmas, const FitOptions& opts) {
  const std::size_t n = times.size();
  if (p_g.size() != n || sigmas.size() != n) {
    throw PreconditionError("fit_exponential_rise: times, values and sigmas differ in length");
  }
  if (n < 5) throw PreconditionError("fit_exponential_rise: need at least 5 points");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(p_g[i]) || !(sigmas[i] > 0.0)) {
      throw PreconditionError("fit_exponential_rise: non-finite data or non-positive sigma");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw PreconditionError("fit_exponential_rise: times must be strictly increasing");
    }
  }
  const auto [lo, hi] = std::minmax_element(p_g.begin(), p_g.end());
  if (*hi - *lo <= 1e-12 * std::max(1.0, std::abs(*hi))) {
    throw PreconditionError("fit_exponential_rise: data has no dynamic range");
  }

  const Model model{times, p_g, sigmas};
  const double span = times.back() - times.front();
  const double t1_0 = seed_t1(times, p_g);
  if (span < t1_0) {
    std::ostringstream msg;
    msg << "fit_exponential_rise: data span " << span << " is shorter than the seed T1 " << t1_0;
    throw PreconditionError(msg.str());
  }
  const Eigen::Vector2d ca = model.linear_part(t1_0);
  Eigen::Vector3d p{ca[0], ca[1], std::log(t1_0)};
  double chi2 = model.chi2(p);
  double lambda = 1e-3;
  Eigen::Matrix3d jtj;
  Eigen::Vector3d jtr;

  bool converged = false;
  int it = 0;
  for (; it < opts.max_iterations && !converged; ++it) {
    model.linearize(p, jtj, jtr);
    if (chi2 <= 1e-28) {
      converged = true;
      break;
    }
    bool accepted = false;
    while (!accepted && lambda < 1e16) {
      Eigen::Matrix3d a = jtj;
      a.diagonal() *= 1.0 + lambda;
      const Eigen::Vector3d step = a.ldlt().solve(jtr);
      const Eigen::Vector3d trial = p + step;
      const double chi2_trial = model.chi2(trial);
      if (std::isfinite(chi2_trial) && chi2_trial <= chi2) {
        const double rel_step = (step.array().abs() / (1.0 + trial.array().abs())).maxCoeff();
        const double drop = chi2 - chi2_trial;
        p = trial;
        chi2 = chi2_trial;
        lambda = std::max(lambda * 0.1, 1e-12);
        accepted = true;
        if (rel_step < 1e-10 || drop <= opts.rel_tol * chi2) converged = true;
      } else {
        lambda *= 10.0;
      }
    }
    if (!accepted) converged = true;  // no downhill step exists: at the minimum to rounding
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "fit_exponential_rise: no convergence after " << it << " iterations (best T1 "
        << std::exp(p[2]) << ", chi2 " << chi2 << ")";
    throw NumericalError(msg.str());
  }

  model.linearize(p, jtj, jtr);
  const Eigen::Matrix3d cov = jtj.inverse();
  FitResult r;
  r.t1 = std::exp(p[2]);
  r.t1_sigma = r.t1 * std::sqrt(std::max(0.0, cov(2, 2)));
  r.offset = p[0];
  r.offset_sigma = std::sqrt(std::max(0.0, cov(0, 0)));
  r.amplitude = p[1];
  r.amplitude_sigma = std::sqrt(std::max(0.0, cov(1, 1)));
  r.reduced_chi2 = chi2 / static_cast<double>(n - 3);
  r.iterations = it;
  if (!std::isfinite(r.t1) || !(r.t1 > 0.0)) {
    throw NumericalError("fit_exponential_rise: fit produced a non-positive T1");
  }
  if (span < r.t1) {
    std::ostringstream msg;
    msg << "fit_exponential_rise: data span " << span << " is shorter than the fitted T1 " << r.t1;
    throw PreconditionError(msg.str());
  }
  return r;
}

ValueWithError fractional_change(double t1, double t1_zero, double t1_sigma, double t1_zero_sigma) {
  if (!(t1_zero > 0.0)) throw PreconditionError("fractional_change: t1_zero must be > 0");
  const double v = (t1 - t1_zero) / t1_zero;
  const double d_t1 = 1.0 / t1_zero;
  const double d_t1z = -t1 / (t1_zero * t1_zero);
  return {v, std::hypot(d_t1 * t1_sigma, d_t1z * t1_zero_sigma)};
}

}  // namespace zeno
