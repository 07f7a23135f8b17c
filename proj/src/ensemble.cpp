#include "zeno/ensemble.hpp"

#include <cmath>

#include "zeno/errors.hpp"

#ifdef ZENO_HAVE_OPENMP
#include <omp.h>
#endif

namespace zeno {

namespace {

// Neumaier-compensated running sum.
struct Accumulator {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = sum + x;
    c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

EnsembleSamples make_samples(const TrajectoryPlan& plan, std::size_t n_traj) {
  if (n_traj == 0) throw PreconditionError("ensemble: need at least one trajectory");
  EnsembleSamples s;
  s.n_traj = n_traj;
  s.n_samples = plan.sample_steps.size();
  s.values.assign(n_traj * s.n_samples, 0.0);
  return s;
}

}  // namespace

EnsembleSamples run_ensemble_serial(const TrajectoryPlan& plan, std::uint64_t seed, std::size_t n_traj) {
  EnsembleSamples s = make_samples(plan, n_traj);
  std::vector<std::complex<double>> buffer;
  for (std::size_t i = 0; i < n_traj; ++i) {
    RngStream rng(seed, i);
    run_trajectory(plan, rng, buffer, {s.values.data() + i * s.n_samples, s.n_samples});
  }
  return s;
}

EnsembleSamples run_ensemble(const TrajectoryPlan& plan, std::uint64_t seed, std::size_t n_traj,
                             int threads) {
#ifdef ZENO_HAVE_OPENMP
  EnsembleSamples s = make_samples(plan, n_traj);
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  const auto n = static_cast<std::ptrdiff_t>(n_traj);
  // Exceptions may not cross the parallel region; keep the first one.
  std::exception_ptr failure;
#pragma omp parallel num_threads(nt)
  {
    std::vector<std::complex<double>> buffer;
#pragma omp for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        const auto u = static_cast<std::size_t>(i);
        RngStream rng(seed, u);
        run_trajectory(plan, rng, buffer, {s.values.data() + u * s.n_samples, s.n_samples});
      } catch (...) {
#pragma omp critical(zeno_ensemble_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return s;
#else
  (void)threads;
  return run_ensemble_serial(plan, seed, n_traj);
#endif
}

PopulationCurve reduce_curve(const EnsembleSamples& samples, std::span<const double> times) {
  if (times.size() != samples.n_samples) throw PreconditionError("reduce_curve: time grid mismatch");
  PopulationCurve c;
  c.times.assign(times.begin(), times.end());
  c.p_e.resize(samples.n_samples);
  c.stderr_.resize(samples.n_samples);
  const double n = static_cast<double>(samples.n_traj);
  for (std::size_t k = 0; k < samples.n_samples; ++k) {
    Accumulator s1;
    for (std::size_t i = 0; i < samples.n_traj; ++i) s1.add(samples.values[i * samples.n_samples + k]);
    const double mean = s1.value() / n;
    Accumulator s2;
    for (std::size_t i = 0; i < samples.n_traj; ++i) {
      const double d = samples.values[i * samples.n_samples + k] - mean;
      s2.add(d * d);
    }
    c.p_e[k] = mean;
    c.stderr_[k] = samples.n_traj > 1 ? std::sqrt(s2.value() / (n - 1.0) / n) : 0.0;
  }
  return c;
}

std::vector<std::vector<double>> block_means(const EnsembleSamples& samples, std::size_t blocks) {
  if (blocks == 0 || blocks > samples.n_traj) throw PreconditionError("block_means: bad block count");
  std::vector<std::vector<double>> out(blocks, std::vector<double>(samples.n_samples, 0.0));
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * samples.n_traj / blocks;
    const std::size_t hi = (b + 1) * samples.n_traj / blocks;
    for (std::size_t k = 0; k < samples.n_samples; ++k) {
      Accumulator acc;
      for (std::size_t i = lo; i < hi; ++i) acc.add(samples.values[i * samples.n_samples + k]);
      out[b][k] = acc.value() / static_cast<double>(hi - lo);
    }
  }
  return out;
}

}  // namespace zeno
