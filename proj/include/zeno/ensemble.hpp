#pragma once

#include <cstdint>
#include <vector>

#include "zeno/trajectory.hpp"

namespace zeno {

/// Per-trajectory samples, row-major [trajectory][sample].
struct EnsembleSamples {
  std::size_t n_traj = 0;
  std::size_t n_samples = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * n_samples, n_samples};
  }
};

/// Reference kernel: trajectories one after another on the calling thread.
EnsembleSamples run_ensemble_serial(const TrajectoryPlan& plan, std::uint64_t seed, std::size_t n_traj);

/// OpenMP kernel over trajectories. Trajectory i always uses RngStream(seed, i),
/// so the output is bit-identical to run_ensemble_serial for any thread count.
EnsembleSamples run_ensemble(const TrajectoryPlan& plan, std::uint64_t seed, std::size_t n_traj,
                             int threads = 0);

/// Mean and standard error per sample, accumulated in trajectory order.
PopulationCurve reduce_curve(const EnsembleSamples& samples, std::span<const double> times);

/// Means over `blocks` contiguous trajectory blocks, [block][sample].
std::vector<std::vector<double>> block_means(const EnsembleSamples& samples, std::size_t blocks);

}  // namespace zeno
