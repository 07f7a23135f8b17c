#pragma once

#include <cstdint>
#include <random>

namespace zeno {

/// Reproducible random stream keyed by (seed, stream_id).
///
/// Each trajectory gets its own stream_id, so ensembles give identical
/// draws regardless of thread count or scheduling order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Uniform on [0, 1).
  double uniform() { return uniform_(engine_); }
  /// Uniform on (0, 1], safe as a log/threshold argument.
  double uniform_open() { return 1.0 - uniform_(engine_); }
  double normal() { return normal_(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Mixes a key into a seed; used to give each sweep point its own stream family.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key);

}  // namespace zeno
