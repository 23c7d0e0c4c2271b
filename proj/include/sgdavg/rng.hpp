#pragma once

#include <cstdint>
#include <random>

namespace sgdavg {

/// One reproducible random stream per (base seed, stream index) pair.
/// The generator is seeded through std::seed_seq over all four 32-bit halves,
/// so neighbouring indices give unrelated engine states.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t index() const { return index_; }

  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// +1 or -1 with equal probability.
  double rademacher();
  /// Uniform on {0, ..., n-1}.
  std::size_t uniform_index(std::size_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace sgdavg
