#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dunkl {

/// Reproducible random stream owned by one path (or one worker task).
///
/// The engine state is a pure function of (seed, path_index, substream), so
/// results do not depend on how paths are distributed over threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t path_index, std::uint64_t substream = 0);

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal() { return normal_(engine_); }
  double exponential() { return -std::log(uniform()); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace dunkl
