#pragma once

#include <cstdint>
#include <random>

#include "peach/types.hpp"

namespace peach {

/// Independent random stream keyed by (master seed, stream id).
///
/// Streams with different ids are statistically independent, so Monte Carlo
/// trial `t` can draw from `RngStream(seed, t)` on any thread and the result
/// does not depend on scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  /// Standard circular complex Gaussian: real and imaginary parts ~ N(0, 1/2).
  Complex complex_normal();
  CVector complex_normal(Index n);

  double uniform();

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace peach
