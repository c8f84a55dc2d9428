#include "peach/rng.hpp"

#include <cmath>

namespace peach {

namespace {

std::mt19937_64 keyed_engine(std::uint64_t master_seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : engine_(keyed_engine(master_seed, stream_id)) {}

Complex RngStream::complex_normal() {
  static const double kScale = std::sqrt(0.5);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {kScale * re, kScale * im};
}

CVector RngStream::complex_normal(Index n) {
  CVector out(n);
  for (Index i = 0; i < n; ++i) {
    out(i) = complex_normal();
  }
  return out;
}

double RngStream::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

}  // namespace peach
