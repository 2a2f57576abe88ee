#pragma once

#include <cstdint>

namespace sgs {

// Counter-based generator: output i is a pure hash of (seed, stream, i), so any
// draw is computable independently and in parallel. One 64-bit seed drives the
// whole program through named streams.
namespace stream {
inline constexpr std::uint64_t sampling = 1;   // i.i.d. sample points
inline constexpr std::uint64_t init = 2;       // network initialization
inline constexpr std::uint64_t optimizer = 3;  // optimizer restarts, trial draws
inline constexpr std::uint64_t rademacher = 4; // sign vectors
inline constexpr std::uint64_t reinit = 5;     // zero-weight reinitialization
} // namespace stream

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class rng_stream {
public:
  rng_stream(std::uint64_t seed, std::uint64_t stream_id)
      : key_(mix64(seed ^ mix64(stream_id * 0xda942042e4dd58b5ull))) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return mix64(key_ + counter * 0x9e3779b97f4a7c15ull);
  }
  // uniform in [0,1), 53 random bits
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

private:
  std::uint64_t key_;
};

// Sequential convenience wrapper over a stream.
class counter_rng {
public:
  counter_rng(std::uint64_t seed, std::uint64_t stream_id) : s_(seed, stream_id) {}

  double uniform() { return s_.uniform(n_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t bits() { return s_.bits(n_++); }

private:
  rng_stream s_;
  std::uint64_t n_ = 0;
};

} // namespace sgs
