#ifndef ECSIM_RNG_HPP
#define ECSIM_RNG_HPP

#include <cstdint>
#include <random>

namespace ecsim {

// SplitMix64 output function (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of child stream `stream` under master seed `seed`.
constexpr std::uint64_t derive_stream_seed(std::uint64_t seed,
                                           std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 1));
}

// Per-run random stream: std::mt19937_64 (output sequence fixed by the C++
// standard) seeded with derive_stream_seed(seed, run_index). Doubles are built
// from the top 53 bits, so draws are bit-identical on every platform; no
// std::*_distribution is involved.
class RunRandom {
 public:
  RunRandom(std::uint64_t seed, std::uint64_t stream)
      : engine_(derive_stream_seed(seed, stream)) {}

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ecsim

#endif  // ECSIM_RNG_HPP
