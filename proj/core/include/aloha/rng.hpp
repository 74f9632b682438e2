#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace aloha {

// splitmix64 step; used to expand seeds into decorrelated generator state.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// xoshiro256++ generator. Each logical stream (e.g. one simulation
// replication) constructs its own instance from (seed, stream), so results
// do not depend on how streams are scheduled or interleaved.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0xd2b74407b1ce6e93ull * (stream + 1));
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Mean-1 exponential by inversion; log1p keeps precision near u = 0 and
  // never sees log(0) since uniform01() < 1.
  double exponential() { return -std::log1p(-uniform01()); }

  // Rayleigh-distributed distance with the given mean, by inverting the CDF
  // 1 - exp(-kappa*pi*r^2) with kappa = 1/(4*mean^2).
  double rayleigh(double mean) {
    const double kappa_pi = std::numbers::pi / (4.0 * mean * mean);
    return std::sqrt(exponential() / kappa_pi);
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace aloha
