#ifndef ITOLAB_RNG_HPP
#define ITOLAB_RNG_HPP

#include <cstdint>

namespace itolab {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t splitmix64_mix(std::uint64_t z);

// Key for stream `stream` under `seed`; distinct streams give unrelated keys.
std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream);

// Counter-based SplitMix64: draw k of stream (seed, stream) is
// mix(key + (k + 1) * golden_gamma). Output depends only on (seed, stream, k),
// so streams are reproducible across platforms and can be split freely.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform();       // [0, 1), 53 random bits
  double uniform_open();  // (0, 1)
  double normal();        // Box-Muller, one output per pair of uniforms
  std::uint64_t below(std::uint64_t n);  // uniform on {0, ..., n-1}

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace itolab

#endif
