#ifndef BARO_RNG_H_
#define BARO_RNG_H_

#include <cstdint>
#include <random>

namespace baro {

// splitmix64 finalizer, used to derive independent stream seeds.
inline uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded generator with platform-stable derived distributions. The standard
// library distributions are implementation-defined, so uniform reals and
// bounded integers are computed here directly from the raw 64-bit engine.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0)
      : engine_(MixSeed(seed ^ MixSeed(stream + 0x51ed270b27a3f1c5ULL))) {}

  uint64_t Next() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1].
  double UniformOpenClosed() { return 1.0 - Uniform(); }

  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, bound). bound must be positive.
  uint64_t Below(uint64_t bound) {
    // Lemire's multiply-shift with rejection.
    uint64_t x = engine_();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    uint64_t low = static_cast<uint64_t>(m);
    if (low < bound) {
      const uint64_t threshold = -bound % bound;
      while (low < threshold) {
        x = engine_();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace baro

#endif  // BARO_RNG_H_
