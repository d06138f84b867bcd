#ifndef GAGGAM_RNG_HPP_
#define GAGGAM_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gaggam {

// Seeded random stream with fixed, engine-independent distribution
// mappings.  The standard <random> distributions are implementation
// defined, so every draw here is mapped from raw mt19937_64 output by
// hand.  Runs are reproducible from the seed alone, and independent
// streams are derived by index so that worker count never changes what
// any consumer sees.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Stateless seed scrambler (splitmix64).
  static std::uint64_t scramble(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return scramble(scramble(a) ^ b);
  }

  // Derives an independent stream from a master seed and stream ids.
  static Rng stream(std::uint64_t seed, std::uint64_t id) {
    return Rng(mix(seed, id));
  }
  static Rng stream(std::uint64_t seed, std::uint64_t id, std::uint64_t sub) {
    return Rng(mix(mix(seed, id), sub));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on the inclusive range [lo, hi].
  int uniform_int(int lo, int hi) {
    const double span = static_cast<double>(hi) - static_cast<double>(lo) + 1.0;
    int v = lo + static_cast<int>(uniform() * span);
    return v > hi ? hi : v;
  }

  bool coin(double p_true = 0.5) { return uniform() < p_true; }

  // Box-Muller without a cached spare, so the draw count per call is fixed.
  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * mag * std::cos(2.0 * M_PI * u2);
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (int i = static_cast<int>(values.size()) - 1; i > 0; --i) {
      const int j = uniform_int(0, i);
      std::swap(values[static_cast<std::size_t>(i)],
                values[static_cast<std::size_t>(j)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gaggam

#endif  // GAGGAM_RNG_HPP_
