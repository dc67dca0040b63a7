#ifndef GREENNET_RNG_HPP
#define GREENNET_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string_view>

namespace greennet {

// All randomness in the simulator goes through these helpers. The standard
// library distributions are implementation-defined, so a run would not be
// reproducible across toolchains if we used them.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a, used to fold strings into seed material.
constexpr std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t seed_combine(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

inline std::uint64_t derive_seed(std::uint64_t base) { return splitmix64(base); }

template <class... Rest>
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t next, Rest... rest) {
  return derive_seed(seed_combine(base, next), rest...);
}

// Counter-based splitmix64 stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_++); }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; suitable as a log() argument.
  double next_open_double() { return 1.0 - next_double(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller.
  double next_normal() {
    const double u1 = next_open_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace greennet

#endif  // GREENNET_RNG_HPP
