#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace padp {

// 64-bit finalizer used to derive independent stream seeds from a base seed.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random stream. All distribution mappings are implemented
// here rather than through <random> distributions, so a given seed produces
// the same draws on every compiler and standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform on the open interval (0, 1).
  double next_double() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * kInv53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Standard normal via Box-Muller. Two uniforms per draw, no cached spare.
  double gaussian() {
    const double u1 = next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  // Index in [0, n). The modulo bias is below 2^-53 for every n used here.
  size_t next_index(size_t n) { return static_cast<size_t>(gen_() % n); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_index(i)]);
    }
  }

 private:
  static constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
  static constexpr double kTwoPi = 6.283185307179586476925287;
  std::mt19937_64 gen_;
};

}  // namespace padp
