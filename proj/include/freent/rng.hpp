#pragma once
// Counter-based normal variates: every draw is a pure function of a 64-bit
// key derived from (seed, structural indices...), so sampling parallelizes
// across samples and matrix entries without any shared stream state, and a
// given spec + seed reproduces bit-identical streams on any thread count.
#include <cmath>
#include <cstdint>
#include <initializer_list>
namespace freent {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t k = 0x6a09e667f3bcc909ull;  // arbitrary nonzero start
  std::uint64_t salt = 1;
  for (std::uint64_t p : parts) {
    k = mix64(k ^ (p + 0x9e3779b97f4a7c15ull * salt));
    ++salt;
  }
  return k;
}

// uniform in (0,1): 53 mantissa bits, nudged away from zero
inline double uniform01(std::uint64_t key) {
  return double(mix64(key) >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

struct NormalPair {
  double a = 0.0;
  double b = 0.0;
};

// Box-Muller on two decorrelated uniforms derived from the key
inline NormalPair normal_pair(std::uint64_t key) {
  const double u1 = uniform01(key ^ 0xd1b54a32d192ed03ull);
  const double u2 = uniform01(key ^ 0x8bb84b93962eacc9ull);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * M_PI * u2;
  return {r * std::cos(ang), r * std::sin(ang)};
}

}  // namespace freent
