#pragma once

#include <cstdint>
#include <random>

namespace hopmdp {

// splitmix64 finalizer; decorrelates nearby seed values before they reach
// the engine, so per-trial streams derived as seed+i / seed^i are independent.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 seeded_engine(std::uint64_t derived_seed) {
  return std::mt19937_64(splitmix64(derived_seed));
}

}  // namespace hopmdp
