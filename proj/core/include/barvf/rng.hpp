#ifndef BARVF_RNG_HPP
#define BARVF_RNG_HPP

#include <cstdint>
#include <random>

namespace barvf {

using Rng = std::mt19937_64;

// splitmix64; used to derive independent named streams from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic sub-seed for stream `tag` under `master`. Distinct tags give
// decorrelated streams; identical (master, tag) always gives the same stream.
inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t tag) {
  return splitmix64(splitmix64(master) ^ splitmix64(tag * 0xd6e8feb86659fd93ULL + 1));
}

namespace stream {
inline constexpr std::uint64_t kEnv = 1;
inline constexpr std::uint64_t kPosteriorInit = 2;
inline constexpr std::uint64_t kAgent = 3;
}  // namespace stream

}  // namespace barvf

#endif  // BARVF_RNG_HPP
