#include "tumorage/random.hpp"

#include "tumorage/normal.hpp"

namespace tumorage {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ ((index + 1) * 0x9E3779B97F4A7C15ULL));
}

double uniform_open01(Rng& rng) {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(rng() >> 11) + 0.5) * kScale;
}

double standard_normal(Rng& rng) { return normal_quantile(uniform_open01(rng)); }

}  // namespace tumorage
