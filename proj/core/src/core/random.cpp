#include "wscj/core/random.hpp"

#include <limits>

namespace wscj {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ull));
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  // Rejection on the largest multiple of n that fits in 64 bits.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  while (true) {
    const std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
  if (span == 0) return static_cast<std::int64_t>(rng());
  return lo + static_cast<std::int64_t>(uniform_below(rng, span));
}

double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

BigCount uniform_below(Rng& rng, const BigCount& n) {
  if (n <= std::numeric_limits<std::uint64_t>::max()) {
    return BigCount(uniform_below(rng, static_cast<std::uint64_t>(n)));
  }
  const auto bits = boost::multiprecision::msb(n) + 1;
  const auto words = (bits + 63) / 64;
  const auto excess = words * 64 - bits;
  while (true) {
    BigCount x = 0;
    for (std::size_t i = 0; i < words; ++i) {
      std::uint64_t w = rng();
      if (i == 0 && excess > 0) w >>= excess;
      x = (x << 64) | w;
    }
    if (x < n) return x;
  }
}

}  // namespace wscj
