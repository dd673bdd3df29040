#pragma once

#include <cstdint>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

namespace wscj {

using BigCount = boost::multiprecision::cpp_int;

// The standard library's distributions are implementation-defined; these
// helpers only rely on the (fully specified) mt19937_64 output sequence.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
// Independent stream seed for (seed, stream index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Uniform integer in [0, n); n > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);
// Uniform integer in [lo, hi].
std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi);
// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(Rng& rng);
// Uniform big integer in [0, n); n > 0.
BigCount uniform_below(Rng& rng, const BigCount& n);

}  // namespace wscj
