#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace wscj {

// Weights are stored as integers over this denominator.
inline constexpr std::int64_t kWeightDenominator = 1'000'000;
inline constexpr std::int64_t kMaxAlphaDenominator = 10'000;

using MicroWeight = std::int64_t;

// Rounds a weight in [0,1] to the 10^-6 grid. Throws InputError outside [0,1]
// or on NaN.
MicroWeight quantize_weight(double w);
inline double to_real(MicroWeight w) { return static_cast<double>(w) / kWeightDenominator; }

// Exact objective value in units of 1 / (alpha.den * 10^6).
using Cost = std::int64_t;
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max() / 4;

// Convex-combination factor alpha = num/den with den <= 10^4, kept reduced.
class Alpha {
 public:
  Alpha() = default;
  Alpha(std::int64_t num, std::int64_t den);

  // Accepts "0.25", "1/3", "1", "0". Decimal input may have at most four
  // fractional digits.
  static Alpha parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  // Cost of discarding one micro-unit of weight.
  Cost weight_coefficient() const { return num_; }
  // Cost of one SCJ change (cut or join).
  Cost change_coefficient() const { return (den_ - num_) * kWeightDenominator; }
  Cost cost(std::int64_t changes, MicroWeight discarded) const {
    return change_coefficient() * changes + weight_coefficient() * discarded;
  }
  double to_real(Cost c) const {
    return static_cast<double>(c) / (static_cast<double>(den_) * kWeightDenominator);
  }

  friend bool operator==(const Alpha&, const Alpha&) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace wscj
