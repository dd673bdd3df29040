#include "wscj/core/scaled.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "wscj/core/errors.hpp"

namespace wscj {

MicroWeight quantize_weight(double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw InputError("weight " + std::to_string(w) + " is outside [0,1]");
  }
  return static_cast<MicroWeight>(std::llround(w * static_cast<double>(kWeightDenominator)));
}

Alpha::Alpha(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0 || num > den) {
    throw InputError("alpha must be a fraction in [0,1]");
  }
  const auto g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
  if (den_ > kMaxAlphaDenominator) {
    throw InputError("alpha denominator exceeds " + std::to_string(kMaxAlphaDenominator));
  }
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("malformed alpha '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Alpha Alpha::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Alpha(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Alpha(parse_int(text, text), 1);
  const auto whole = text.substr(0, dot);
  const auto frac = text.substr(dot + 1);
  if (frac.size() > 4) {
    throw InputError("alpha '" + std::string(text) + "' has more than four decimals");
  }
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::int64_t w = whole.empty() ? 0 : parse_int(whole, text);
  const std::int64_t f = frac.empty() ? 0 : parse_int(frac, text);
  return Alpha(w * den + f, den);
}

std::string Alpha::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace wscj
