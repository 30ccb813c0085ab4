#include "hybridplan/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace hybridplan {

DataVolume rate_times_time(Rate r, TimeSpan t) {
  // 0 * inf is an idle subscriber over an unbounded horizon, not NaN.
  if (r.value() == 0.0 || t.value() == 0.0) {
    return DataVolume{};
  }
  return DataVolume(r.value() * t.value());
}

Money Money::from_pounds(std::string_view text) {
  const std::string original(text);
  auto fail = [&](const char* why) -> Money {
    throw std::invalid_argument("invalid money amount '" + original + "': " + why);
  };

  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() && frac.empty()) {
    return fail("no digits");
  }
  for (char c : whole) {
    if (c < '0' || c > '9') return fail("unexpected character");
  }
  for (char c : frac) {
    if (c < '0' || c > '9') return fail("unexpected character");
  }
  while (frac.size() > 6 && frac.back() == '0') {
    frac.remove_suffix(1);
  }
  if (frac.size() > 6) {
    return fail("more than 6 decimal places");
  }

  std::int64_t pounds = 0;
  if (!whole.empty()) {
    auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), pounds);
    if (ec != std::errc{} || ptr != whole.data() + whole.size()) {
      return fail("out of range");
    }
  }
  std::int64_t micros = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    micros = micros * 10 + (i < frac.size() ? frac[i] - '0' : 0);
  }
  std::int64_t total = 0;
  if (__builtin_mul_overflow(pounds, kMicrosPerPound, &total) ||
      __builtin_add_overflow(total, micros, &total)) {
    return fail("out of range");
  }
  return Money(negative ? -total : total);
}

Money Money::from_pounds(double pounds) {
  if (!std::isfinite(pounds)) {
    throw std::invalid_argument("money amount must be finite");
  }
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), pounds, std::chars_format::fixed);
  if (ec != std::errc{}) {
    throw std::invalid_argument("money amount out of range");
  }
  return from_pounds(std::string_view(buf.data(), static_cast<std::size_t>(ptr - buf.data())));
}

Money Money::round_from_pounds(double pounds) {
  const double micros = pounds * static_cast<double>(kMicrosPerPound);
  if (!std::isfinite(micros) || std::fabs(micros) >= 9.2e18) {
    throw std::overflow_error("money amount out of range");
  }
  return Money(std::llround(micros));
}

std::string Money::to_string() const {
  // |INT64_MIN| is not representable; it never arises from checked arithmetic.
  const bool negative = micros_ < 0;
  const std::uint64_t magnitude = negative ? static_cast<std::uint64_t>(-micros_) : static_cast<std::uint64_t>(micros_);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%llu.%06llu", negative ? "-" : "",
                static_cast<unsigned long long>(magnitude / kMicrosPerPound),
                static_cast<unsigned long long>(magnitude % kMicrosPerPound));
  return buf;
}

Money operator+(Money a, Money b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a.micros_, b.micros_, &out)) {
    throw std::overflow_error("money addition overflow");
  }
  return Money(out);
}

Money operator-(Money a, Money b) {
  std::int64_t out = 0;
  if (__builtin_sub_overflow(a.micros_, b.micros_, &out)) {
    throw std::overflow_error("money subtraction overflow");
  }
  return Money(out);
}

Money operator*(Money a, std::int64_t k) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a.micros_, k, &out)) {
    throw std::overflow_error("money multiplication overflow");
  }
  return Money(out);
}

}  // namespace hybridplan
