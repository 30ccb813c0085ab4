#ifndef HYBRIDPLAN_UNITS_HPP
#define HYBRIDPLAN_UNITS_HPP

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hybridplan {

/// Non-negative physical quantity tagged by its unit. Construction rejects
/// negative or NaN values; +infinity is allowed (an unbounded demand).
template <typename Tag>
class Quantity {
 public:
  constexpr Quantity() = default;
  explicit Quantity(double value) : value_(value) {
    if (!(value >= 0.0)) {
      throw std::invalid_argument("quantity must be non-negative, got " + std::to_string(value));
    }
  }

  constexpr double value() const { return value_; }

  friend constexpr auto operator<=>(Quantity, Quantity) = default;

  friend Quantity operator+(Quantity a, Quantity b) { return Quantity(a.value_ + b.value_); }
  /// Throws std::domain_error if the result would be negative.
  friend Quantity operator-(Quantity a, Quantity b) {
    if (b.value_ > a.value_) {
      throw std::domain_error("quantity difference would be negative");
    }
    return Quantity(a.value_ - b.value_);
  }
  friend Quantity operator*(Quantity a, double k) { return Quantity(a.value_ * k); }
  friend Quantity operator*(double k, Quantity a) { return Quantity(a.value_ * k); }
  friend Quantity operator/(Quantity a, double k) { return Quantity(a.value_ / k); }
  friend double operator/(Quantity a, Quantity b) { return a.value_ / b.value_; }

  Quantity& operator+=(Quantity other) { return *this = *this + other; }

 private:
  double value_ = 0.0;
};

struct RateTag {};
struct DataVolumeTag {};
struct TimeSpanTag {};
struct PriceSlopeTag {};

/// Megabits per second.
using Rate = Quantity<RateTag>;
/// Megabits.
using DataVolume = Quantity<DataVolumeTag>;
/// Seconds.
using TimeSpan = Quantity<TimeSpanTag>;
/// Pounds per megabit.
using PriceSlope = Quantity<PriceSlopeTag>;

inline Rate mbps(double v) { return Rate(v); }
inline DataVolume mbit(double v) { return DataVolume(v); }
inline TimeSpan seconds(double v) { return TimeSpan(v); }
inline PriceSlope gbp_per_mbit(double v) { return PriceSlope(v); }

DataVolume rate_times_time(Rate r, TimeSpan t);

inline DataVolume operator*(Rate r, TimeSpan t) { return rate_times_time(r, t); }
inline DataVolume operator*(TimeSpan t, Rate r) { return rate_times_time(r, t); }
inline Rate operator/(DataVolume v, TimeSpan t) { return Rate(v.value() / t.value()); }

/// 30 days.
inline const TimeSpan kDefaultMonth{2.592e6};

/// Money as an exact integer count of micro-pounds. Signed so that
/// differences (e.g. P_H - N*P_L) stay representable. Arithmetic throws
/// std::overflow_error instead of wrapping.
class Money {
 public:
  static constexpr std::int64_t kMicrosPerPound = 1'000'000;

  constexpr Money() = default;

  static constexpr Money from_micros(std::int64_t micros) { return Money(micros); }

  /// Parses a decimal string such as "26.50" or "-0.000001". Rejects
  /// anything that needs more than six decimal places; trailing zeros past
  /// the sixth place are accepted since they are not lossy.
  static Money from_pounds(std::string_view decimal);

  /// Converts through the shortest round-trip decimal form of `pounds`, so
  /// 79.745 parses as the decimal 79.745 and not its binary neighbour.
  static Money from_pounds(double pounds);

  /// Rounds to the nearest micro-pound, half away from zero.
  static Money round_from_pounds(double pounds);

  constexpr std::int64_t micros() const { return micros_; }
  double pounds() const { return static_cast<double>(micros_) / kMicrosPerPound; }

  /// Six fixed decimals, e.g. "26.500000".
  std::string to_string() const;

  friend constexpr auto operator<=>(Money, Money) = default;

  friend Money operator+(Money a, Money b);
  friend Money operator-(Money a, Money b);
  friend Money operator*(Money a, std::int64_t k);
  friend Money operator*(std::int64_t k, Money a) { return a * k; }
  Money& operator+=(Money other) { return *this = *this + other; }

 private:
  constexpr explicit Money(std::int64_t micros) : micros_(micros) {}

  std::int64_t micros_ = 0;
};

/// Price of `volume` at `slope`, as a line item.
inline Money usage_charge(PriceSlope slope, DataVolume volume) {
  return Money::round_from_pounds(slope.value() * volume.value());
}

}  // namespace hybridplan

#endif  // HYBRIDPLAN_UNITS_HPP
