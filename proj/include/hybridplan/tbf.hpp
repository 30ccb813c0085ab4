#ifndef HYBRIDPLAN_TBF_HPP
#define HYBRIDPLAN_TBF_HPP

#include <stdexcept>

#include "hybridplan/units.hpp"

namespace hybridplan {

/// Raised when a bucket is asked to move backwards in time.
class TimeRegression : public std::logic_error {
  using std::logic_error::logic_error;
};

/// Fluid token bucket. Tokens are megabits; the bucket refills at `rate`
/// up to `capacity`. Invariant: 0 <= tokens <= capacity.
class TokenBucket {
 public:
  /// A full bucket at time `start`.
  TokenBucket(Rate rate, DataVolume capacity, TimeSpan start = TimeSpan{});
  /// Throws std::invalid_argument if tokens > capacity.
  TokenBucket(Rate rate, DataVolume capacity, DataVolume tokens, TimeSpan last_update);

  Rate rate() const { return rate_; }
  DataVolume capacity() const { return capacity_; }
  DataVolume tokens() const { return tokens_; }
  TimeSpan last_update() const { return last_update_; }

 private:
  Rate rate_;
  DataVolume capacity_;
  DataVolume tokens_;
  TimeSpan last_update_;
};

struct Conformance {
  DataVolume conformant;
  DataVolume excess;
  TokenBucket bucket;
};

/// Tokens accrued up to `now`, saturating at capacity.
TokenBucket refill(const TokenBucket& bucket, TimeSpan now);

/// Splits `offered` into conformant and excess volume. The offered volume
/// is taken to arrive uniformly over [last_update, now], so tokens that
/// accrue during the interval are consumed as they arrive rather than being
/// clipped at capacity first:
///
///   conformant = min(offered, tokens + rate * dt)
///   tokens'    = min(capacity, tokens + rate * dt - conformant)
///
/// This is exact for constant-rate load within the interval; at dt = 0 it
/// reduces to min(offered, tokens).
Conformance conform(const TokenBucket& bucket, DataVolume offered, TimeSpan now);

/// rate * horizon + capacity: the most a full bucket lets through.
DataVolume max_conformant_volume(Rate rate, DataVolume capacity, TimeSpan horizon);

}  // namespace hybridplan

#endif  // HYBRIDPLAN_TBF_HPP
