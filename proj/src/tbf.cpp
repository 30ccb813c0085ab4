#include "hybridplan/tbf.hpp"

#include <algorithm>
#include <string>

namespace hybridplan {

TokenBucket::TokenBucket(Rate rate, DataVolume capacity, TimeSpan start)
    : TokenBucket(rate, capacity, capacity, start) {}

TokenBucket::TokenBucket(Rate rate, DataVolume capacity, DataVolume tokens, TimeSpan last_update)
    : rate_(rate), capacity_(capacity), tokens_(tokens), last_update_(last_update) {
  if (tokens_ > capacity_) {
    throw std::invalid_argument("token level exceeds bucket capacity");
  }
}

namespace {

TimeSpan elapsed(const TokenBucket& bucket, TimeSpan now) {
  if (now < bucket.last_update()) {
    throw TimeRegression("token bucket time went backwards: " + std::to_string(now.value()) + " < " +
                         std::to_string(bucket.last_update().value()));
  }
  return now - bucket.last_update();
}

}  // namespace

TokenBucket refill(const TokenBucket& bucket, TimeSpan now) {
  const DataVolume accrued = bucket.rate() * elapsed(bucket, now);
  const DataVolume tokens = std::min(bucket.capacity(), bucket.tokens() + accrued);
  return TokenBucket(bucket.rate(), bucket.capacity(), tokens, now);
}

Conformance conform(const TokenBucket& bucket, DataVolume offered, TimeSpan now) {
  const DataVolume available = bucket.tokens() + bucket.rate() * elapsed(bucket, now);
  const DataVolume conformant = std::min(offered, available);
  const DataVolume tokens = std::min(bucket.capacity(), available - conformant);
  return Conformance{conformant, offered - conformant,
                     TokenBucket(bucket.rate(), bucket.capacity(), tokens, now)};
}

DataVolume max_conformant_volume(Rate rate, DataVolume capacity, TimeSpan horizon) {
  return rate * horizon + capacity;
}

}  // namespace hybridplan
