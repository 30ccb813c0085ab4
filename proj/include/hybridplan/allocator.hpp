#ifndef HYBRIDPLAN_ALLOCATOR_HPP
#define HYBRIDPLAN_ALLOCATOR_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hybridplan/units.hpp"

namespace hybridplan {

using SubscriberId = std::uint64_t;

struct SubscriberState {
  SubscriberId id = 0;
  Rate guaranteed_rate;
  /// Proportionality weight for excess; the subscriber's token generation rate.
  Rate weight;
  Rate demand;
};

struct Grant {
  SubscriberId id = 0;
  Rate granted;
  Rate guaranteed_part;
  Rate excess_part;
};

/// One grant per input subscriber, in input order.
struct AllocationResult {
  std::vector<Grant> grants;
};

/// Thrown when guaranteed shares alone exceed the link capacity.
class InfeasibleAllocation : public std::runtime_error {
 public:
  InfeasibleAllocation(Rate capacity, Rate required);
  Rate shortfall() const { return shortfall_; }

 private:
  Rate shortfall_;
};

// Excess allocation is weighted max-min fair (progressive filling with
// weight = token generation rate). It stands in for the allocation scheme of
// the deployed traffic controller and is the single place to swap if a
// different policy is wanted.
//
// Every subscriber first receives min(demand, guaranteed_rate). The leftover
// capacity is then water-filled: excess_i = min(demand_i - guaranteed_i,
// weight_i * level), with the level chosen so the leftover is used up or
// every demand is met. Subscribers with zero demand take nothing and do not
// dilute the pool.
//
// The computation runs in a canonical order (cap/weight, then id), so
// permuting the input permutes the output bit-for-bit. Ids must be unique
// and weights positive; std::invalid_argument otherwise.
AllocationResult allocate(Rate capacity, std::span<const SubscriberState> subscribers);

/// Reference water-filling used by tests: hands out `step` per round split
/// by weight among subscribers still below their cap. O(capacity / step).
std::vector<Rate> progressive_fill_oracle(Rate capacity, std::span<const Rate> caps,
                                          std::span<const Rate> weights, Rate step);

}  // namespace hybridplan

#endif  // HYBRIDPLAN_ALLOCATOR_HPP
