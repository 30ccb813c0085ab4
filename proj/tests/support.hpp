// Random instance generators and independent reference computations shared
// by the unit tests and the acceptance suite.
#ifndef HYBRIDPLAN_TESTS_SUPPORT_HPP
#define HYBRIDPLAN_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "hybridplan/allocator.hpp"
#include "hybridplan/planner.hpp"
#include "hybridplan/simulator.hpp"
#include "hybridplan/units.hpp"

namespace hybridplan::testing {

inline const FlatRatePlan kVirginLower{Money::from_pounds("26.50"), Rate(50), std::nullopt};
inline const FlatRatePlan kVirginHigher{Money::from_pounds("39.00"), Rate(152), std::nullopt};

/// Top of the slope range computed by hand: (P_H - P_L) / u_max.
inline constexpr double kVirginAlphaMax = 12.5 / 2.64384e8;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// A plan pair whose integer N range is non-empty.
struct PlanPair {
  FlatRatePlan lower;
  FlatRatePlan higher;
};

inline PlanPair random_plan_pair(std::mt19937_64& rng) {
  const int n_star = uniform_int(rng, 1, 10);
  const double r_low = std::round(uniform(rng, 1.0, 500.0) * 100.0) / 100.0;
  const double r_high = r_low * (n_star + uniform(rng, 0.0, 0.999));
  const std::int64_t p_low = std::uniform_int_distribution<std::int64_t>(1'000'000, 200'000'000)(rng);
  const std::int64_t p_high = std::uniform_int_distribution<std::int64_t>(p_low, p_low * n_star)(rng);
  return PlanPair{FlatRatePlan{Money::from_micros(p_low), Rate(r_low), std::nullopt},
                  FlatRatePlan{Money::from_micros(p_high), Rate(r_high), std::nullopt}};
}

struct AllocInstance {
  Rate capacity;
  std::vector<SubscriberState> subscribers;
};

/// Up to 8 subscribers with random floors, weights and demands; the
/// capacity always covers the guaranteed shares.
inline AllocInstance random_alloc_instance(std::mt19937_64& rng, double max_capacity = 20.0) {
  AllocInstance inst;
  const int n = uniform_int(rng, 1, 8);
  double floor_total = 0.0;
  for (int i = 0; i < n; ++i) {
    SubscriberState s;
    s.id = static_cast<SubscriberId>(uniform_int(rng, 0, 1000) * 16 + i);
    s.weight = Rate(uniform(rng, 0.1, 5.0));
    s.guaranteed_rate = Rate(uniform(rng, 0.0, max_capacity / (2.0 * n)));
    switch (uniform_int(rng, 0, 3)) {
      case 0: s.demand = Rate(0.0); break;
      case 1: s.demand = Rate(uniform(rng, 0.0, s.guaranteed_rate.value())); break;
      default: s.demand = Rate(uniform(rng, 0.0, max_capacity)); break;
    }
    floor_total += std::min(s.demand, s.guaranteed_rate).value();
    inst.subscribers.push_back(s);
  }
  inst.capacity = Rate(floor_total + uniform(rng, 0.0, max_capacity / 2.0));
  return inst;
}

/// Random piecewise-constant trace on an integer-second grid.
inline SubscriberTrace random_trace(std::mt19937_64& rng, std::string id, int horizon, double max_rate) {
  SubscriberTrace t;
  t.id = std::move(id);
  int start = 0;
  while (start < horizon) {
    const double rate = uniform_int(rng, 0, 3) == 0 ? 0.0 : uniform(rng, 0.0, max_rate);
    t.breakpoints.push_back({TimeSpan(start), Rate(rate)});
    start += uniform_int(rng, 1, std::max(1, horizon / 4));
  }
  return t;
}

inline DemandScenario random_scenario(std::mt19937_64& rng, int n, int horizon, double max_rate) {
  DemandScenario s;
  s.name = "random";
  s.horizon = TimeSpan(horizon);
  for (int i = 0; i < n; ++i) {
    s.subscribers.push_back(random_trace(rng, "sub-" + std::to_string(i + 1), horizon, max_rate));
  }
  return s;
}

/// Offered rate of a trace at time t.
inline double rate_at(const SubscriberTrace& trace, double t) {
  double r = 0.0;
  for (const auto& bp : trace.breakpoints) {
    if (bp.start.value() <= t) r = bp.rate.value();
  }
  return r;
}

}  // namespace hybridplan::testing

#endif  // HYBRIDPLAN_TESTS_SUPPORT_HPP
