#ifndef HYBRIDPLAN_PLANNER_HPP
#define HYBRIDPLAN_PLANNER_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hybridplan/errors.hpp"
#include "hybridplan/units.hpp"

namespace hybridplan {

/// An existing flat-rate tier. The bucket size is often unpublished.
struct FlatRatePlan {
  Money monthly_price;
  Rate token_generation_rate;
  std::optional<DataVolume> token_bucket_size;
};

/// Hybrid tariff: each of N subscribers pays base_price + slope * u, where
/// u is their non-conformant (excess) volume for the month.
struct HybridPlan {
  int n_subscribers = 1;
  Money base_price;
  PriceSlope slope;
  Rate token_generation_rate;
  DataVolume token_bucket_size;
  TimeSpan month_length = kDefaultMonth;
};

struct NRange {
  double n_min = 0.0;  // P_H / P_L
  double n_max = 0.0;  // TGR_H / TGR_L
  int lowest = 0;      // ceil(n_min)
  int highest = 0;     // floor(n_max)
};

struct AlphaBounds {
  PriceSlope alpha_min;
  PriceSlope alpha_max;
};

struct PlanBounds {
  NRange n;
  AlphaBounds alpha;
  DataVolume u_max;
};

enum class UMaxMode { kExact, kApproximate };

/// Throws std::invalid_argument unless lower is no faster and no dearer than
/// higher and both have positive price and rate.
void check_plan_pair(const FlatRatePlan& lower, const FlatRatePlan& higher);

/// Real and integer bounds on the group size. Throws NoValidPlan when no
/// integer lies in [ceil(P_H/P_L), floor(TGR_H/TGR_L)].
NRange feasible_n_range(const FlatRatePlan& lower, const FlatRatePlan& higher);

/// Largest monthly excess one subscriber can take:
/// (TGR_H - TGR_L) * T + (TBS_H - TBS_L), or without the bucket term in
/// approximate mode. Exact mode needs both bucket sizes (MissingParameter).
DataVolume compute_u_max(const FlatRatePlan& lower, const FlatRatePlan& higher, TimeSpan month,
                         UMaxMode mode);

/// Admissible slope range for group size n, on the approximate u_max.
/// When the two rates coincide there is no excess to price and both bounds
/// are zero.
AlphaBounds alpha_bounds(const FlatRatePlan& lower, const FlatRatePlan& higher, int n, TimeSpan month);

PlanBounds plan_bounds(const FlatRatePlan& lower, const FlatRatePlan& higher, int n, TimeSpan month);

struct PickMax {};
struct PickMin {};
struct GivenN {
  int value;
};
struct GivenSlope {
  PriceSlope value;
};
using NPolicy = std::variant<PickMax, PickMin, GivenN>;
using SlopePolicy = std::variant<PickMax, PickMin, GivenSlope>;

HybridPlan design_hybrid_plan(const FlatRatePlan& lower, const FlatRatePlan& higher, TimeSpan month,
                              NPolicy n_policy, SlopePolicy slope_policy);

struct Check {
  Inequality inequality;
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<Check> checks;

  bool passed() const;
  const Check& at(Inequality which) const;
};

/// Static checks on a plan: group capacity, subscriber price cap at u_max,
/// base price equal to the lower tier, and the revenue floor N * P_L >= P_H.
ValidationReport validate_hybrid_plan(const HybridPlan& plan, const FlatRatePlan& lower,
                                      const FlatRatePlan& higher);

}  // namespace hybridplan

#endif  // HYBRIDPLAN_PLANNER_HPP
