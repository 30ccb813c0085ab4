#include "hybridplan/planner.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <string>

namespace hybridplan {

std::string_view name(Inequality which) {
  switch (which) {
    case Inequality::kGroupCapacity: return "group-capacity";
    case Inequality::kRevenueFloor: return "revenue-floor";
    case Inequality::kSubscriberCap: return "subscriber-cap";
    case Inequality::kBasePrice: return "base-price";
    case Inequality::kRevenueVsHigher: return "revenue-vs-higher";
    case Inequality::kRevenueVsLower: return "revenue-vs-lower";
    case Inequality::kSlopeFloor: return "slope-floor";
    case Inequality::kSlopeCeiling: return "slope-ceiling";
    case Inequality::kUsageBound: return "usage-bound";
  }
  return "unknown";
}

std::string_view formula(Inequality which) {
  switch (which) {
    case Inequality::kGroupCapacity: return "N * TGR_L <= TGR_H";
    case Inequality::kRevenueFloor: return "P_H - N * P_L <= 0 (N >= P_H / P_L)";
    case Inequality::kSubscriberCap: return "P + alpha * u_max <= P_H";
    case Inequality::kBasePrice: return "P + P(0) = P_L";
    case Inequality::kRevenueVsHigher: return "sum(P + alpha * u_i) >= P_H";
    case Inequality::kRevenueVsLower: return "sum(P + alpha * u_i) >= N * P_L";
    case Inequality::kSlopeFloor: return "alpha >= max(0, (P_H - N * P_L) / ((TGR_H - TGR_L) * T_month))";
    case Inequality::kSlopeCeiling: return "alpha <= (P_H - P_L) / ((TGR_H - TGR_L) * T_month)";
    case Inequality::kUsageBound: return "u_i <= u_max";
  }
  return "?";
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string violation(Inequality which, const std::string& values) {
  return std::string(formula(which)) + " violated: " + values;
}

}  // namespace

void check_plan_pair(const FlatRatePlan& lower, const FlatRatePlan& higher) {
  if (lower.monthly_price <= Money{} || higher.monthly_price <= Money{}) {
    throw std::invalid_argument("flat-rate prices must be positive");
  }
  if (!(lower.token_generation_rate.value() > 0.0) || !(higher.token_generation_rate.value() > 0.0)) {
    throw std::invalid_argument("flat-rate token generation rates must be positive");
  }
  if (!std::isfinite(higher.token_generation_rate.value())) {
    throw std::invalid_argument("flat-rate token generation rates must be finite");
  }
  if (lower.token_generation_rate > higher.token_generation_rate) {
    throw std::invalid_argument("lower plan is faster than higher plan");
  }
  if (lower.monthly_price > higher.monthly_price) {
    throw std::invalid_argument("lower plan is dearer than higher plan");
  }
}

NRange feasible_n_range(const FlatRatePlan& lower, const FlatRatePlan& higher) {
  check_plan_pair(lower, higher);
  const std::int64_t p_low = lower.monthly_price.micros();
  const std::int64_t p_high = higher.monthly_price.micros();
  const double r_low = lower.token_generation_rate.value();
  const double r_high = higher.token_generation_rate.value();

  NRange range;
  range.n_min = static_cast<double>(p_high) / static_cast<double>(p_low);
  range.n_max = r_high / r_low;

  // Integer bounds come from the inequalities themselves rather than the
  // rounded ratios, so e.g. 0.3 / 0.1 still admits N = 3.
  const std::int64_t lowest = (p_high + p_low - 1) / p_low;
  double highest = std::floor(range.n_max);
  while ((highest + 1.0) * r_low <= r_high) highest += 1.0;
  while (highest > 0.0 && highest * r_low > r_high) highest -= 1.0;
  range.lowest = static_cast<int>(std::min<std::int64_t>(lowest, INT_MAX));
  range.highest = static_cast<int>(std::min(highest, static_cast<double>(INT_MAX)));

  if (range.lowest > range.highest) {
    throw NoValidPlan(Inequality::kRevenueFloor,
                      "no integer N satisfies both N >= P_H / P_L = " + num(range.n_min) +
                          " and N <= TGR_H / TGR_L = " + num(range.n_max) + " (" +
                          std::string(formula(Inequality::kRevenueFloor)) + "; " +
                          std::string(formula(Inequality::kGroupCapacity)) + ")");
  }
  return range;
}

DataVolume compute_u_max(const FlatRatePlan& lower, const FlatRatePlan& higher, TimeSpan month,
                         UMaxMode mode) {
  check_plan_pair(lower, higher);
  const DataVolume sustained = (higher.token_generation_rate - lower.token_generation_rate) * month;
  if (mode == UMaxMode::kApproximate) {
    return sustained;
  }
  if (!lower.token_bucket_size || !higher.token_bucket_size) {
    throw MissingParameter("exact u_max needs both token bucket sizes");
  }
  const double burst = higher.token_bucket_size->value() - lower.token_bucket_size->value();
  return DataVolume(std::max(0.0, sustained.value() + burst));
}

AlphaBounds alpha_bounds(const FlatRatePlan& lower, const FlatRatePlan& higher, int n, TimeSpan month) {
  const NRange range = feasible_n_range(lower, higher);
  if (n < range.lowest) {
    throw OutOfBounds(Inequality::kRevenueFloor,
                      violation(Inequality::kRevenueFloor,
                                "N = " + std::to_string(n) + " < P_H / P_L = " + num(range.n_min)));
  }
  if (n > range.highest) {
    throw OutOfBounds(Inequality::kGroupCapacity,
                      violation(Inequality::kGroupCapacity,
                                "N = " + std::to_string(n) + " > TGR_H / TGR_L = " + num(range.n_max)));
  }

  const double u_max = compute_u_max(lower, higher, month, UMaxMode::kApproximate).value();
  if (u_max == 0.0) {
    return AlphaBounds{};
  }
  const Money spread = higher.monthly_price - lower.monthly_price;
  const Money shortfall = higher.monthly_price - lower.monthly_price * n;
  return AlphaBounds{PriceSlope(std::max(0.0, shortfall.pounds() / u_max)),
                     PriceSlope(spread.pounds() / u_max)};
}

PlanBounds plan_bounds(const FlatRatePlan& lower, const FlatRatePlan& higher, int n, TimeSpan month) {
  return PlanBounds{feasible_n_range(lower, higher), alpha_bounds(lower, higher, n, month),
                    compute_u_max(lower, higher, month, UMaxMode::kApproximate)};
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kSlopeSlack = 1e-12;

}  // namespace

HybridPlan design_hybrid_plan(const FlatRatePlan& lower, const FlatRatePlan& higher, TimeSpan month,
                              NPolicy n_policy, SlopePolicy slope_policy) {
  const NRange range = feasible_n_range(lower, higher);
  const int n = std::visit(Overloaded{
                               [&](PickMax) { return range.highest; },
                               [&](PickMin) { return range.lowest; },
                               [&](GivenN given) { return given.value; },
                           },
                           n_policy);
  // alpha_bounds rejects an out-of-range N with the violated inequality.
  const AlphaBounds bounds = alpha_bounds(lower, higher, n, month);

  const PriceSlope slope = std::visit(
      Overloaded{
          [&](PickMax) { return bounds.alpha_max; },
          [&](PickMin) { return bounds.alpha_min; },
          [&](GivenSlope given) {
            const double a = given.value.value();
            if (a < bounds.alpha_min.value() * (1.0 - kSlopeSlack)) {
              throw OutOfBounds(Inequality::kSlopeFloor,
                                violation(Inequality::kSlopeFloor,
                                          "alpha = " + num(a) + " < " + num(bounds.alpha_min.value())));
            }
            if (a > bounds.alpha_max.value() * (1.0 + kSlopeSlack)) {
              throw OutOfBounds(Inequality::kSlopeCeiling,
                                violation(Inequality::kSlopeCeiling,
                                          "alpha = " + num(a) + " > " + num(bounds.alpha_max.value())));
            }
            return given.value;
          },
      },
      slope_policy);

  HybridPlan plan;
  plan.n_subscribers = n;
  plan.base_price = lower.monthly_price;
  plan.slope = slope;
  plan.token_generation_rate = lower.token_generation_rate;
  plan.token_bucket_size = lower.token_bucket_size.value_or(DataVolume{});
  plan.month_length = month;
  return plan;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check& ValidationReport::at(Inequality which) const {
  for (const auto& c : checks) {
    if (c.inequality == which) return c;
  }
  throw std::out_of_range("no check for " + std::string(name(which)));
}

ValidationReport validate_hybrid_plan(const HybridPlan& plan, const FlatRatePlan& lower,
                                      const FlatRatePlan& higher) {
  check_plan_pair(lower, higher);
  ValidationReport report;
  const double n = plan.n_subscribers;

  const double group_rate = n * plan.token_generation_rate.value();
  report.checks.push_back({Inequality::kGroupCapacity, group_rate, higher.token_generation_rate.value(),
                           group_rate <= higher.token_generation_rate.value(),
                           "N * TGR_L = " + num(group_rate) + " Mbit/s"});

  const DataVolume u_max = compute_u_max(lower, higher, plan.month_length, UMaxMode::kApproximate);
  const Money peak_bill = plan.base_price + usage_charge(plan.slope, u_max);
  report.checks.push_back({Inequality::kSubscriberCap, peak_bill.pounds(), higher.monthly_price.pounds(),
                           peak_bill <= higher.monthly_price,
                           "bill at u_max = " + num(u_max.value()) + " Mbit is " + peak_bill.to_string()});

  report.checks.push_back({Inequality::kBasePrice, plan.base_price.pounds(), lower.monthly_price.pounds(),
                           plan.base_price == lower.monthly_price, "P = " + plan.base_price.to_string()});

  const Money gap = higher.monthly_price - lower.monthly_price * plan.n_subscribers;
  report.checks.push_back({Inequality::kRevenueFloor, gap.pounds(), 0.0, gap <= Money{},
                           "P_H - N * P_L = " + gap.to_string()});
  return report;
}

}  // namespace hybridplan
