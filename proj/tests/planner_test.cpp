#include "hybridplan/planner.hpp"

#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

namespace hybridplan {
namespace {

using testing::kVirginAlphaMax;
using testing::kVirginHigher;
using testing::kVirginLower;

FlatRatePlan flat(const char* price, double rate, std::optional<double> bucket = std::nullopt) {
  FlatRatePlan p{Money::from_pounds(price), Rate(rate), std::nullopt};
  if (bucket) p.token_bucket_size = DataVolume(*bucket);
  return p;
}

TEST(FeasibleNRange, VirginMedia) {
  const NRange r = feasible_n_range(kVirginLower, kVirginHigher);
  EXPECT_NEAR(r.n_min, 39.0 / 26.5, 1e-12);
  EXPECT_NEAR(r.n_min, 1.472, 1e-3);
  EXPECT_DOUBLE_EQ(r.n_max, 3.04);
  EXPECT_EQ(r.lowest, 2);
  EXPECT_EQ(r.highest, 3);
}

TEST(FeasibleNRange, IdenticalPlans) {
  const NRange r = feasible_n_range(flat("20", 100), flat("20", 100));
  EXPECT_EQ(r.n_min, 1.0);
  EXPECT_EQ(r.n_max, 1.0);
  EXPECT_EQ(r.lowest, 1);
  EXPECT_EQ(r.highest, 1);
}

TEST(FeasibleNRange, EmptyRangeNamesRevenueFloor) {
  try {
    feasible_n_range(flat("10", 100), flat("50", 200));
    FAIL() << "expected NoValidPlan";
  } catch (const NoValidPlan& e) {
    EXPECT_EQ(e.binding(), Inequality::kRevenueFloor);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("P_H / P_L = 5"), std::string::npos) << msg;
    EXPECT_NE(msg.find("TGR_H / TGR_L = 2"), std::string::npos) << msg;
  }
}

TEST(FeasibleNRange, IntegerCeilingFollowsTheProductNotTheRatio) {
  // In doubles 0.3 / 0.1 is 2.9999999999999996 and 3 * 0.1 exceeds 0.3; the
  // integer bound must agree with the product N * TGR_L <= TGR_H.
  const NRange r = feasible_n_range(flat("1", 0.1), flat("2", 0.3));
  EXPECT_LE(r.highest * 0.1, 0.3);
  EXPECT_GT((r.highest + 1) * 0.1, 0.3);
}

TEST(FeasibleNRange, RejectsInvertedPair) {
  EXPECT_THROW(feasible_n_range(kVirginHigher, kVirginLower), std::invalid_argument);
  EXPECT_THROW(feasible_n_range(flat("30", 50), flat("20", 100)), std::invalid_argument);
}

TEST(ComputeUMax, ApproximateVirginMedia) {
  const DataVolume u = compute_u_max(kVirginLower, kVirginHigher, kDefaultMonth, UMaxMode::kApproximate);
  EXPECT_DOUBLE_EQ(u.value(), 2.64384e8);
}

TEST(ComputeUMax, ExactWithEqualBucketsMatchesApproximate) {
  const auto lower = flat("26.5", 50, 100.0);
  const auto higher = flat("39", 152, 100.0);
  EXPECT_EQ(compute_u_max(lower, higher, kDefaultMonth, UMaxMode::kExact).value(),
            compute_u_max(lower, higher, kDefaultMonth, UMaxMode::kApproximate).value());
}

TEST(ComputeUMax, ExactAddsBucketDifference) {
  EXPECT_DOUBLE_EQ(
      compute_u_max(flat("1", 10, 20.0), flat("2", 110, 50.0), TimeSpan(10), UMaxMode::kExact).value(), 1030.0);
}

TEST(ComputeUMax, ExactNeedsBucketSizes) {
  EXPECT_THROW(compute_u_max(kVirginLower, kVirginHigher, kDefaultMonth, UMaxMode::kExact), MissingParameter);
}

TEST(AlphaBounds, VirginMediaThreeSubscribers) {
  const AlphaBounds b = alpha_bounds(kVirginLower, kVirginHigher, 3, kDefaultMonth);
  EXPECT_EQ(b.alpha_min.value(), 0.0);
  EXPECT_NEAR(b.alpha_max.value(), kVirginAlphaMax, 1e-15 * kVirginAlphaMax * 10);
  EXPECT_NEAR(b.alpha_max.value(), 4.728e-8, 4.728e-8 * 5e-4);
}

TEST(AlphaBounds, TwoSubscribersClampsFloorAtZero) {
  // (39 - 53) / 2.64384e8 < 0
  const AlphaBounds b = alpha_bounds(kVirginLower, kVirginHigher, 2, kDefaultMonth);
  EXPECT_EQ(b.alpha_min.value(), 0.0);
  EXPECT_NEAR(b.alpha_max.value(), kVirginAlphaMax, 1e-20);
}

TEST(AlphaBounds, FloorIsZeroAtRevenueBreakEven) {
  // N = P_H / P_L exactly: the floor's numerator vanishes.
  const AlphaBounds b = alpha_bounds(flat("10", 10), flat("30", 40), 3, TimeSpan(100));
  EXPECT_EQ(b.alpha_min.value(), 0.0);
  EXPECT_DOUBLE_EQ(b.alpha_max.value(), 20.0 / 3000.0);
}

TEST(AlphaBounds, EqualRatesHaveNoExcessToPrice) {
  const AlphaBounds b = alpha_bounds(flat("20", 100), flat("20", 100), 1, kDefaultMonth);
  EXPECT_EQ(b.alpha_min.value(), 0.0);
  EXPECT_EQ(b.alpha_max.value(), 0.0);
}

TEST(AlphaBounds, RejectsNOutsideRange) {
  try {
    alpha_bounds(kVirginLower, kVirginHigher, 4, kDefaultMonth);
    FAIL();
  } catch (const OutOfBounds& e) {
    EXPECT_EQ(e.violated(), Inequality::kGroupCapacity);
  }
  try {
    alpha_bounds(kVirginLower, kVirginHigher, 1, kDefaultMonth);
    FAIL();
  } catch (const OutOfBounds& e) {
    EXPECT_EQ(e.violated(), Inequality::kRevenueFloor);
  }
}

TEST(DesignHybridPlan, VirginMediaMaxMax) {
  const HybridPlan p = design_hybrid_plan(kVirginLower, kVirginHigher, kDefaultMonth, PickMax{}, PickMax{});
  EXPECT_EQ(p.n_subscribers, 3);
  EXPECT_EQ(p.base_price, Money::from_pounds("26.50"));
  EXPECT_NEAR(p.slope.value(), 4.728e-8, 0.5e-11);  // 4 significant figures
  EXPECT_EQ(p.token_generation_rate.value(), 50.0);
  EXPECT_EQ(p.token_bucket_size.value(), 0.0);
  EXPECT_EQ(p.month_length.value(), 2.592e6);
}

TEST(DesignHybridPlan, MinPolicies) {
  const HybridPlan p = design_hybrid_plan(kVirginLower, kVirginHigher, kDefaultMonth, PickMin{}, PickMin{});
  EXPECT_EQ(p.n_subscribers, 2);
  EXPECT_EQ(p.slope.value(), 0.0);
}

TEST(DesignHybridPlan, IdenticalPlansCollapse) {
  const auto plan = flat("20", 100, 5.0);
  const HybridPlan p = design_hybrid_plan(plan, plan, kDefaultMonth, PickMax{}, PickMax{});
  EXPECT_EQ(p.n_subscribers, 1);
  EXPECT_EQ(p.slope.value(), 0.0);
  EXPECT_EQ(p.base_price, plan.monthly_price);
  EXPECT_EQ(p.token_bucket_size.value(), 5.0);
}

TEST(DesignHybridPlan, GivenNOutOfRange) {
  try {
    design_hybrid_plan(kVirginLower, kVirginHigher, kDefaultMonth, GivenN{4}, PickMax{});
    FAIL();
  } catch (const OutOfBounds& e) {
    EXPECT_EQ(e.violated(), Inequality::kGroupCapacity);
    EXPECT_NE(std::string(e.what()).find("N * TGR_L <= TGR_H"), std::string::npos);
  }
}

TEST(DesignHybridPlan, GivenSlope) {
  const HybridPlan p =
      design_hybrid_plan(kVirginLower, kVirginHigher, kDefaultMonth, GivenN{3}, GivenSlope{PriceSlope(3e-8)});
  EXPECT_EQ(p.slope.value(), 3e-8);
  // The 4 s.f. value 4.728e-8 sits just above the exact ceiling.
  try {
    design_hybrid_plan(kVirginLower, kVirginHigher, kDefaultMonth, GivenN{3}, GivenSlope{PriceSlope(4.728e-8)});
    FAIL();
  } catch (const OutOfBounds& e) {
    EXPECT_EQ(e.violated(), Inequality::kSlopeCeiling);
  }
}

TEST(DesignHybridPlan, PropagatesEmptyRange) {
  EXPECT_THROW(design_hybrid_plan(flat("10", 100), flat("50", 200), kDefaultMonth, PickMax{}, PickMax{}),
               NoValidPlan);
}

TEST(ValidateHybridPlan, DesignedPlanPassesWithTightCap) {
  const HybridPlan p = design_hybrid_plan(kVirginLower, kVirginHigher, kDefaultMonth, PickMax{}, PickMax{});
  const ValidationReport r = validate_hybrid_plan(p, kVirginLower, kVirginHigher);
  EXPECT_TRUE(r.passed());
  const Check& cap = r.at(Inequality::kSubscriberCap);
  EXPECT_EQ(cap.lhs, cap.rhs);
  EXPECT_EQ(r.at(Inequality::kGroupCapacity).lhs, 150.0);
  EXPECT_EQ(r.at(Inequality::kRevenueFloor).lhs, -40.5);
}

TEST(ValidateHybridPlan, DoubleSlopeBreaksCap) {
  HybridPlan p = design_hybrid_plan(kVirginLower, kVirginHigher, kDefaultMonth, PickMax{}, PickMax{});
  p.slope = p.slope * 2.0;
  const ValidationReport r = validate_hybrid_plan(p, kVirginLower, kVirginHigher);
  EXPECT_FALSE(r.passed());
  const Check& cap = r.at(Inequality::kSubscriberCap);
  EXPECT_FALSE(cap.passed);
  EXPECT_NEAR(cap.lhs - cap.rhs, 12.5, 1e-6);
}

TEST(ValidateHybridPlan, BasePriceMismatch) {
  HybridPlan p = design_hybrid_plan(kVirginLower, kVirginHigher, kDefaultMonth, PickMax{}, PickMax{});
  p.base_price = Money::from_pounds("25");
  EXPECT_FALSE(validate_hybrid_plan(p, kVirginLower, kVirginHigher).at(Inequality::kBasePrice).passed);
}

TEST(ValidateHybridPlan, SingleSubscriberFailsRevenueFloor) {
  HybridPlan p = design_hybrid_plan(kVirginLower, kVirginHigher, kDefaultMonth, PickMax{}, PickMax{});
  p.n_subscribers = 1;
  const auto r = validate_hybrid_plan(p, kVirginLower, kVirginHigher);
  EXPECT_FALSE(r.at(Inequality::kRevenueFloor).passed);
  EXPECT_TRUE(r.at(Inequality::kGroupCapacity).passed);
}

TEST(ValidateHybridPlan, OversizedGroupFailsCapacity) {
  HybridPlan p = design_hybrid_plan(kVirginLower, kVirginHigher, kDefaultMonth, PickMax{}, PickMax{});
  p.n_subscribers = 4;
  EXPECT_FALSE(validate_hybrid_plan(p, kVirginLower, kVirginHigher).at(Inequality::kGroupCapacity).passed);
}

TEST(PlannerProperty, RandomPlanPairs) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const auto [lower, higher] = testing::random_plan_pair(rng);
    const NRange range = feasible_n_range(lower, higher);
    ASSERT_LE(range.lowest, range.highest);
    EXPECT_LE(range.highest * lower.token_generation_rate.value(), higher.token_generation_rate.value());
    EXPECT_GT((range.highest + 1) * lower.token_generation_rate.value(), higher.token_generation_rate.value());
    EXPECT_GE(lower.monthly_price * range.lowest, higher.monthly_price);
    EXPECT_LT(lower.monthly_price * (range.lowest - 1), higher.monthly_price);

    const DataVolume u_max = compute_u_max(lower, higher, kDefaultMonth, UMaxMode::kApproximate);
    for (int n = range.lowest; n <= range.highest; ++n) {
      const AlphaBounds b = alpha_bounds(lower, higher, n, kDefaultMonth);
      EXPECT_LE(b.alpha_min, b.alpha_max);
      const HybridPlan top = design_hybrid_plan(lower, higher, kDefaultMonth, GivenN{n}, PickMax{});
      const Money peak = top.base_price + usage_charge(top.slope, u_max);
      EXPECT_LE(std::abs((peak - higher.monthly_price).micros()), 1);
    }
    for (NPolicy np : {NPolicy{PickMax{}}, NPolicy{PickMin{}}}) {
      for (SlopePolicy sp : {SlopePolicy{PickMax{}}, SlopePolicy{PickMin{}}}) {
        const HybridPlan p = design_hybrid_plan(lower, higher, kDefaultMonth, np, sp);
        EXPECT_TRUE(validate_hybrid_plan(p, lower, higher).passed()) << "trial " << trial;
      }
    }
  }
}

}  // namespace
}  // namespace hybridplan
