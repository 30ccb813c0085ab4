#include "hybridplan/billing.hpp"

#include <algorithm>
#include <string>

#include "hybridplan/errors.hpp"

namespace hybridplan {

Bill monthly_price(const HybridPlan& plan, DataVolume usage, std::string subscriber_id) {
  const Money charge = usage_charge(plan.slope, usage);
  return Bill{std::move(subscriber_id), plan.base_price, charge, plan.base_price + charge};
}

namespace {

void check_record_count(const HybridPlan& plan, std::span<const UsageRecord> usages) {
  if (usages.size() != static_cast<std::size_t>(plan.n_subscribers)) {
    throw ConfigError("plan has " + std::to_string(plan.n_subscribers) + " subscribers but " +
                      std::to_string(usages.size()) + " usage records were supplied");
  }
}

}  // namespace

std::vector<Bill> bill_group(const HybridPlan& plan, std::span<const UsageRecord> usages) {
  check_record_count(plan, usages);
  std::vector<Bill> bills;
  bills.reserve(usages.size());
  for (const auto& u : usages) {
    bills.push_back(monthly_price(plan, u.excess_volume, u.subscriber_id));
  }
  return bills;
}

Money group_revenue(const HybridPlan& plan, std::span<const UsageRecord> usages) {
  Money total;
  for (const auto& bill : bill_group(plan, usages)) {
    total += bill.total;
  }
  return total;
}

bool RequirementReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check& RequirementReport::at(Inequality which) const {
  for (const auto& c : checks) {
    if (c.inequality == which) return c;
  }
  throw std::out_of_range("no check for " + std::string(name(which)));
}

RequirementReport check_requirements(const HybridPlan& plan, const FlatRatePlan& lower,
                                     const FlatRatePlan& higher, std::span<const UsageRecord> usages) {
  const auto bills = bill_group(plan, usages);
  RequirementReport report;
  for (const auto& b : bills) {
    report.revenue += b.total;
    report.max_bill = std::max(report.max_bill, b.total);
  }

  const Money p_high = higher.monthly_price;
  const Money lower_total = lower.monthly_price * plan.n_subscribers;
  report.checks.push_back({Inequality::kRevenueVsHigher, report.revenue.pounds(), p_high.pounds(),
                           report.revenue >= p_high, "revenue " + report.revenue.to_string()});
  report.checks.push_back({Inequality::kRevenueVsLower, report.revenue.pounds(), lower_total.pounds(),
                           report.revenue >= lower_total, "N * P_L = " + lower_total.to_string()});
  report.checks.push_back({Inequality::kSubscriberCap, report.max_bill.pounds(), p_high.pounds(),
                           report.max_bill <= p_high, "largest bill " + report.max_bill.to_string()});

  if (lower.token_bucket_size && higher.token_bucket_size) {
    const DataVolume u_max = compute_u_max(lower, higher, plan.month_length, UMaxMode::kExact);
    for (const auto& u : usages) {
      report.checks.push_back({Inequality::kUsageBound, u.excess_volume.value(), u_max.value(),
                               u.excess_volume <= u_max, "subscriber " + u.subscriber_id});
    }
  }
  return report;
}

}  // namespace hybridplan
