#ifndef HYBRIDPLAN_BILLING_HPP
#define HYBRIDPLAN_BILLING_HPP

#include <span>
#include <string>
#include <vector>

#include "hybridplan/planner.hpp"
#include "hybridplan/units.hpp"

namespace hybridplan {

/// One subscriber's month: traffic inside their own bucket contract and the
/// non-conformant excess u_i that the usage charge applies to.
struct UsageRecord {
  std::string subscriber_id;
  DataVolume conformant_volume;
  DataVolume excess_volume;
  TimeSpan month_length = kDefaultMonth;
};

struct Bill {
  std::string subscriber_id;
  Money base;
  Money usage_charge;
  Money total;
};

/// base + slope * u, the usage part rounded to the micro-pound on its own.
Bill monthly_price(const HybridPlan& plan, DataVolume usage, std::string subscriber_id = {});

std::vector<Bill> bill_group(const HybridPlan& plan, std::span<const UsageRecord> usages);

/// Sum of all bills. Throws ConfigError unless there is exactly one record
/// per group member (inactive members appear with zero usage).
Money group_revenue(const HybridPlan& plan, std::span<const UsageRecord> usages);

struct RequirementReport {
  Money revenue;
  Money max_bill;
  std::vector<Check> checks;

  bool passed() const;
  const Check& at(Inequality which) const;
};

/// Evaluates the ISP side (revenue >= P_H, revenue >= N * P_L) and the
/// subscriber side (largest bill <= P_H) for a realized month. When both
/// bucket sizes are known, each record is also checked against exact u_max.
RequirementReport check_requirements(const HybridPlan& plan, const FlatRatePlan& lower,
                                     const FlatRatePlan& higher, std::span<const UsageRecord> usages);

}  // namespace hybridplan

#endif  // HYBRIDPLAN_BILLING_HPP
