#ifndef HYBRIDPLAN_SIMULATOR_HPP
#define HYBRIDPLAN_SIMULATOR_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hybridplan/billing.hpp"
#include "hybridplan/planner.hpp"
#include "hybridplan/units.hpp"

namespace hybridplan {

struct Breakpoint {
  TimeSpan start;
  Rate rate;
};

/// Piecewise-constant offered load. An empty trace is an idle subscriber.
struct SubscriberTrace {
  std::string id;
  std::vector<Breakpoint> breakpoints;
};

struct DemandScenario {
  std::string name;
  std::vector<SubscriberTrace> subscribers;
  TimeSpan horizon;

  /// Throws ConfigError on a non-positive horizon, duplicate ids, or
  /// breakpoints that do not start at 0 and strictly increase.
  void validate() const;
};

struct BucketSpec {
  Rate rate;
  DataVolume capacity;
};

enum class Mode { kHybrid, kLegacy };

std::string_view to_string(Mode mode);

struct SubscriberQoS {
  std::string subscriber_id;
  DataVolume offered_volume;
  DataVolume granted_volume;
  Rate mean_granted_rate;
  /// granted / offered, 1 when nothing was offered.
  double satisfaction = 1.0;
};

struct GroupMetrics {
  /// Volume admitted at the shared link.
  DataVolume total_conformant;
  /// Link capacity left idle while some demand went unserved.
  DataVolume wasted_capacity;
};

/// Granted rates from `time` until the next sample.
struct RateSample {
  TimeSpan time;
  std::vector<Rate> granted;
};

struct SimulationResult {
  Mode mode = Mode::kHybrid;
  std::string scenario;
  TimeSpan step;
  TimeSpan horizon;
  std::vector<UsageRecord> usage;
  std::vector<SubscriberQoS> qos;
  GroupMetrics group;
  std::vector<RateSample> series;
  std::vector<std::string> warnings;
};

inline constexpr double kDefaultStep = 1.0;

/// Two-level shaping: the group's aggregate demand passes one virtual
/// bucket (TGR_H, TBS_H), the admitted rate is shared by `allocate`, and
/// each member's own bucket (TGR_L, TBS_L) only classifies the grant into
/// conformant and excess volume. Buckets start full. Breakpoints off the
/// step grid are snapped to it with a warning.
///
/// Throws InfeasiblePlan if N * TGR_L > TGR_H and ConfigError if the
/// scenario does not have exactly N subscribers.
SimulationResult run_hybrid(const HybridPlan& plan, BucketSpec group, const DemandScenario& scenario,
                            TimeSpan step = TimeSpan(kDefaultStep));

/// Per-subscriber shaping only: non-conformant traffic is dropped and the
/// link (at `link_rate`) cannot lend idle capacity to busy subscribers.
SimulationResult run_legacy(std::span<const BucketSpec> subscribers, Rate link_rate,
                            const DemandScenario& scenario, TimeSpan step = TimeSpan(kDefaultStep));

/// The month-long extremes: one member demanding `saturating` with the rest
/// idle, and every member demanding `saturating`. Ids are "sub-1".."sub-N".
std::pair<DemandScenario, DemandScenario> extreme_case_scenarios(const HybridPlan& plan, TimeSpan month,
                                                                 Rate saturating);

DemandScenario idle_scenario(int n_subscribers, TimeSpan horizon, std::string name = "idle");

}  // namespace hybridplan

#endif  // HYBRIDPLAN_SIMULATOR_HPP
