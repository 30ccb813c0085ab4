#ifndef HYBRIDPLAN_DOCUMENTS_HPP
#define HYBRIDPLAN_DOCUMENTS_HPP

// JSON documents exchanged between the CLI commands. Field names carry
// their unit (rate_mbps, price_gbp, bucket_mbit, ..._s). Money is always a
// decimal string with six places. Objects keep insertion order, so a
// document that is read and written again is byte-identical.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hybridplan/billing.hpp"
#include "hybridplan/planner.hpp"
#include "hybridplan/simulator.hpp"

namespace hybridplan {

using Json = nlohmann::ordered_json;

struct Config {
  FlatRatePlan lower;
  FlatRatePlan higher;
  TimeSpan month_length = kDefaultMonth;
  NPolicy n_policy = PickMax{};
  SlopePolicy slope_policy = PickMax{};
  TimeSpan step{kDefaultStep};
  Rate saturating_rate;  // defaults to the higher plan's rate
  std::vector<DemandScenario> scenarios;
};

struct PlanDocument {
  HybridPlan plan;
  std::optional<PlanBounds> bounds;
};

/// All parse_* functions throw ConfigError on missing or malformed fields.
Config parse_config(const Json& doc);

Json to_json(const FlatRatePlan& plan);
FlatRatePlan parse_flat_plan(const Json& doc);

Json to_json(const PlanDocument& doc);
PlanDocument parse_plan(const Json& doc);

Json to_json(const Check& check);
Json to_json(const Bill& bill);

Json results_to_json(std::span<const SimulationResult> runs);
std::vector<SimulationResult> parse_results(const Json& doc);

/// Long-format CSV: scenario,mode,time_s,subscriber_id,granted_mbps. One
/// row per subscriber at every instant the granted rates change.
std::string timeseries_csv(std::span<const SimulationResult> runs);

}  // namespace hybridplan

#endif  // HYBRIDPLAN_DOCUMENTS_HPP
