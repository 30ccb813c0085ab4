#include "hybridplan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>

#include "hybridplan/allocator.hpp"
#include "hybridplan/errors.hpp"
#include "hybridplan/tbf.hpp"

namespace hybridplan {

std::string_view to_string(Mode mode) { return mode == Mode::kHybrid ? "hybrid" : "legacy"; }

void DemandScenario::validate() const {
  if (!(horizon.value() > 0.0) || !std::isfinite(horizon.value())) {
    throw ConfigError("scenario '" + name + "': horizon must be positive and finite");
  }
  std::set<std::string> seen;
  for (const auto& s : subscribers) {
    if (!seen.insert(s.id).second) {
      throw ConfigError("scenario '" + name + "': duplicate subscriber id '" + s.id + "'");
    }
    for (std::size_t k = 0; k < s.breakpoints.size(); ++k) {
      if (k == 0 && s.breakpoints[0].start.value() != 0.0) {
        throw ConfigError("scenario '" + name + "': trace of '" + s.id + "' must start at 0");
      }
      if (k > 0 && !(s.breakpoints[k].start > s.breakpoints[k - 1].start)) {
        throw ConfigError("scenario '" + name + "': breakpoints of '" + s.id + "' must strictly increase");
      }
    }
  }
}

namespace {

constexpr double kGridSlack = 1e-9;

struct Change {
  long long step_index;
  double rate;
};

struct Grid {
  long long steps = 0;
  std::vector<std::vector<Change>> changes;  // per subscriber
};

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Grid snap_to_grid(const DemandScenario& scenario, TimeSpan step, std::vector<std::string>& warnings) {
  if (!(step.value() > 0.0) || !std::isfinite(step.value())) {
    throw ConfigError("simulation step must be positive and finite");
  }
  scenario.validate();

  Grid grid;
  const double ratio = scenario.horizon.value() / step.value();
  grid.steps = std::max(1LL, std::llround(ratio));
  if (std::fabs(static_cast<double>(grid.steps) - ratio) > kGridSlack * std::max(1.0, ratio)) {
    warnings.push_back("horizon " + fmt_num(scenario.horizon.value()) + " s snapped to " +
                       std::to_string(grid.steps) + " steps of " + fmt_num(step.value()) + " s");
  }

  for (const auto& sub : scenario.subscribers) {
    std::vector<Change> changes;
    for (const auto& bp : sub.breakpoints) {
      const double pos = bp.start.value() / step.value();
      const long long index = std::llround(pos);
      if (std::fabs(static_cast<double>(index) - pos) > kGridSlack * std::max(1.0, pos)) {
        warnings.push_back("breakpoint of '" + sub.id + "' at " + fmt_num(bp.start.value()) +
                           " s snapped to " + fmt_num(static_cast<double>(index) * step.value()) + " s");
      }
      if (!changes.empty() && changes.back().step_index == index) {
        changes.back().rate = bp.rate.value();
      } else {
        changes.push_back({index, bp.rate.value()});
      }
    }
    grid.changes.push_back(std::move(changes));
  }
  return grid;
}

bool same_rates(const std::vector<Rate>& a, const std::vector<Rate>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i].value();
    const double y = b[i].value();
    if (x == y) continue;
    if (std::fabs(x - y) > 1e-9 * std::max(std::fabs(x), std::fabs(y))) return false;
  }
  return true;
}

// Drives the shared bookkeeping; `grant` maps (now, demands) to granted
// rates and reports how much the link admitted this step.
template <typename GrantFn>
SimulationResult drive(const DemandScenario& scenario, TimeSpan step, Rate link_rate, Mode mode,
                       GrantFn&& grant) {
  SimulationResult result;
  result.mode = mode;
  result.scenario = scenario.name;
  result.step = step;
  const Grid grid = snap_to_grid(scenario, step, result.warnings);
  result.horizon = TimeSpan(static_cast<double>(grid.steps) * step.value());

  const std::size_t n = scenario.subscribers.size();
  std::vector<std::size_t> cursor(n, 0);
  std::vector<Rate> demand(n);
  std::vector<double> offered(n, 0.0);
  std::vector<double> granted_volume(n, 0.0);
  double admitted_total = 0.0;
  double wasted = 0.0;
  const double dt = step.value();
  const double link_volume = link_rate.value() * dt;

  for (long long k = 0; k < grid.steps; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& changes = grid.changes[i];
      while (cursor[i] < changes.size() && changes[cursor[i]].step_index <= k) {
        demand[i] = Rate(changes[cursor[i]].rate);
        ++cursor[i];
      }
    }

    const TimeSpan now(static_cast<double>(k + 1) * dt);
    const auto [granted, admitted] = grant(now, demand);

    bool unsatisfied = false;
    double step_granted = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = demand[i].value();
      const double g = granted[i].value();
      if (d > 0.0) offered[i] += d * dt;
      granted_volume[i] += g * dt;
      step_granted += g * dt;
      if (d - g > 1e-9 * std::max(1.0, d)) unsatisfied = true;
    }
    admitted_total += admitted.value();
    if (unsatisfied) wasted += std::max(0.0, link_volume - step_granted);

    if (result.series.empty() || !same_rates(result.series.back().granted, granted)) {
      result.series.push_back({TimeSpan(static_cast<double>(k) * dt), granted});
    }
  }

  result.group.total_conformant = DataVolume(admitted_total);
  result.group.wasted_capacity = DataVolume(wasted);
  for (std::size_t i = 0; i < n; ++i) {
    SubscriberQoS q;
    q.subscriber_id = scenario.subscribers[i].id;
    q.offered_volume = DataVolume(offered[i]);
    q.granted_volume = DataVolume(granted_volume[i]);
    q.mean_granted_rate = q.granted_volume / result.horizon;
    q.satisfaction = offered[i] > 0.0 ? std::min(1.0, granted_volume[i] / offered[i]) : 1.0;
    result.qos.push_back(std::move(q));
  }
  return result;
}

}  // namespace

SimulationResult run_hybrid(const HybridPlan& plan, BucketSpec group, const DemandScenario& scenario,
                            TimeSpan step) {
  const std::size_t n = scenario.subscribers.size();
  if (n != static_cast<std::size_t>(plan.n_subscribers)) {
    throw ConfigError("scenario '" + scenario.name + "' has " + std::to_string(n) +
                      " subscribers but the plan has " + std::to_string(plan.n_subscribers));
  }
  const double group_rate = plan.n_subscribers * plan.token_generation_rate.value();
  if (group_rate > group.rate.value()) {
    throw InfeasiblePlan(std::string(formula(Inequality::kGroupCapacity)) + " violated: " +
                         fmt_num(group_rate) + " > " + fmt_num(group.rate.value()) + " Mbit/s");
  }

  TokenBucket group_bucket(group.rate, group.capacity);
  std::vector<TokenBucket> member_buckets(n, TokenBucket(plan.token_generation_rate, plan.token_bucket_size));
  std::vector<double> conformant(n, 0.0);
  std::vector<double> excess(n, 0.0);
  std::vector<SubscriberState> states(n);
  for (std::size_t i = 0; i < n; ++i) {
    states[i] = SubscriberState{i, plan.token_generation_rate, plan.token_generation_rate, Rate{}};
  }
  const double dt = step.value();

  auto grant = [&](TimeSpan now, const std::vector<Rate>& demand) {
    double offered = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      states[i].demand = demand[i];
      offered += demand[i].value() * dt;
    }
    const Conformance admitted = conform(group_bucket, DataVolume(offered), now);
    group_bucket = admitted.bucket;

    const AllocationResult shares = allocate(Rate(admitted.conformant.value() / dt), states);
    std::vector<Rate> granted(n);
    for (std::size_t i = 0; i < n; ++i) {
      granted[i] = shares.grants[i].granted;
      const Conformance split = conform(member_buckets[i], DataVolume(granted[i].value() * dt), now);
      member_buckets[i] = split.bucket;
      conformant[i] += split.conformant.value();
      excess[i] += split.excess.value();
    }
    return std::pair{std::move(granted), admitted.conformant};
  };

  SimulationResult result = drive(scenario, step, group.rate, Mode::kHybrid, grant);
  for (std::size_t i = 0; i < n; ++i) {
    result.usage.push_back(UsageRecord{scenario.subscribers[i].id, DataVolume(conformant[i]),
                                       DataVolume(excess[i]), result.horizon});
  }
  return result;
}

SimulationResult run_legacy(std::span<const BucketSpec> subscribers, Rate link_rate,
                            const DemandScenario& scenario, TimeSpan step) {
  const std::size_t n = scenario.subscribers.size();
  if (n != subscribers.size()) {
    throw ConfigError("scenario '" + scenario.name + "' has " + std::to_string(n) + " subscribers but " +
                      std::to_string(subscribers.size()) + " shapers were given");
  }
  double total_rate = 0.0;
  for (const auto& s : subscribers) total_rate += s.rate.value();
  if (total_rate > link_rate.value()) {
    throw InfeasiblePlan(std::string(formula(Inequality::kGroupCapacity)) + " violated: " +
                         fmt_num(total_rate) + " > " + fmt_num(link_rate.value()) + " Mbit/s");
  }

  std::vector<TokenBucket> buckets;
  buckets.reserve(n);
  for (const auto& s : subscribers) buckets.emplace_back(s.rate, s.capacity);
  const double dt = step.value();

  auto grant = [&](TimeSpan now, const std::vector<Rate>& demand) {
    std::vector<Rate> granted(n);
    DataVolume admitted;
    for (std::size_t i = 0; i < n; ++i) {
      const Conformance split = conform(buckets[i], DataVolume(demand[i].value() * dt), now);
      buckets[i] = split.bucket;
      granted[i] = Rate(split.conformant.value() / dt);
      admitted += split.conformant;
    }
    return std::pair{std::move(granted), admitted};
  };

  SimulationResult result = drive(scenario, step, link_rate, Mode::kLegacy, grant);
  for (std::size_t i = 0; i < n; ++i) {
    result.usage.push_back(UsageRecord{scenario.subscribers[i].id, result.qos[i].granted_volume,
                                       DataVolume{}, result.horizon});
  }
  return result;
}

std::pair<DemandScenario, DemandScenario> extreme_case_scenarios(const HybridPlan& plan, TimeSpan month,
                                                                 Rate saturating) {
  DemandScenario single = idle_scenario(plan.n_subscribers, month, "case1");
  DemandScenario all = idle_scenario(plan.n_subscribers, month, "case2");
  if (!single.subscribers.empty()) {
    single.subscribers.front().breakpoints = {Breakpoint{TimeSpan{}, saturating}};
  }
  for (auto& s : all.subscribers) {
    s.breakpoints = {Breakpoint{TimeSpan{}, saturating}};
  }
  return {std::move(single), std::move(all)};
}

DemandScenario idle_scenario(int n_subscribers, TimeSpan horizon, std::string name) {
  DemandScenario scenario;
  scenario.name = std::move(name);
  scenario.horizon = horizon;
  for (int i = 1; i <= n_subscribers; ++i) {
    scenario.subscribers.push_back(SubscriberTrace{"sub-" + std::to_string(i), {}});
  }
  return scenario;
}

}  // namespace hybridplan
