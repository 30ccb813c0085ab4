#include "hybridplan/documents.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>

#include "hybridplan/errors.hpp"

namespace hybridplan {

namespace {

const Json& field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ConfigError(std::string("missing field '") + key + "'");
  }
  return doc.at(key);
}

double number(const Json& doc, const char* key) {
  const Json& v = field(doc, key);
  if (!v.is_number()) {
    throw ConfigError(std::string("field '") + key + "' must be a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw ConfigError(std::string("field '") + key + "' must be finite");
  }
  return x;
}

template <typename Q>
Q quantity(const Json& doc, const char* key) {
  try {
    return Q(number(doc, key));
  } catch (const std::invalid_argument&) {
    throw ConfigError(std::string("field '") + key + "' must be non-negative");
  }
}

Money money(const Json& doc, const char* key) {
  const Json& v = field(doc, key);
  try {
    if (v.is_string()) return Money::from_pounds(std::string_view(v.get_ref<const std::string&>()));
    if (v.is_number()) return Money::from_pounds(v.get<double>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
  throw ConfigError(std::string("field '") + key + "' must be a decimal string or number");
}

std::string text(const Json& doc, const char* key) {
  const Json& v = field(doc, key);
  if (!v.is_string()) {
    throw ConfigError(std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

Json optional_volume(const std::optional<DataVolume>& v) {
  return v ? Json(v->value()) : Json(nullptr);
}

NPolicy parse_n_policy(const Json& v) {
  if (v.is_string()) {
    if (v == "max") return PickMax{};
    if (v == "min") return PickMin{};
  } else if (v.is_object() && v.contains("given") && v.at("given").is_number_integer()) {
    return GivenN{v.at("given").get<int>()};
  }
  throw ConfigError("n_policy must be \"max\", \"min\" or {\"given\": <integer>}");
}

SlopePolicy parse_slope_policy(const Json& v) {
  if (v.is_string()) {
    if (v == "max") return PickMax{};
    if (v == "min") return PickMin{};
  } else if (v.is_object() && v.contains("given")) {
    return GivenSlope{quantity<PriceSlope>(v, "given")};
  }
  throw ConfigError("alpha_policy must be \"max\", \"min\" or {\"given\": <gbp per mbit>}");
}

DemandScenario parse_scenario(const Json& doc) {
  DemandScenario s;
  s.name = text(doc, "name");
  s.horizon = quantity<TimeSpan>(doc, "horizon_s");
  if (doc.contains("subscribers")) {
    for (const Json& sub : field(doc, "subscribers")) {
      SubscriberTrace trace;
      trace.id = text(sub, "id");
      if (sub.contains("trace")) {
        for (const Json& bp : sub.at("trace")) {
          trace.breakpoints.push_back({quantity<TimeSpan>(bp, "start_s"), quantity<Rate>(bp, "rate_mbps")});
        }
      }
      s.subscribers.push_back(std::move(trace));
    }
  }
  s.validate();
  return s;
}

}  // namespace

Json to_json(const FlatRatePlan& plan) {
  Json j;
  j["price_gbp"] = plan.monthly_price.to_string();
  j["rate_mbps"] = plan.token_generation_rate.value();
  j["bucket_mbit"] = optional_volume(plan.token_bucket_size);
  return j;
}

FlatRatePlan parse_flat_plan(const Json& doc) {
  FlatRatePlan plan;
  plan.monthly_price = money(doc, "price_gbp");
  plan.token_generation_rate = quantity<Rate>(doc, "rate_mbps");
  if (doc.contains("bucket_mbit") && !doc.at("bucket_mbit").is_null()) {
    plan.token_bucket_size = quantity<DataVolume>(doc, "bucket_mbit");
  }
  return plan;
}

Config parse_config(const Json& doc) {
  Config c;
  c.lower = parse_flat_plan(field(doc, "lower_plan"));
  c.higher = parse_flat_plan(field(doc, "higher_plan"));
  try {
    check_plan_pair(c.lower, c.higher);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (doc.contains("month_length_s")) c.month_length = quantity<TimeSpan>(doc, "month_length_s");
  if (!(c.month_length.value() > 0.0)) throw ConfigError("month_length_s must be positive");

  if (doc.contains("design")) {
    const Json& d = doc.at("design");
    if (d.contains("n_policy")) c.n_policy = parse_n_policy(d.at("n_policy"));
    if (d.contains("alpha_policy")) c.slope_policy = parse_slope_policy(d.at("alpha_policy"));
  }

  c.saturating_rate = c.higher.token_generation_rate;
  if (doc.contains("simulation")) {
    const Json& s = doc.at("simulation");
    if (s.contains("step_s")) c.step = quantity<TimeSpan>(s, "step_s");
    if (s.contains("saturating_rate_mbps")) c.saturating_rate = quantity<Rate>(s, "saturating_rate_mbps");
  }
  if (!(c.step.value() > 0.0)) throw ConfigError("step_s must be positive");

  std::set<std::string> names;
  if (doc.contains("scenarios")) {
    for (const Json& s : doc.at("scenarios")) {
      c.scenarios.push_back(parse_scenario(s));
      if (!names.insert(c.scenarios.back().name).second) {
        throw ConfigError("duplicate scenario name '" + c.scenarios.back().name + "'");
      }
    }
  }
  return c;
}

Json to_json(const PlanDocument& doc) {
  const HybridPlan& p = doc.plan;
  Json plan;
  plan["n_subscribers"] = p.n_subscribers;
  plan["base_price_gbp"] = p.base_price.to_string();
  plan["slope_gbp_per_mbit"] = p.slope.value();
  plan["rate_mbps"] = p.token_generation_rate.value();
  plan["bucket_mbit"] = p.token_bucket_size.value();
  plan["month_length_s"] = p.month_length.value();

  Json j;
  j["plan"] = std::move(plan);
  if (doc.bounds) {
    const PlanBounds& b = *doc.bounds;
    Json bounds;
    bounds["n_min"] = b.n.n_min;
    bounds["n_max"] = b.n.n_max;
    bounds["n_lowest"] = b.n.lowest;
    bounds["n_highest"] = b.n.highest;
    bounds["alpha_min_gbp_per_mbit"] = b.alpha.alpha_min.value();
    bounds["alpha_max_gbp_per_mbit"] = b.alpha.alpha_max.value();
    bounds["u_max_mbit"] = b.u_max.value();
    j["bounds"] = std::move(bounds);
  }
  return j;
}

PlanDocument parse_plan(const Json& doc) {
  PlanDocument out;
  const Json& p = field(doc, "plan");
  const Json& n = field(p, "n_subscribers");
  if (!n.is_number_integer() || n.get<long long>() < 1 || n.get<long long>() > 1'000'000) {
    throw ConfigError("n_subscribers must be a positive integer");
  }
  out.plan.n_subscribers = n.get<int>();
  out.plan.base_price = money(p, "base_price_gbp");
  out.plan.slope = quantity<PriceSlope>(p, "slope_gbp_per_mbit");
  out.plan.token_generation_rate = quantity<Rate>(p, "rate_mbps");
  out.plan.token_bucket_size = quantity<DataVolume>(p, "bucket_mbit");
  out.plan.month_length = quantity<TimeSpan>(p, "month_length_s");

  if (doc.contains("bounds")) {
    const Json& b = doc.at("bounds");
    PlanBounds bounds;
    bounds.n.n_min = number(b, "n_min");
    bounds.n.n_max = number(b, "n_max");
    bounds.n.lowest = field(b, "n_lowest").get<int>();
    bounds.n.highest = field(b, "n_highest").get<int>();
    bounds.alpha.alpha_min = quantity<PriceSlope>(b, "alpha_min_gbp_per_mbit");
    bounds.alpha.alpha_max = quantity<PriceSlope>(b, "alpha_max_gbp_per_mbit");
    bounds.u_max = quantity<DataVolume>(b, "u_max_mbit");
    out.bounds = bounds;
  }
  return out;
}

Json to_json(const Check& check) {
  Json j;
  j["name"] = std::string(name(check.inequality));
  j["formula"] = std::string(formula(check.inequality));
  j["lhs"] = check.lhs;
  j["rhs"] = check.rhs;
  j["passed"] = check.passed;
  j["detail"] = check.detail;
  return j;
}

Json to_json(const Bill& bill) {
  Json j;
  j["subscriber_id"] = bill.subscriber_id;
  j["base_gbp"] = bill.base.to_string();
  j["usage_charge_gbp"] = bill.usage_charge.to_string();
  j["total_gbp"] = bill.total.to_string();
  return j;
}

Json results_to_json(std::span<const SimulationResult> runs) {
  Json list = Json::array();
  for (const auto& r : runs) {
    Json run;
    run["scenario"] = r.scenario;
    run["mode"] = std::string(to_string(r.mode));
    run["step_s"] = r.step.value();
    run["horizon_s"] = r.horizon.value();
    Json usage = Json::array();
    for (const auto& u : r.usage) {
      Json e;
      e["subscriber_id"] = u.subscriber_id;
      e["conformant_mbit"] = u.conformant_volume.value();
      e["excess_mbit"] = u.excess_volume.value();
      e["month_length_s"] = u.month_length.value();
      usage.push_back(std::move(e));
    }
    run["usage"] = std::move(usage);
    Json qos = Json::array();
    for (const auto& q : r.qos) {
      Json e;
      e["subscriber_id"] = q.subscriber_id;
      e["offered_mbit"] = q.offered_volume.value();
      e["granted_mbit"] = q.granted_volume.value();
      e["mean_granted_mbps"] = q.mean_granted_rate.value();
      e["satisfaction"] = q.satisfaction;
      qos.push_back(std::move(e));
    }
    run["qos"] = std::move(qos);
    Json group;
    group["total_conformant_mbit"] = r.group.total_conformant.value();
    group["wasted_capacity_mbit"] = r.group.wasted_capacity.value();
    run["group"] = std::move(group);
    run["warnings"] = r.warnings;
    list.push_back(std::move(run));
  }
  Json j;
  j["runs"] = std::move(list);
  return j;
}

std::vector<SimulationResult> parse_results(const Json& doc) {
  std::vector<SimulationResult> runs;
  for (const Json& run : field(doc, "runs")) {
    SimulationResult r;
    r.scenario = text(run, "scenario");
    const std::string mode = text(run, "mode");
    if (mode == "hybrid") {
      r.mode = Mode::kHybrid;
    } else if (mode == "legacy") {
      r.mode = Mode::kLegacy;
    } else {
      throw ConfigError("unknown mode '" + mode + "'");
    }
    r.step = quantity<TimeSpan>(run, "step_s");
    r.horizon = quantity<TimeSpan>(run, "horizon_s");
    for (const Json& e : field(run, "usage")) {
      r.usage.push_back(UsageRecord{text(e, "subscriber_id"), quantity<DataVolume>(e, "conformant_mbit"),
                                    quantity<DataVolume>(e, "excess_mbit"),
                                    quantity<TimeSpan>(e, "month_length_s")});
    }
    for (const Json& e : field(run, "qos")) {
      SubscriberQoS q;
      q.subscriber_id = text(e, "subscriber_id");
      q.offered_volume = quantity<DataVolume>(e, "offered_mbit");
      q.granted_volume = quantity<DataVolume>(e, "granted_mbit");
      q.mean_granted_rate = quantity<Rate>(e, "mean_granted_mbps");
      q.satisfaction = number(e, "satisfaction");
      r.qos.push_back(std::move(q));
    }
    const Json& g = field(run, "group");
    r.group.total_conformant = quantity<DataVolume>(g, "total_conformant_mbit");
    r.group.wasted_capacity = quantity<DataVolume>(g, "wasted_capacity_mbit");
    if (run.contains("warnings")) r.warnings = run.at("warnings").get<std::vector<std::string>>();
    runs.push_back(std::move(r));
  }
  return runs;
}

std::string timeseries_csv(std::span<const SimulationResult> runs) {
  std::ostringstream out;
  out << "scenario,mode,time_s,subscriber_id,granted_mbps\n";
  char buf[64];
  for (const auto& r : runs) {
    for (const auto& sample : r.series) {
      for (std::size_t i = 0; i < sample.granted.size() && i < r.qos.size(); ++i) {
        out << r.scenario << ',' << to_string(r.mode) << ',';
        std::snprintf(buf, sizeof buf, "%.17g", sample.time.value());
        out << buf << ',' << r.qos[i].subscriber_id << ',';
        std::snprintf(buf, sizeof buf, "%.17g", sample.granted[i].value());
        out << buf << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace hybridplan
