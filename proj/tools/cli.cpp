#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "hybridplan/allocator.hpp"
#include "hybridplan/errors.hpp"

namespace hybridplan::cli {

namespace {

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  out << body;
  if (!out.flush()) {
    throw IoError("write to '" + path + "' failed");
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void emit(const Json& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << dump(doc);
  } else {
    write_text(path, dump(doc));
  }
}

std::string csv_path_for(const std::string& out_path) {
  std::filesystem::path p(out_path);
  p.replace_extension(".timeseries.csv");
  return p.string();
}

HybridPlan member_plan_defaults(const Config& config, const HybridPlan& plan) {
  HybridPlan p = plan;
  if (config.lower.token_bucket_size) p.token_bucket_size = *config.lower.token_bucket_size;
  return p;
}

void print_bounds(std::ostream& out, const PlanDocument& doc) {
  const HybridPlan& p = doc.plan;
  out << "Hybrid plan bounds\n";
  if (doc.bounds) {
    const PlanBounds& b = *doc.bounds;
    out << fmt::format("  {:<28} {:.4f} <= N <= {:.4f}  (integer range [{}, {}])\n", "subscribers", b.n.n_min,
                       b.n.n_max, b.n.lowest, b.n.highest);
    out << fmt::format("  {:<28} {:.4g} <= alpha <= {:.4g} GBP/Mbit\n", "usage slope", b.alpha.alpha_min.value(),
                       b.alpha.alpha_max.value());
    out << fmt::format("  {:<28} {:.4g} Mbit\n", "u_max (approximate)", b.u_max.value());
  }
  out << "Hybrid plan\n";
  out << fmt::format("  {:<28} {}\n", "subscribers (N)", p.n_subscribers);
  out << fmt::format("  {:<28} GBP {} + {:.4g} x u\n", "monthly price", p.base_price.to_string(), p.slope.value());
  out << fmt::format("  {:<28} {} Mbit/s\n", "token generation rate", p.token_generation_rate.value());
  out << fmt::format("  {:<28} {} Mbit\n", "token bucket size", p.token_bucket_size.value());
  out << fmt::format("  {:<28} {} s\n", "month length", p.month_length.value());
}

void print_checks(std::ostream& out, const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    out << fmt::format("  [{}] {:<48} lhs={:<14.8g} rhs={:<14.8g} {}\n", c.passed ? "PASS" : "FAIL",
                       formula(c.inequality), c.lhs, c.rhs, c.detail);
  }
}

void print_bills(std::ostream& out, const Config& config, const HybridPlan& plan, const BilledRun& run) {
  out << fmt::format("Bills for scenario '{}'\n", run.scenario);
  for (const auto& b : run.bills) {
    out << fmt::format("  {:<12} base {}  usage {}  total {}\n", b.subscriber_id, b.base.to_string(),
                       b.usage_charge.to_string(), b.total.to_string());
  }
  out << fmt::format("  revenue {}  vs P_H {}  vs N*P_L {}\n", run.requirements.revenue.to_string(),
                     config.higher.monthly_price.to_string(),
                     (config.lower.monthly_price * plan.n_subscribers).to_string());
  print_checks(out, run.requirements.checks);
}

Json billed_to_json(const Config& config, const HybridPlan& plan, const BilledRun& run) {
  Json j;
  j["scenario"] = run.scenario;
  Json bills = Json::array();
  for (const auto& b : run.bills) bills.push_back(to_json(b));
  j["bills"] = std::move(bills);
  j["revenue_gbp"] = run.requirements.revenue.to_string();
  Json cmp;
  cmp["p_high_gbp"] = config.higher.monthly_price.to_string();
  cmp["n_times_p_low_gbp"] = (config.lower.monthly_price * plan.n_subscribers).to_string();
  j["comparison"] = std::move(cmp);
  Json reqs = Json::array();
  for (const auto& c : run.requirements.checks) reqs.push_back(to_json(c));
  j["requirements"] = std::move(reqs);
  return j;
}

Json checks_to_json(const std::vector<Check>& checks) {
  Json list = Json::array();
  for (const auto& c : checks) list.push_back(to_json(c));
  return list;
}

}  // namespace

PlanDocument design(const Config& config) {
  const HybridPlan plan =
      design_hybrid_plan(config.lower, config.higher, config.month_length, config.n_policy, config.slope_policy);
  return PlanDocument{plan, plan_bounds(config.lower, config.higher, plan.n_subscribers, config.month_length)};
}

std::vector<DemandScenario> select_scenarios(const Config& config, const HybridPlan& plan,
                                             std::optional<int> builtin_case) {
  auto [case1, case2] = extreme_case_scenarios(plan, config.month_length, config.saturating_rate);
  if (builtin_case) {
    if (*builtin_case == 1) return {std::move(case1)};
    if (*builtin_case == 2) return {std::move(case2)};
    throw ConfigError("--builtin-case must be 1 or 2");
  }
  if (config.scenarios.empty()) {
    return {std::move(case1), std::move(case2)};
  }
  std::vector<DemandScenario> out;
  for (const auto& s : config.scenarios) {
    out.push_back(s.subscribers.empty() ? idle_scenario(plan.n_subscribers, s.horizon, s.name) : s);
  }
  return out;
}

std::vector<SimulationResult> simulate(const Config& config, const HybridPlan& plan,
                                       const SimulateOptions& options) {
  const auto scenarios = select_scenarios(config, plan, options.builtin_case);
  const TimeSpan step = options.step.value_or(config.step);
  const HybridPlan members = member_plan_defaults(config, plan);
  const BucketSpec group{config.higher.token_generation_rate,
                         config.higher.token_bucket_size.value_or(DataVolume{})};
  const std::vector<BucketSpec> shapers(
      static_cast<std::size_t>(plan.n_subscribers),
      BucketSpec{members.token_generation_rate, members.token_bucket_size});

  std::vector<std::future<SimulationResult>> pending;
  for (const auto& s : scenarios) {
    if (options.modes != ModeSelection::kLegacy) {
      pending.push_back(std::async(std::launch::async, [&, s] { return run_hybrid(members, group, s, step); }));
    }
    if (options.modes != ModeSelection::kHybrid) {
      pending.push_back(std::async(std::launch::async, [&, s] {
        return run_legacy(shapers, config.higher.token_generation_rate, s, step);
      }));
    }
  }
  std::vector<SimulationResult> results;
  for (auto& f : pending) results.push_back(f.get());
  return results;
}

std::vector<BilledRun> bill(const Config& config, const HybridPlan& plan,
                            std::span<const SimulationResult> results) {
  std::vector<BilledRun> out;
  for (const auto& r : results) {
    if (r.mode != Mode::kHybrid) continue;
    if (r.usage.size() != static_cast<std::size_t>(plan.n_subscribers)) {
      throw ConfigError("results for '" + r.scenario + "' have " + std::to_string(r.usage.size()) +
                        " subscribers but the plan has " + std::to_string(plan.n_subscribers));
    }
    out.push_back(BilledRun{r.scenario, bill_group(plan, r.usage),
                            check_requirements(plan, config.lower, config.higher, r.usage)});
  }
  return out;
}

bool ReportOutcome::passed() const {
  if (!validation.passed()) return false;
  for (const auto& b : billed) {
    if (!b.requirements.passed()) return false;
  }
  return true;
}

ReportOutcome report(const Config& config, const SimulateOptions& options) {
  ReportOutcome outcome;
  outcome.plan = design(config);
  outcome.validation = validate_hybrid_plan(outcome.plan.plan, config.lower, config.higher);
  outcome.runs = simulate(config, outcome.plan.plan, options);
  outcome.billed = bill(config, outcome.plan.plan, outcome.runs);
  return outcome;
}

Json to_json(const ReportOutcome& outcome) {
  Json j = hybridplan::to_json(outcome.plan);
  j["validation"] = checks_to_json(outcome.validation.checks);
  j["results"] = results_to_json(outcome.runs).at("runs");
  Json billed = Json::array();
  for (const auto& b : outcome.billed) {
    Json e;
    e["scenario"] = b.scenario;
    e["revenue_gbp"] = b.requirements.revenue.to_string();
    Json bills = Json::array();
    for (const auto& bill : b.bills) bills.push_back(hybridplan::to_json(bill));
    e["bills"] = std::move(bills);
    e["requirements"] = checks_to_json(b.requirements.checks);
    billed.push_back(std::move(e));
  }
  j["billing"] = std::move(billed);
  j["passed"] = outcome.passed();
  return j;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Design, simulate and bill hybrid ISP service plans"};
  app.require_subcommand(1);

  std::string config_path;
  std::string plan_path;
  std::string results_path;
  std::string out_path;
  double step = 0.0;
  std::string mode = "hybrid";
  int builtin_case = 0;

  auto* design_cmd = app.add_subcommand("design", "Derive N and alpha from the plan pair");
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a month of traffic under the plan");
  auto* bill_cmd = app.add_subcommand("bill", "Bill simulated usage and check requirements");
  auto* report_cmd = app.add_subcommand("report", "design + simulate + bill in one run");

  for (auto* cmd : {design_cmd, simulate_cmd, bill_cmd, report_cmd}) {
    cmd->add_option("--config", config_path, "Configuration JSON")->required();
    cmd->add_option("--out", out_path, "Output document path (stdout if omitted)");
  }
  simulate_cmd->add_option("--plan", plan_path, "Plan JSON from `design`")->required();
  bill_cmd->add_option("--plan", plan_path, "Plan JSON from `design`")->required();
  bill_cmd->add_option("--results", results_path, "Results JSON from `simulate`")->required();
  for (auto* cmd : {simulate_cmd, report_cmd}) {
    cmd->add_option("--step", step, "Simulation step in seconds")->check(CLI::PositiveNumber);
    cmd->add_option("--mode", mode, "hybrid|legacy|both")->check(CLI::IsMember({"hybrid", "legacy", "both"}));
    cmd->add_option("--builtin-case", builtin_case, "Run built-in extreme case 1 or 2")
        ->check(CLI::IsMember({1, 2}));
  }
  report_cmd->get_option("--mode")->default_str("both");
  bool mode_given = false;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const Config config = parse_config(read_json(config_path));
    SimulateOptions options;
    if (builtin_case != 0) options.builtin_case = builtin_case;
    if (step > 0.0) options.step = TimeSpan(step);
    mode_given = (report_cmd->parsed() ? report_cmd : simulate_cmd)->count("--mode") > 0;
    const std::string effective_mode = (report_cmd->parsed() && !mode_given) ? "both" : mode;
    options.modes = effective_mode == "legacy" ? ModeSelection::kLegacy
                    : effective_mode == "both" ? ModeSelection::kBoth
                                               : ModeSelection::kHybrid;

    if (design_cmd->parsed()) {
      const PlanDocument doc = design(config);
      print_bounds(out, doc);
      const ValidationReport validation = validate_hybrid_plan(doc.plan, config.lower, config.higher);
      out << "Plan requirements\n";
      print_checks(out, validation.checks);
      emit(hybridplan::to_json(doc), out_path, out);
      return validation.passed() ? kOk : kValidationFailure;
    }

    if (simulate_cmd->parsed()) {
      const PlanDocument doc = parse_plan(read_json(plan_path));
      const auto results = simulate(config, doc.plan, options);
      for (const auto& r : results) {
        for (const auto& w : r.warnings) err << "warning: " << r.scenario << ": " << w << "\n";
      }
      emit(results_to_json(results), out_path, out);
      if (!out_path.empty()) write_text(csv_path_for(out_path), timeseries_csv(results));
      return kOk;
    }

    if (bill_cmd->parsed()) {
      const PlanDocument doc = parse_plan(read_json(plan_path));
      const auto results = parse_results(read_json(results_path));
      const auto billed = bill(config, doc.plan, results);
      const ValidationReport validation = validate_hybrid_plan(doc.plan, config.lower, config.higher);
      out << "Plan requirements\n";
      print_checks(out, validation.checks);
      bool ok = validation.passed();
      Json runs = Json::array();
      for (const auto& b : billed) {
        print_bills(out, config, doc.plan, b);
        runs.push_back(billed_to_json(config, doc.plan, b));
        ok = ok && b.requirements.passed();
      }
      Json j;
      j["plan_checks"] = checks_to_json(validation.checks);
      j["runs"] = std::move(runs);
      if (!out_path.empty()) emit(j, out_path, out);
      return ok ? kOk : kValidationFailure;
    }

    const ReportOutcome outcome = report(config, options);
    print_bounds(out, outcome.plan);
    out << "Plan requirements\n";
    print_checks(out, outcome.validation.checks);
    for (const auto& r : outcome.runs) {
      out << fmt::format("Scenario '{}' ({}): wasted capacity {:.6g} Mbit\n", r.scenario, to_string(r.mode),
                         r.group.wasted_capacity.value());
      for (std::size_t i = 0; i < r.usage.size(); ++i) {
        out << fmt::format("  {:<12} granted {:.6g} Mbit  excess u = {:.6g} Mbit  satisfaction {:.4f}\n",
                           r.usage[i].subscriber_id, r.qos[i].granted_volume.value(),
                           r.usage[i].excess_volume.value(), r.qos[i].satisfaction);
      }
    }
    for (const auto& b : outcome.billed) print_bills(out, config, outcome.plan.plan, b);
    if (!out_path.empty()) {
      emit(to_json(outcome), out_path, out);
      write_text(csv_path_for(out_path), timeseries_csv(outcome.runs));
    }
    return outcome.passed() ? kOk : kValidationFailure;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const NoValidPlan& e) {
    err << "error: no valid plan: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const OutOfBounds& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const MissingParameter& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InfeasibleAllocation& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace hybridplan::cli
