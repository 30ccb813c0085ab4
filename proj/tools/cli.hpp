#ifndef HYBRIDPLAN_TOOLS_CLI_HPP
#define HYBRIDPLAN_TOOLS_CLI_HPP

#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "hybridplan/billing.hpp"
#include "hybridplan/documents.hpp"
#include "hybridplan/planner.hpp"
#include "hybridplan/simulator.hpp"

namespace hybridplan::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kConfigError = 2,
  kIoError = 3,
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ModeSelection { kHybrid, kLegacy, kBoth };

struct SimulateOptions {
  /// Run only built-in case 1 or 2. Otherwise the config's scenarios, or
  /// both built-in cases when the config has none.
  std::optional<int> builtin_case;
  ModeSelection modes = ModeSelection::kHybrid;
  std::optional<TimeSpan> step;
};

PlanDocument design(const Config& config);

/// Scenarios to run for `plan`. Scenarios listed without subscribers expand
/// to N idle subscribers.
std::vector<DemandScenario> select_scenarios(const Config& config, const HybridPlan& plan,
                                             std::optional<int> builtin_case);

/// Independent runs execute concurrently; output order follows the
/// scenario list, hybrid before legacy.
std::vector<SimulationResult> simulate(const Config& config, const HybridPlan& plan,
                                       const SimulateOptions& options);

struct BilledRun {
  std::string scenario;
  std::vector<Bill> bills;
  RequirementReport requirements;
};

/// Bills every hybrid run. Throws ConfigError if a run's subscriber count
/// differs from the plan's.
std::vector<BilledRun> bill(const Config& config, const HybridPlan& plan,
                            std::span<const SimulationResult> results);

struct ReportOutcome {
  PlanDocument plan;
  ValidationReport validation;
  std::vector<SimulationResult> runs;
  std::vector<BilledRun> billed;

  bool passed() const;
};

/// design, then simulate, then bill.
ReportOutcome report(const Config& config, const SimulateOptions& options);

Json to_json(const ReportOutcome& outcome);

/// Entry point behind the executable; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hybridplan::cli

#endif  // HYBRIDPLAN_TOOLS_CLI_HPP
