#ifndef HYBRIDPLAN_ERRORS_HPP
#define HYBRIDPLAN_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace hybridplan {

/// The plan requirements a hybrid tariff is checked against.
enum class Inequality {
  kGroupCapacity,     // N * TGR_L <= TGR_H
  kRevenueFloor,      // P_H - N * P_L <= 0, equivalently N >= P_H / P_L
  kSubscriberCap,     // P + alpha * u_max <= P_H
  kBasePrice,         // P + P(0) = P_L
  kRevenueVsHigher,   // sum of bills >= P_H
  kRevenueVsLower,    // sum of bills >= N * P_L
  kSlopeFloor,        // alpha >= max(0, (P_H - N * P_L) / u_max)
  kSlopeCeiling,      // alpha <= (P_H - P_L) / u_max
  kUsageBound,        // u_i <= u_max
};

std::string_view name(Inequality which);
std::string_view formula(Inequality which);

/// No integer N satisfies both bounds on the subscriber count.
class NoValidPlan : public std::runtime_error {
 public:
  NoValidPlan(Inequality binding, const std::string& what)
      : std::runtime_error(what), binding_(binding) {}
  Inequality binding() const { return binding_; }

 private:
  Inequality binding_;
};

/// A caller-supplied plan parameter lies outside the admissible range.
class OutOfBounds : public std::runtime_error {
 public:
  OutOfBounds(Inequality violated, const std::string& what)
      : std::runtime_error(what), violated_(violated) {}
  Inequality violated() const { return violated_; }

 private:
  Inequality violated_;
};

class MissingParameter : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally invalid input: wrong record counts, duplicate ids, bad traces.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The group cannot honour every member's guaranteed rate.
class InfeasiblePlan : public ConfigError {
  using ConfigError::ConfigError;
};

}  // namespace hybridplan

#endif  // HYBRIDPLAN_ERRORS_HPP
