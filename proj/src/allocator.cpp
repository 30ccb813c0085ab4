#include "hybridplan/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hybridplan {

namespace {

// Relative slack for the guaranteed-share check; absorbs round-off when the
// group is sized exactly at N * TGR_L == TGR_H.
constexpr double kFeasibilitySlack = 1e-9;

}  // namespace

InfeasibleAllocation::InfeasibleAllocation(Rate capacity, Rate required)
    : std::runtime_error("guaranteed rates " + std::to_string(required.value()) +
                         " Mbit/s exceed capacity " + std::to_string(capacity.value()) +
                         " Mbit/s (N * TGR_L <= TGR_H violated)"),
      shortfall_(required - capacity) {}

AllocationResult allocate(Rate capacity, std::span<const SubscriberState> subscribers) {
  const std::size_t n = subscribers.size();

  std::vector<std::size_t> by_id(n);
  std::iota(by_id.begin(), by_id.end(), std::size_t{0});
  std::sort(by_id.begin(), by_id.end(),
            [&](std::size_t a, std::size_t b) { return subscribers[a].id < subscribers[b].id; });
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && subscribers[by_id[k]].id == subscribers[by_id[k - 1]].id) {
      throw std::invalid_argument("duplicate subscriber id " + std::to_string(subscribers[by_id[k]].id));
    }
    if (!(subscribers[by_id[k]].weight.value() > 0.0)) {
      throw std::invalid_argument("subscriber weight must be positive");
    }
  }

  AllocationResult result;
  result.grants.resize(n);
  double guaranteed_total = 0.0;
  for (std::size_t i : by_id) {
    const auto& s = subscribers[i];
    const Rate floor = std::min(s.demand, s.guaranteed_rate);
    result.grants[i] = Grant{s.id, floor, floor, Rate{}};
    guaranteed_total += floor.value();
  }
  if (guaranteed_total > capacity.value() * (1.0 + kFeasibilitySlack)) {
    throw InfeasibleAllocation(capacity, Rate(guaranteed_total));
  }

  // Water-fill the leftover over subscribers with unmet demand, lowest
  // cap/weight first.
  struct Pending {
    std::size_t index;
    double cap;
    double weight;
    double level;  // cap / weight
  };
  std::vector<Pending> pending;
  pending.reserve(n);
  for (std::size_t i : by_id) {
    const auto& s = subscribers[i];
    const double cap = s.demand.value() - result.grants[i].guaranteed_part.value();
    if (cap > 0.0) {
      pending.push_back({i, cap, s.weight.value(), cap / s.weight.value()});
    }
  }
  std::stable_sort(pending.begin(), pending.end(),
                   [](const Pending& a, const Pending& b) { return a.level < b.level; });

  std::vector<double> weight_suffix(pending.size() + 1, 0.0);
  for (std::size_t k = pending.size(); k-- > 0;) {
    weight_suffix[k] = weight_suffix[k + 1] + pending[k].weight;
  }

  double leftover = std::max(0.0, capacity.value() - guaranteed_total);
  for (std::size_t k = 0; k < pending.size(); ++k) {
    const Pending& p = pending[k];
    const double level = leftover / weight_suffix[k];
    double excess = 0.0;
    if (p.level <= level) {
      excess = p.cap;
      if (std::isfinite(leftover)) {
        leftover = std::max(0.0, leftover - excess);
      }
    } else {
      // Nobody further along saturates; share the rest at this level.
      for (std::size_t j = k; j < pending.size(); ++j) {
        auto& g = result.grants[pending[j].index];
        g.excess_part = Rate(pending[j].weight * level);
        g.granted = g.guaranteed_part + g.excess_part;
      }
      break;
    }
    auto& g = result.grants[p.index];
    g.excess_part = Rate(excess);
    g.granted = g.guaranteed_part + g.excess_part;
  }
  return result;
}

std::vector<Rate> progressive_fill_oracle(Rate capacity, std::span<const Rate> caps,
                                          std::span<const Rate> weights, Rate step) {
  if (caps.size() != weights.size()) {
    throw std::invalid_argument("caps and weights differ in length");
  }
  if (!(step.value() > 0.0)) {
    throw std::invalid_argument("oracle step must be positive");
  }
  if (!std::isfinite(capacity.value())) {
    throw std::invalid_argument("oracle capacity must be finite");
  }
  const std::size_t n = caps.size();
  std::vector<double> granted(n, 0.0);
  double remaining = capacity.value();
  while (remaining > 0.0) {
    double active_weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (granted[i] < caps[i].value()) active_weight += weights[i].value();
    }
    if (active_weight == 0.0) break;

    const double round = std::min(step.value(), remaining);
    double handed = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (granted[i] >= caps[i].value()) continue;
      const double share = round * weights[i].value() / active_weight;
      const double room = caps[i].value() - granted[i];
      if (share >= room) {
        granted[i] = caps[i].value();
        handed += room;
      } else {
        granted[i] += share;
        handed += share;
      }
    }
    if (handed <= 0.0) break;
    remaining -= handed;
  }

  std::vector<Rate> out;
  out.reserve(n);
  for (double g : granted) out.emplace_back(g);
  return out;
}

}  // namespace hybridplan
